#include "doctest.h"
#include "rvs/classifier.hpp"
#include "rvs/error.hpp"
#include "rvs/prompt.hpp"

using namespace rvs;
using namespace rvs::prompt;

TEST_CASE("template parsing") {
  const auto t = PromptTemplate::parse("[X]. The review is about [Z]");
  CHECK(t.input_slots() == std::vector<std::string>{"X"});
  CHECK(t.kind() == TemplateKind::Prefix);
  CHECK(PromptTemplate::parse("[X] : The review specifies [Z] type of category.").kind() ==
        TemplateKind::Cloze);
  CHECK(PromptTemplate::parse("[X1]. Sentiment is [X2]. About [Z].").input_slots() ==
        std::vector<std::string>{"X1", "X2"});

  CHECK_THROWS_AS(PromptTemplate::parse("[X] has no answer"), ValidationError);
  CHECK_THROWS_AS(PromptTemplate::parse("[X] [Z] [Z]"), ValidationError);
  CHECK_THROWS_AS(PromptTemplate::parse("[X] [X] about [Z]"), ValidationError);
  CHECK_THROWS_AS(PromptTemplate::parse("[Y] about [Z]"), ValidationError);
  CHECK_THROWS_AS(PromptTemplate::parse("[x] about [Z]"), ValidationError);
  CHECK_THROWS_AS(PromptTemplate::parse("[X] about [Z"), ValidationError);
  CHECK_THROWS_AS(PromptTemplate::parse("[X] ] [Z]"), ValidationError);
  CHECK_THROWS_AS(PromptTemplate::parse("[X] [Z]"), ValidationError);
}

TEST_CASE("escaped brackets are literal text") {
  const auto t = PromptTemplate::parse("[[note]] [X] is [Z]");
  const auto filled = fill_template(t, {{"X", "it"}});
  CHECK(filled.text() == "[note] it is [Z]");
}

TEST_CASE("fill_template and fill_answer track spans") {
  const auto t = PromptTemplate::parse("[X1]. Sentiment of the review is [X2]. The review is about [Z].");
  const auto p = fill_template(t, {{"X1", "Bad app"}, {"X2", "Negative"}});
  CHECK(p.unfilled_answer());
  REQUIRE(p.spans().size() == 2);
  CHECK(p.text().substr(p.spans()[1].offset, p.spans()[1].length) == "Negative");
  CHECK(p.text().substr(p.answer_offset(), 3) == "[Z]");

  const auto a = fill_answer(p, "bug");
  CHECK_FALSE(a.unfilled_answer());
  CHECK(a.text() == "Bad app. Sentiment of the review is Negative. The review is about bug.");
  REQUIRE(a.spans().size() == 3);
  CHECK(a.text().substr(a.spans()[2].offset, a.spans()[2].length) == "bug");
  CHECK_THROWS_AS(fill_answer(a, "again"), ValidationError);
  CHECK_THROWS_AS(fill_answer(p, ""), ValidationError);
}

TEST_CASE("fill_template rejects bad bindings") {
  const auto t = PromptTemplate::parse("[X]. The review is about [Z]");
  CHECK_THROWS_AS(fill_template(t, {}), ValidationError);
  CHECK_THROWS_AS(fill_template(t, {{"X", "a"}, {"X2", "b"}}), ValidationError);
  CHECK_THROWS_AS(fill_template(t, {{"X", "a"}, {"Z", "b"}}), ValidationError);
  try {
    fill_template(t, {});
  } catch (const ValidationError& e) {
    CHECK(e.field() == "X");
  }
}

TEST_CASE("premise stops before the answer sentence") {
  const auto t = PromptTemplate::parse(classifier::kSentimentPremiseTemplate);
  const auto p = fill_template(t, {{"X1", "It froze"}, {"X2", "Negative"}});
  CHECK(premise_text(p) == "It froze. Sentiment of the review is Negative.");
  const auto plain = fill_template(PromptTemplate::parse("About [Z] we know [X]"), {{"X", "x"}});
  CHECK(premise_text(plain) == "About  we know x");
}

TEST_CASE("hypotheses") {
  TopicLabel bug{"Bug", "a problem causing a program to crash or produce invalid outcome.", {"crash"}};
  CHECK(build_hypothesis(bug) ==
        "The review is about bug i.e. a problem causing a program to crash or produce invalid "
        "outcome.");
  CHECK(build_hypothesis(bug, HypothesisMode::NameOnly) == "The review is about bug.");
  CHECK(build_hypothesis(bug, HypothesisMode::DefinitionOnly) ==
        "The review is about a problem causing a program to crash or produce invalid outcome.");
}

TEST_CASE("verbalizer aggregation") {
  const Verbalizer mean({{"Bug", {"crash", "glitch"}}, {"Praise", {"good", "great", "nice"}}},
                        Aggregation::Mean);
  const Distribution d{{"crash", 0.5}, {"good", 0.25}, {"great", 0.125}, {"other", 0.125}};
  auto s = verbalize(d, mean);
  CHECK(s["Bug"] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(s["Praise"] == doctest::Approx(0.125).epsilon(1e-15));

  const Verbalizer sum(mean.mapping(), Aggregation::Sum);
  s = verbalize(d, sum);
  CHECK(s["Bug"] == 0.5);
  CHECK(s["Praise"] == 0.375);

  const Verbalizer max(mean.mapping(), Aggregation::Max);
  s = verbalize(d, max);
  CHECK(s["Bug"] == 0.5);
  CHECK(s["Praise"] == 0.25);

  CHECK_THROWS_AS(verbalize({}, mean), ValidationError);
  CHECK_THROWS_AS(verbalize({{"crash", 1.5}}, mean), ValidationError);
  CHECK_THROWS_AS(Verbalizer(std::map<std::string, std::vector<std::string>>{{"A", {}}}), ValidationError);
  CHECK(mean.vocabulary() == std::vector<std::string>{"crash", "glitch", "good", "great", "nice"});
}

TEST_CASE("verbalize is independent of label word order") {
  const Distribution d{{"a", 0.1}, {"b", 0.2}, {"c", 0.3}, {"d", 0.15}};
  const Verbalizer v1({{"K", {"a", "b", "c", "d"}}}, Aggregation::Sum);
  const Verbalizer v2({{"K", {"d", "c", "a", "b"}}}, Aggregation::Sum);
  CHECK(verbalize(d, v1).at("K") == verbalize(d, v2).at("K"));
}

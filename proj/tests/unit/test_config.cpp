#include <algorithm>
#include <cstdlib>
#include <optional>

#include "doctest.h"
#include "rvs/config.hpp"
#include "rvs/error.hpp"
#include "rvs/ingest.hpp"
#include "unit/fixtures.hpp"

using namespace rvs;
using config::PipelineConfig;

namespace {

struct EnvGuard {
  explicit EnvGuard(const char* value) {
    if (const char* old = std::getenv("REVIEW_VS_BACKEND_URL")) saved = old;
    if (value) {
      ::setenv("REVIEW_VS_BACKEND_URL", value, 1);
    } else {
      ::unsetenv("REVIEW_VS_BACKEND_URL");
    }
  }
  ~EnvGuard() {
    if (saved) {
      ::setenv("REVIEW_VS_BACKEND_URL", saved->c_str(), 1);
    } else {
      ::unsetenv("REVIEW_VS_BACKEND_URL");
    }
  }
  std::optional<std::string> saved;
};

}  // namespace

TEST_CASE("defaults validate") {
  PipelineConfig c;
  CHECK_NOTHROW(config::validate(c));
  CHECK(c.backend == "stub");
  CHECK(c.release_threshold == 0.8);
  CHECK(c.keyphrase.top_k == 5);
  CHECK(config::topic_labels(c).size() >= 2);
  CHECK(config::sentiment_labels(c).size() == 5);
}

TEST_CASE("file values override defaults, environment overrides the file") {
  const auto dir = fixtures::scratch("config_precedence");
  ingest::write_file(dir / "rvs.toml",
                     "backend = \"remote\"\n"
                     "backend_url = \"http://from-file:1\"\n"
                     "labels = \"labels.toml\"\n"
                     "out = \"results\"\n"
                     "[thresholds]\nrelease = 0.7\n"
                     "[keyphrase]\ntop_k = 3\nstopwords = [\"zoom\"]\n"
                     "[classifier]\nmode = \"masked\"\nnormalize = false\n");
  ingest::write_file(dir / "labels.toml", ingest::read_file(fixtures::data("labels.toml")));

  auto c = config::load(dir / "rvs.toml");
  CHECK(c.backend_url == "http://from-file:1");
  CHECK(c.labels == dir / "labels.toml");
  CHECK(c.out_dir == dir / "results");
  CHECK(c.release_threshold == 0.7);
  CHECK(c.keyphrase.top_k == 3);
  CHECK(c.keyphrase.stopwords.count("zoom") == 1);
  CHECK(c.keyphrase.stopwords.count("the") == 1);
  CHECK(c.mode == ClassificationMode::MaskedVerbalizer);
  CHECK_FALSE(c.normalize);
  CHECK_NOTHROW(config::validate(c));

  {
    EnvGuard env("http://from-env:2");
    config::apply_environment(c);
    CHECK(c.backend_url == "http://from-env:2");
  }
  {
    EnvGuard env("");
    auto d = config::load(dir / "rvs.toml");
    config::apply_environment(d);
    CHECK(d.backend_url == "http://from-file:1");
  }
}

TEST_CASE("unknown keys and bad values are rejected") {
  PipelineConfig c;
  CHECK_THROWS_AS(config::apply_toml(c, "bakend = \"stub\"\n", "."), ValidationError);
  CHECK_THROWS_AS(config::apply_toml(c, "[keyphrase]\ntopk = 2\n", "."), ValidationError);
  CHECK_THROWS_AS(config::apply_toml(c, "[extras]\nx = 1\n", "."), ValidationError);
  CHECK_THROWS_AS(config::apply_toml(c, "[classifier]\nmode = \"guess\"\n", "."), ValidationError);
  CHECK_THROWS_AS(config::apply_toml(c, "[classifier]\nhypothesis = \"both\"\n", "."),
                  ValidationError);
  CHECK_THROWS_AS(config::apply_toml(c, "jobs = 0\n", "."), ValidationError);
  CHECK_THROWS_AS(config::apply_toml(c, "[alignment]\n\"Bug\" = \"Fixes\"\n", "."),
                  ValidationError);
  try {
    config::apply_toml(c, "backend = \"stub\"\n\n[templates]\nprefix = \"x\"\n", ".");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.line() == 4);
    CHECK(e.field() == "templates.prefix");
  }
}

TEST_CASE("range checks") {
  auto rejects = [](auto mutate) {
    PipelineConfig c;
    mutate(c);
    CHECK_THROWS_AS(config::validate(c), ValidationError);
  };
  rejects([](PipelineConfig& c) { c.backend = "local"; });
  rejects([](PipelineConfig& c) { c.backend = "remote"; });
  rejects([](PipelineConfig& c) { c.release_threshold = 0.0; });
  rejects([](PipelineConfig& c) { c.release_threshold = 1.5; });
  rejects([](PipelineConfig& c) { c.keyphrase.redundancy_threshold = 1.5; });
  rejects([](PipelineConfig& c) { c.masked_template = "no answer slot [X]"; });
  rejects([](PipelineConfig& c) { c.premise_template = "[X] [Z] [X]"; });

  PipelineConfig missing;
  missing.labels = "/nonexistent/labels.toml";
  CHECK_THROWS_AS(config::validate(missing), IoError);
}

TEST_CASE("inline alignment wins over the file") {
  PipelineConfig c;
  config::apply_toml(c, "[alignment]\n\"Praise\" = \"Enhancement\"\n", ".");
  const auto a = config::alignment(c);
  CHECK(a.category_of("Praise") == ReleaseCategory::Enhancement);
  CHECK_FALSE(a.category_of("Bug").has_value());
}

TEST_CASE("stub vocabulary comes from the label words") {
  PipelineConfig c;
  const auto labels = config::topic_labels(c);
  const auto b = config::backend_config(c, labels);
  CHECK(b.kind == "stub");
  CHECK_FALSE(b.vocabulary.empty());
  CHECK(std::is_sorted(b.vocabulary.begin(), b.vocabulary.end()));
}

TEST_CASE("the example configuration loads") {
  const auto c = config::load(fixtures::data("rvs.toml"));
  CHECK_NOTHROW(config::validate(c));
  CHECK(c.jobs == 4);
  CHECK(c.out_dir == fixtures::data("../out"));
  CHECK(c.keyphrase.stopwords.count("app") == 1);
}

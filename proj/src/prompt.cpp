#include "rvs/prompt.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rvs/error.hpp"
#include "rvs/text.hpp"

namespace rvs::prompt {

std::string_view to_string(TemplateKind kind) {
  return kind == TemplateKind::Prefix ? "prefix" : "cloze";
}

namespace {

bool is_input_slot_name(std::string_view name) {
  if (name.empty() || name.front() != 'X') return false;
  return std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_slot_name_char(char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); }

bool only_trailing_punctuation(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u < 0x80 && !text::is_ascii_alnum(u);
  });
}

}  // namespace

PromptTemplate PromptTemplate::parse(std::string_view raw) {
  PromptTemplate t;
  t.raw_ = std::string(raw);
  std::string literal;
  std::size_t answers = 0;
  std::set<std::string, std::less<>> seen;

  auto flush = [&] {
    if (!literal.empty()) {
      t.segments_.push_back({false, literal});
      literal.clear();
    }
  };

  std::size_t i = 0;
  while (i < raw.size()) {
    const char c = raw[i];
    if (c == '[' && i + 1 < raw.size() && raw[i + 1] == '[') {
      literal.push_back('[');
      i += 2;
    } else if (c == ']' && i + 1 < raw.size() && raw[i + 1] == ']') {
      literal.push_back(']');
      i += 2;
    } else if (c == ']') {
      throw ValidationError("unescaped ']' at offset " + std::to_string(i) + " (write ']]')");
    } else if (c == '[') {
      std::size_t j = i + 1;
      while (j < raw.size() && is_slot_name_char(raw[j])) ++j;
      if (j == i + 1 || j >= raw.size() || raw[j] != ']') {
        throw ValidationError("malformed slot at offset " + std::to_string(i) +
                              " (write '[[' for a literal bracket)");
      }
      std::string name(raw.substr(i + 1, j - i - 1));
      if (name == kAnswerSlotName) {
        ++answers;
      } else if (is_input_slot_name(name)) {
        if (!seen.insert(name).second) throw ValidationError("duplicate input slot [" + name + "]");
        t.input_slots_.push_back(name);
      } else {
        throw ValidationError("unknown slot [" + name + "]");
      }
      flush();
      t.segments_.push_back({true, std::move(name)});
      i = j + 1;
    } else {
      literal.push_back(c);
      ++i;
    }
  }
  flush();

  if (answers != 1) {
    throw ValidationError("template must contain exactly one answer slot [Z], found " +
                          std::to_string(answers));
  }
  const bool has_text = std::any_of(t.segments_.begin(), t.segments_.end(), [](const Segment& s) {
    return !s.is_slot && !text::trim(s.value).empty();
  });
  if (!has_text) throw ValidationError("template has no text outside its slots");

  t.kind_ = TemplateKind::Prefix;
  bool after_answer = false;
  for (const auto& seg : t.segments_) {
    if (seg.is_slot && seg.value == kAnswerSlotName) {
      after_answer = true;
    } else if (after_answer && (seg.is_slot || !only_trailing_punctuation(seg.value))) {
      t.kind_ = TemplateKind::Cloze;
    }
  }
  return t;
}

FilledPrompt fill_template(const PromptTemplate& tmpl, const Bindings& bindings) {
  for (const auto& [name, value] : bindings) {
    if (name == kAnswerSlotName) {
      throw ValidationError("the answer slot [Z] cannot be bound here; use fill_answer", 0, name);
    }
    const auto& inputs = tmpl.input_slots();
    if (std::find(inputs.begin(), inputs.end(), name) == inputs.end()) {
      throw ValidationError("binding for unknown slot [" + name + "]", 0, name);
    }
  }

  FilledPrompt out;
  out.template_ = tmpl;
  out.bindings_ = bindings;
  for (const auto& seg : tmpl.segments()) {
    if (!seg.is_slot) {
      out.text_ += seg.value;
    } else if (seg.value == kAnswerSlotName) {
      out.answer_offset_ = out.text_.size();
      out.text_ += kAnswerMarker;
    } else {
      auto it = bindings.find(seg.value);
      if (it == bindings.end()) {
        throw ValidationError("missing binding for slot [" + seg.value + "]", 0, seg.value);
      }
      out.spans_.push_back({seg.value, out.text_.size(), it->second.size()});
      out.text_ += it->second;
    }
  }
  out.unfilled_answer_ = true;
  return out;
}

FilledPrompt fill_answer(const FilledPrompt& prompt, std::string_view answer) {
  if (!prompt.unfilled_answer()) throw ValidationError("the answer slot is already filled");
  if (answer.empty()) throw ValidationError("answer must not be empty");
  FilledPrompt out = prompt;
  out.text_.replace(prompt.answer_offset(), kAnswerMarker.size(), answer);
  const std::ptrdiff_t delta =
      static_cast<std::ptrdiff_t>(answer.size()) - static_cast<std::ptrdiff_t>(kAnswerMarker.size());
  for (auto& span : out.spans_) {
    if (span.offset > prompt.answer_offset()) {
      span.offset = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(span.offset) + delta);
    }
  }
  out.spans_.push_back({std::string(kAnswerSlotName), prompt.answer_offset(), answer.size()});
  out.unfilled_answer_ = false;
  return out;
}

std::string premise_text(const FilledPrompt& prompt) {
  const std::string_view text = prompt.text();
  const std::string_view before = text.substr(0, prompt.answer_offset());
  const auto boundary = before.find_last_of(".!?");
  if (boundary != std::string_view::npos) {
    return std::string(text::trim(before.substr(0, boundary + 1)));
  }
  const std::size_t marker = prompt.unfilled_answer() ? kAnswerMarker.size() : 0;
  std::string joined(before);
  joined += text.substr(prompt.answer_offset() + marker);
  return std::string(text::trim(joined));
}

std::string build_hypothesis(const TopicLabel& label, HypothesisMode mode) {
  std::string definition(text::trim(label.definition));
  while (!definition.empty() && definition.back() == '.') definition.pop_back();
  const std::string name = text::ascii_lower(label.name);
  switch (mode) {
    case HypothesisMode::NameOnly:
      return "The review is about " + name + ".";
    case HypothesisMode::DefinitionOnly:
      return "The review is about " + definition + ".";
    case HypothesisMode::NameAndDefinition:
      break;
  }
  return "The review is about " + name + " i.e. " + definition + ".";
}

std::string_view to_string(Aggregation a) {
  switch (a) {
    case Aggregation::Mean: return "mean";
    case Aggregation::Sum: return "sum";
    case Aggregation::Max: return "max";
  }
  return "mean";
}

std::optional<Aggregation> parse_aggregation(std::string_view name) {
  for (Aggregation a : {Aggregation::Mean, Aggregation::Sum, Aggregation::Max}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

Verbalizer::Verbalizer(std::map<std::string, std::vector<std::string>> mapping,
                       Aggregation aggregation)
    : mapping_(std::move(mapping)), aggregation_(aggregation) {
  if (mapping_.empty()) throw ValidationError("verbalizer needs at least one class");
  for (const auto& [name, words] : mapping_) {
    if (name.empty()) throw ValidationError("verbalizer class with an empty name");
    if (words.empty()) throw ValidationError("verbalizer class '" + name + "' has no label words");
    for (const auto& w : words) {
      if (w.empty()) throw ValidationError("verbalizer class '" + name + "' has an empty label word");
    }
  }
}

Verbalizer Verbalizer::from_labels(std::span<const TopicLabel> labels, Aggregation aggregation) {
  std::map<std::string, std::vector<std::string>> mapping;
  for (const auto& label : labels) {
    if (!mapping.emplace(label.name, label.label_words).second) {
      throw ValidationError("duplicate verbalizer class '" + label.name + "'");
    }
  }
  return Verbalizer(std::move(mapping), aggregation);
}

std::vector<std::string> Verbalizer::vocabulary() const {
  std::set<std::string> words;
  for (const auto& [name, list] : mapping_) words.insert(list.begin(), list.end());
  return {words.begin(), words.end()};
}

std::map<std::string, double> verbalize(const Distribution& distribution,
                                        const Verbalizer& verbalizer) {
  if (distribution.empty()) throw ValidationError("empty probability distribution");
  for (const auto& [token, p] : distribution) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw ValidationError("probability of '" + token + "' outside [0, 1]");
    }
  }

  std::map<std::string, double> scores;
  std::vector<double> probs;
  for (const auto& [name, words] : verbalizer.mapping()) {
    probs.clear();
    for (const auto& w : words) {
      auto it = distribution.find(w);
      probs.push_back(it == distribution.end() ? 0.0 : it->second);
    }
    // Summing in sorted order keeps the result independent of word order.
    std::sort(probs.begin(), probs.end());
    double score = 0.0;
    switch (verbalizer.aggregation()) {
      case Aggregation::Max:
        score = probs.back();
        break;
      case Aggregation::Sum:
      case Aggregation::Mean:
        for (double p : probs) score += p;
        if (verbalizer.aggregation() == Aggregation::Mean) {
          score /= static_cast<double>(probs.size());
        }
        break;
    }
    scores[name] = score;
  }
  return scores;
}

}  // namespace rvs::prompt

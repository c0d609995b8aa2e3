#pragma once

// Prompt templates with input slots ([X], [X1], ...) and one answer slot
// ([Z]), template filling, entailment hypotheses and verbalizers.
//
// Template syntax: a slot is an uppercase bracketed name; "[[" and "]]"
// stand for literal brackets. Any other use of a bracket is an error.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rvs/types.hpp"

namespace rvs::prompt {

inline constexpr std::string_view kAnswerSlotName = "Z";
inline constexpr std::string_view kAnswerMarker = "[Z]";

enum class TemplateKind { Prefix, Cloze };

std::string_view to_string(TemplateKind kind);

class PromptTemplate {
 public:
  struct Segment {
    bool is_slot = false;
    std::string value;  // literal text (unescaped) or slot name
  };

  /// Throws ValidationError for malformed slots, a missing or repeated answer
  /// slot, duplicate input slots, or a template with no literal text.
  static PromptTemplate parse(std::string_view raw);

  const std::string& raw_text() const { return raw_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<std::string>& input_slots() const { return input_slots_; }

  /// Prefix when nothing but whitespace and punctuation follows the answer
  /// slot, Cloze otherwise.
  TemplateKind kind() const { return kind_; }

  bool operator==(const PromptTemplate& other) const { return raw_ == other.raw_; }

 private:
  std::string raw_;
  std::vector<Segment> segments_;
  std::vector<std::string> input_slots_;
  TemplateKind kind_ = TemplateKind::Prefix;
};

using Bindings = std::map<std::string, std::string, std::less<>>;

struct SlotSpan {
  std::string slot;
  std::size_t offset = 0;
  std::size_t length = 0;
};

class FilledPrompt {
 public:
  const std::string& text() const { return text_; }
  bool unfilled_answer() const { return unfilled_answer_; }
  const PromptTemplate& source_template() const { return template_; }
  const Bindings& bindings() const { return bindings_; }
  /// Where each binding (and, once filled, the answer) landed in text().
  const std::vector<SlotSpan>& spans() const { return spans_; }
  /// Offset of the answer marker while unfilled, of the answer afterwards.
  std::size_t answer_offset() const { return answer_offset_; }

 private:
  friend FilledPrompt fill_template(const PromptTemplate&, const Bindings&);
  friend FilledPrompt fill_answer(const FilledPrompt&, std::string_view);

  std::string text_;
  bool unfilled_answer_ = true;
  PromptTemplate template_;
  Bindings bindings_;
  std::vector<SlotSpan> spans_;
  std::size_t answer_offset_ = 0;
};

/// Substitutes every input slot verbatim and leaves "[Z]" in place. Throws
/// ValidationError naming the slot for missing or unknown bindings, and for a
/// binding of the answer slot.
FilledPrompt fill_template(const PromptTemplate& tmpl, const Bindings& bindings);

/// Replaces the answer marker with `answer`. Throws ValidationError when the
/// prompt is already filled or the answer is empty.
FilledPrompt fill_answer(const FilledPrompt& prompt, std::string_view answer);

/// Text preceding the sentence that holds the answer slot, trimmed. Used as
/// the entailment premise: for "[X1]. Sentiment of the review is [X2]. The
/// review is about [Z]." this is everything up to and including "[X2].".
/// Falls back to the whole text with the marker removed when no sentence
/// boundary precedes the answer slot.
std::string premise_text(const FilledPrompt& prompt);

enum class HypothesisMode { NameOnly, DefinitionOnly, NameAndDefinition };

/// "The review is about <lowercased name> i.e. <definition>." and the two
/// reduced forms.
std::string build_hypothesis(const TopicLabel& label,
                             HypothesisMode mode = HypothesisMode::NameAndDefinition);

enum class Aggregation { Mean, Sum, Max };

std::string_view to_string(Aggregation a);
std::optional<Aggregation> parse_aggregation(std::string_view name);

/// Class name -> label words. Throws ValidationError for an empty class
/// name, an empty word list or an empty word.
class Verbalizer {
 public:
  explicit Verbalizer(std::map<std::string, std::vector<std::string>> mapping,
                      Aggregation aggregation = Aggregation::Mean);

  /// Throws ValidationError on duplicate label names.
  static Verbalizer from_labels(std::span<const TopicLabel> labels,
                                Aggregation aggregation = Aggregation::Mean);

  const std::map<std::string, std::vector<std::string>>& mapping() const { return mapping_; }
  Aggregation aggregation() const { return aggregation_; }

  /// Union of all label words, sorted.
  std::vector<std::string> vocabulary() const;

 private:
  std::map<std::string, std::vector<std::string>> mapping_;
  Aggregation aggregation_;
};

using Distribution = std::map<std::string, double, std::less<>>;

/// Per class, aggregates the probabilities of its label words (absent words
/// count as 0). Throws ValidationError on an empty distribution or a
/// probability outside [0, 1].
std::map<std::string, double> verbalize(const Distribution& distribution,
                                        const Verbalizer& verbalizer);

}  // namespace rvs::prompt

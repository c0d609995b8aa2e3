#include "rvs/config.hpp"

#include <cstdlib>
#include <set>

#include "rvs/error.hpp"
#include "rvs/ingest.hpp"
#include "rvs/toml_lite.hpp"

namespace fs = std::filesystem;

namespace rvs::config {

namespace {

const std::set<std::string, std::less<>> kRootKeys = {"backend", "backend_url", "max_in_flight",
                                                      "labels", "sentiment_labels", "alignment",
                                                      "out", "jobs"};
const std::set<std::string, std::less<>> kTemplateKeys = {"premise", "premise_fallback", "masked"};
const std::set<std::string, std::less<>> kKeyphraseKeys = {"max_n", "top_m", "top_k",
                                                           "redundancy_threshold", "stopwords"};
const std::set<std::string, std::less<>> kThresholdKeys = {"release", "feature"};
const std::set<std::string, std::less<>> kClassifierKeys = {"mode", "normalize", "hypothesis",
                                                            "aggregation"};

void reject_unknown(const toml::Table& t, const std::set<std::string, std::less<>>& allowed,
                    std::string_view section) {
  for (const auto& [key, value] : t.entries()) {
    if (!allowed.contains(key)) {
      const std::string where = section.empty() ? key : std::string(section) + "." + key;
      throw ValidationError("unknown configuration key '" + where + "'", value.line, where);
    }
  }
}

std::size_t positive_count(const toml::Table& t, std::string_view key, std::size_t fallback) {
  const auto v = t.get_integer(key);
  if (!v) return fallback;
  if (*v < 1) {
    throw ValidationError("'" + std::string(key) + "' must be at least 1", t.find(key)->line,
                          std::string(key));
  }
  return static_cast<std::size_t>(*v);
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

prompt::HypothesisMode parse_hypothesis(const std::string& name, std::size_t line) {
  if (name == "name") return prompt::HypothesisMode::NameOnly;
  if (name == "definition") return prompt::HypothesisMode::DefinitionOnly;
  if (name == "name_and_definition") return prompt::HypothesisMode::NameAndDefinition;
  throw ValidationError("hypothesis must be name, definition or name_and_definition", line,
                        "classifier.hypothesis");
}

void require_file(const std::optional<fs::path>& p, std::string_view what) {
  if (p && !fs::is_regular_file(*p)) {
    throw IoError(std::string(what) + " file '" + p->string() + "' does not exist");
  }
}

}  // namespace

void apply_toml(PipelineConfig& config, std::string_view toml_text, const fs::path& base_dir) {
  const toml::Document doc = toml::parse(toml_text);
  for (const auto& [name, tables] : doc.array_tables) {
    throw ValidationError("unexpected array of tables [[" + name + "]]", tables.front().line);
  }
  for (const auto& [name, table] : doc.tables) {
    static const std::set<std::string, std::less<>> known = {"templates", "keyphrase",
                                                             "thresholds", "classifier",
                                                             "alignment"};
    if (!known.contains(name)) {
      throw ValidationError("unknown configuration table [" + name + "]", table.line);
    }
  }

  const toml::Table& root = doc.root;
  reject_unknown(root, kRootKeys, "");
  if (auto v = root.get_string("backend")) config.backend = *v;
  if (auto v = root.get_string("backend_url")) config.backend_url = *v;
  config.max_in_flight = positive_count(root, "max_in_flight", config.max_in_flight);
  config.jobs = positive_count(root, "jobs", config.jobs);
  if (auto v = root.get_string("labels")) config.labels = resolve(base_dir, *v);
  if (auto v = root.get_string("sentiment_labels")) config.sentiment_labels = resolve(base_dir, *v);
  if (auto v = root.get_string("alignment")) config.alignment = resolve(base_dir, *v);
  if (auto v = root.get_string("out")) config.out_dir = resolve(base_dir, *v);

  if (const toml::Table* t = doc.table("templates")) {
    reject_unknown(*t, kTemplateKeys, "templates");
    if (auto v = t->get_string("premise")) config.premise_template = *v;
    if (auto v = t->get_string("premise_fallback")) config.premise_fallback_template = *v;
    if (auto v = t->get_string("masked")) config.masked_template = *v;
  }

  if (const toml::Table* t = doc.table("keyphrase")) {
    reject_unknown(*t, kKeyphraseKeys, "keyphrase");
    auto& k = config.keyphrase;
    k.max_n = positive_count(*t, "max_n", k.max_n);
    k.top_m = positive_count(*t, "top_m", k.top_m);
    k.top_k = positive_count(*t, "top_k", k.top_k);
    if (auto v = t->get_number("redundancy_threshold")) k.redundancy_threshold = *v;
    if (auto extra = t->get_string_array("stopwords")) {
      for (const auto& w : *extra) k.stopwords.insert(text::ascii_lower(w));
    }
  }

  if (const toml::Table* t = doc.table("thresholds")) {
    reject_unknown(*t, kThresholdKeys, "thresholds");
    if (auto v = t->get_number("release")) config.release_threshold = *v;
    if (auto v = t->get_number("feature")) config.feature_min_score = *v;
  }

  if (const toml::Table* t = doc.table("alignment")) {
    valuestream::TopicCategoryAlignment a;
    for (const auto& [topic, value] : t->entries()) {
      const auto name = t->get_string(topic);
      const auto category = name ? parse_release_category(*name) : std::nullopt;
      if (!category) {
        throw ValidationError("alignment for '" + topic + "' must name a release category",
                              value.line, "alignment." + topic);
      }
      a.mapping.emplace(topic, *category);
    }
    config.inline_alignment = std::move(a);
  }

  if (const toml::Table* t = doc.table("classifier")) {
    reject_unknown(*t, kClassifierKeys, "classifier");
    if (auto v = t->get_string("mode")) {
      auto mode = parse_classification_mode(*v);
      if (!mode) {
        throw ValidationError("classifier.mode must be entailment or masked", t->find("mode")->line,
                              "classifier.mode");
      }
      config.mode = *mode;
    }
    if (auto v = t->get_bool("normalize")) config.normalize = *v;
    if (auto v = t->get_string("hypothesis")) {
      config.hypothesis = parse_hypothesis(*v, t->find("hypothesis")->line);
    }
    if (auto v = t->get_string("aggregation")) {
      auto agg = prompt::parse_aggregation(*v);
      if (!agg) {
        throw ValidationError("classifier.aggregation must be mean, sum or max",
                              t->find("aggregation")->line, "classifier.aggregation");
      }
      config.aggregation = *agg;
    }
  }
}

PipelineConfig load(const fs::path& path) {
  PipelineConfig config;
  apply_toml(config, ingest::read_file(path), path.parent_path());
  return config;
}

void apply_environment(PipelineConfig& config) {
  const std::string name(kBackendUrlEnv);
  if (const char* url = std::getenv(name.c_str()); url != nullptr && *url != '\0') {
    config.backend_url = url;
  }
}

void validate(const PipelineConfig& config) {
  if (config.backend != "stub" && config.backend != "remote") {
    throw ValidationError("backend must be stub or remote, got '" + config.backend + "'", 0,
                          "backend");
  }
  if (config.backend == "remote" && config.backend_url.empty()) {
    throw ValidationError("the remote backend needs backend_url (or " +
                              std::string(kBackendUrlEnv) + ")",
                          0, "backend_url");
  }
  if (config.max_in_flight == 0) throw ValidationError("max_in_flight must be at least 1");
  if (config.jobs == 0) throw ValidationError("jobs must be at least 1");
  keyphrase::validate(config.keyphrase);
  if (!(config.release_threshold > 0.0 && config.release_threshold <= 1.0)) {
    throw ValidationError("thresholds.release must be in (0, 1]", 0, "thresholds.release");
  }
  if (!(config.feature_min_score >= -1.0)) {
    throw ValidationError("thresholds.feature must be at least -1", 0, "thresholds.feature");
  }
  auto check_template = [](const std::string& t, std::string_view key) {
    try {
      prompt::PromptTemplate::parse(t);
    } catch (const ValidationError& e) {
      throw ValidationError(std::string(key) + ": " + e.what(), 0, std::string(key));
    }
  };
  check_template(config.premise_template, "templates.premise");
  check_template(config.premise_fallback_template, "templates.premise_fallback");
  check_template(config.masked_template, "templates.masked");
  require_file(config.labels, "labels");
  require_file(config.sentiment_labels, "sentiment labels");
  require_file(config.alignment, "alignment");
}

std::vector<TopicLabel> topic_labels(const PipelineConfig& config) {
  return config.labels ? ingest::load_labels(*config.labels) : ingest::default_labels();
}

std::vector<TopicLabel> sentiment_labels(const PipelineConfig& config) {
  return config.sentiment_labels ? ingest::load_labels(*config.sentiment_labels)
                                 : ingest::default_sentiment_labels();
}

valuestream::TopicCategoryAlignment alignment(const PipelineConfig& config) {
  if (config.inline_alignment) return *config.inline_alignment;
  return config.alignment ? valuestream::load_alignment(*config.alignment)
                          : valuestream::default_alignment();
}

classifier::CorpusOptions corpus_options(const PipelineConfig& config) {
  classifier::CorpusOptions o;
  o.mode = config.mode;
  o.entailment.sentiment_template = prompt::PromptTemplate::parse(config.premise_template);
  o.entailment.plain_template = prompt::PromptTemplate::parse(config.premise_fallback_template);
  o.entailment.hypothesis_mode = config.hypothesis;
  o.entailment.normalize = config.normalize;
  o.masked_template = prompt::PromptTemplate::parse(config.masked_template);
  o.aggregation = config.aggregation;
  o.sentiment_labels = sentiment_labels(config);
  o.workers = config.jobs;
  return o;
}

backend::BackendConfig backend_config(const PipelineConfig& config,
                                      const std::vector<TopicLabel>& labels) {
  backend::BackendConfig b;
  b.kind = config.backend;
  b.base_url = config.backend_url;
  b.max_in_flight = config.max_in_flight;
  std::set<std::string> vocab;
  for (const auto& l : labels) vocab.insert(l.label_words.begin(), l.label_words.end());
  b.vocabulary.assign(vocab.begin(), vocab.end());
  return b;
}

}  // namespace rvs::config

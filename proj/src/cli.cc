// Copyright 2026 The topicrate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "topicrate/cli.h"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "topicrate/annotations.h"
#include "topicrate/corpus.h"
#include "topicrate/errors.h"
#include "topicrate/evaluation.h"
#include "topicrate/io.h"
#include "topicrate/kernels.h"
#include "topicrate/lda.h"
#include "topicrate/plda.h"
#include "topicrate/regression.h"
#include "topicrate/synthgen.h"

namespace topicrate::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input, output, test, model, labels_file, annotations_file,
      stopwords, format, manifest;
  std::string estimator = "final";
  std::string label_mode = "consensus";
  std::vector<int> k{10};
  double alpha = 0.01, beta = 0.01, threshold = 0.05;
  int iters = 1000, burn_in = 200, thin = 10;
  std::uint64_t seed = 1;
  int min_doc_freq = 15, min_doc_len = 20;
  bool no_lang_filter = false;
  int n_bg = 1, n_label = 5;
  bool renormalize = false;
  std::vector<int> grid_min_doc{1, 5, 10, 15};
  std::vector<int> grid_n_bg{0, 1, 5, 10};
  std::vector<int> grid_n_label{1, 5, 10};
  int infer_iters = 100, infer_burn_in = 50;
  double epsilon = 0.1, l2 = 1e-4, learning_rate = 0.1;
  int epochs = 200;
  int docs = 500, vocab_size = 1000, doc_len = 100;
  double gen_alpha = 0.1, leak = 0.0;
  bool labeled = false, appropriate_on_all = false;
  int verbosity = 0;
};

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool is_jsonl(const std::string& path) {
  return ends_with(path, ".jsonl") || ends_with(path, ".jsonl.gz");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

CLI::Validator numeric_check(bool (*ok)(double), const char* what) {
  return CLI::Validator(
      [ok, what](std::string& value) -> std::string {
        double v = 0.0;
        try {
          std::size_t used = 0;
          v = std::stod(value, &used);
          if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
          return "Value " + value + " is not a number";
        }
        return ok(v) ? "" : "Value " + value + " must be " + what;
      },
      what);
}

const CLI::Validator kPositive =
    numeric_check([](double v) { return v > 0.0; }, "positive");
const CLI::Validator kNonNegative =
    numeric_check([](double v) { return v >= 0.0; }, "non-negative");

const CLI::Validator kOpenUnit(
    [](std::string& value) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(value);
      } catch (const std::exception&) {
        return "Value " + value + " is not a number";
      }
      return v > 0.0 && v < 1.0 ? "" : "Value " + value + " not in (0,1)";
    },
    "(0,1)");

const CLI::Validator kWritableParent(
    [](std::string& value) -> std::string {
      const auto parent = std::filesystem::path(value).parent_path();
      if (parent.empty() || std::filesystem::is_directory(parent)) return "";
      return "Directory does not exist: " + parent.string();
    },
    "PATH");

// One subcommand invocation: options, the input/output hash records and the
// manifest written at the end.
class Command {
 public:
  Command(const Options& o, const CLI::App& sub, std::vector<std::string> args)
      : o_(o), sub_(sub), args_(std::move(args)) {
    if (!o_.stopwords.empty()) {
      custom_stopwords_ = StopwordList::from_file(o_.stopwords);
    }
  }

  void log(const std::string& message) const {
    if (o_.verbosity > 0) std::cerr << "[topicrate] " << message << "\n";
  }

  void note_input(const std::string& path) {
    if (!path.empty()) inputs_[path] = sha256_file(path);
  }

  void write(const std::string& path, std::string_view content) {
    write_file_atomic(path, content);
    outputs_[path] = sha256_file(path);
    log("wrote " + path);
  }

  void write_manifest() {
    ordered_json m;
    m["format"] = "topicrate-manifest";
    m["version"] = 1;
    m["subcommand"] = sub_.get_name();
    m["argv"] = args_;
    ordered_json config = ordered_json::object();
    for (const CLI::Option* opt : sub_.get_options()) {
      if (opt->get_name() == "--help") continue;
      std::string value;
      if (opt->count() > 0) {
        const auto& results = opt->results();
        for (std::size_t i = 0; i < results.size(); ++i) {
          if (i) value += ",";
          value += results[i];
        }
      } else {
        value = opt->get_default_str();
      }
      config[opt->get_name()] = value;
    }
    m["config"] = std::move(config);
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    write_file_atomic(o_.output + ".manifest.json", m.dump(2) + "\n");
  }

  const StopwordList& stopwords() const {
    return custom_stopwords_ ? *custom_stopwords_ : StopwordList::english();
  }

  PreprocessConfig preprocess() const {
    PreprocessConfig pre;
    pre.stopword_list_id = stopwords().id();
    pre.min_doc_freq = o_.min_doc_freq;
    pre.min_doc_len = o_.min_doc_len;
    pre.language_filter = !o_.no_lang_filter;
    return pre;
  }

  TrainConfig train_config(int num_topics) const {
    TrainConfig c;
    c.num_topics = num_topics;
    c.alpha = o_.alpha;
    c.beta = o_.beta;
    c.iterations = o_.iters;
    c.burn_in = o_.burn_in;
    c.seed = o_.seed;
    c.estimator = o_.estimator == "average" ? Estimator::kAverage
                                            : Estimator::kFinalState;
    c.thinning = o_.thin;
    return c;
  }

  InferenceConfig infer_config() const {
    InferenceConfig c;
    c.iterations = o_.infer_iters;
    c.burn_in = o_.infer_burn_in;
    c.seed = o_.seed;
    return c;
  }

  LabelSetOptions label_options() const {
    LabelSetOptions options;
    options.mode =
        o_.label_mode == "union" ? LabelMode::kUnion : LabelMode::kConsensus;
    options.appropriate_on_all = o_.appropriate_on_all;
    return options;
  }

  // Label sets from --labels-file, --annotations-file, the documents' own
  // labels or their ratings, in that order of preference.
  std::optional<LabelSets> resolve_labels(const std::vector<RawDocument>* raw,
                                          const std::vector<std::string>& ids) {
    if (!o_.labels_file.empty()) {
      note_input(o_.labels_file);
      const json j = json::parse(read_file(o_.labels_file));
      LabelSets sets;
      for (const auto& id : ids) sets[id];
      for (const auto& [id, labels] : j.items()) {
        auto it = sets.find(id);
        if (it == sets.end()) continue;
        for (const auto& l : labels) it->second.insert(l.get<std::string>());
      }
      return sets;
    }
    if (!o_.annotations_file.empty()) {
      note_input(o_.annotations_file);
      const auto records = read_annotations_csv(o_.annotations_file);
      return build_label_sets(records, ids, label_options());
    }
    if (raw == nullptr) return std::nullopt;
    const bool has_labels = std::any_of(raw->begin(), raw->end(), [](auto& d) {
      return !d.labels.empty();
    });
    if (has_labels) {
      LabelSets sets;
      for (const auto& d : *raw) {
        sets[d.id].insert(d.labels.begin(), d.labels.end());
      }
      return sets;
    }
    const bool has_ratings = std::any_of(raw->begin(), raw->end(), [](auto& d) {
      return !d.ratings.empty();
    });
    if (has_ratings) {
      return build_label_sets(annotations_from_documents(*raw), ids,
                              label_options());
    }
    return std::nullopt;
  }

  static void apply_labels(std::vector<Document>& docs,
                           const std::optional<LabelSets>& sets) {
    if (!sets) return;
    for (auto& doc : docs) {
      auto it = sets->find(doc.id);
      doc.labels = it == sets->end()
                       ? std::vector<std::string>{}
                       : std::vector<std::string>(it->second.begin(),
                                                  it->second.end());
    }
  }

  static std::vector<std::string> ids_of(const std::vector<RawDocument>& raw) {
    std::vector<std::string> ids;
    for (const auto& d : raw) ids.push_back(d.id);
    return ids;
  }

  std::vector<RawDocument> read_raw(const std::string& path) {
    note_input(path);
    return read_jsonl(path);
  }

  Corpus load_corpus(const std::string& path) {
    if (is_jsonl(path)) {
      const auto raw = read_raw(path);
      Corpus corpus = build_corpus(raw, preprocess(), stopwords());
      apply_labels(corpus.documents, resolve_labels(&raw, ids_of(raw)));
      return corpus;
    }
    note_input(path);
    Corpus corpus = corpus_from_json(json::parse(read_file(path)));
    apply_labels(corpus.documents,
                 resolve_labels(nullptr, corpus.document_ids()));
    return corpus;
  }

  // Documents encoded against the model's vocabulary with the model's
  // recorded preprocessing.
  std::vector<Document> load_for_model(const std::string& path,
                                       const TopicModel& model) {
    if (is_jsonl(path)) {
      const auto raw = read_raw(path);
      std::vector<Document> docs = encode_documents(
          raw, model.vocabulary(), model.metadata.preprocess, stopwords());
      apply_labels(docs, resolve_labels(&raw, ids_of(raw)));
      return docs;
    }
    note_input(path);
    const Corpus corpus = corpus_from_json(json::parse(read_file(path)));
    std::vector<Document> docs;
    for (const auto& doc : corpus.documents) {
      Document out;
      out.id = doc.id;
      out.labels = doc.labels;
      for (int32_t id : doc.tokens) {
        if (auto w = model.vocabulary().find(corpus.vocabulary.token(id))) {
          out.tokens.push_back(*w);
        }
      }
      docs.push_back(std::move(out));
    }
    std::vector<std::string> ids;
    for (const auto& d : docs) ids.push_back(d.id);
    apply_labels(docs, resolve_labels(nullptr, ids));
    return docs;
  }

  std::vector<AnnotationRecord> load_annotations(
      const std::vector<RawDocument>* raw) {
    if (!o_.annotations_file.empty()) {
      note_input(o_.annotations_file);
      return read_annotations_csv(o_.annotations_file);
    }
    if (raw == nullptr) {
      throw EmptyInput("no ratings available for the input documents");
    }
    return annotations_from_documents(*raw);
  }

  TopicModel load_model_input() {
    note_input(o_.model);
    return load_model(o_.model);
  }

  const Options& o() const { return o_; }

 private:
  const Options& o_;
  const CLI::App& sub_;
  std::vector<std::string> args_;
  std::optional<StopwordList> custom_stopwords_;
  ordered_json inputs_ = ordered_json::object();
  ordered_json outputs_ = ordered_json::object();
};

std::vector<std::string> layout_labels_for(
    const std::vector<Document>& docs) {
  std::vector<std::string> labels = standard_labels();
  std::set<std::string> extra;
  for (const auto& doc : docs) {
    for (const auto& l : doc.labels) {
      if (std::find(labels.begin(), labels.end(), l) == labels.end()) {
        extra.insert(l);
      }
    }
  }
  labels.insert(labels.end(), extra.begin(), extra.end());
  return labels;
}

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

void cmd_preprocess(Command& c) {
  const Corpus corpus = c.load_corpus(c.o().input);
  c.log("documents " + std::to_string(corpus.documents.size()) +
        ", vocabulary " + std::to_string(corpus.vocabulary.size()));
  c.write(c.o().output, corpus_to_json(corpus).dump() + "\n");
}

void write_model(Command& c, const TopicModel& model) {
  c.write(c.o().output, model_to_json(model).dump() + "\n");
  c.write(c.o().output + ".theta.csv", theta_csv(model.doc_ids, model.doc_theta));
}

void cmd_train_lda(Command& c) {
  const Corpus corpus = c.load_corpus(c.o().input);
  write_model(c, train_lda(corpus, c.train_config(c.o().k.front())));
}

void cmd_train_plda(Command& c) {
  Corpus corpus = c.load_corpus(c.o().input);
  for (auto& doc : corpus.documents) {
    if (doc.labels.empty()) doc.labels = {std::string(kAppropriateLabel)};
  }
  const LabelTopicLayout layout = build_layout(
      layout_labels_for(corpus.documents), c.o().n_label, c.o().n_bg);
  write_model(c, train_plda(corpus, layout, c.train_config(0)));
}

void cmd_perplexity(Command& c) {
  Corpus train = c.load_corpus(c.o().input);
  std::vector<Document> heldout;
  if (c.o().test.empty()) {
    std::vector<Document> kept;
    for (std::size_t d = 0; d < train.documents.size(); ++d) {
      (d % 5 == 4 ? heldout : kept).push_back(train.documents[d]);
    }
    train.documents = std::move(kept);
    if (train.documents.empty() || heldout.empty()) {
      throw EmptyCorpus("too few documents for the built-in held-out split");
    }
  }
  const std::vector<int>& ks = c.o().k;
  std::vector<double> train_pp(ks.size()), heldout_pp(ks.size());
  std::vector<std::string> errors(ks.size());
  std::vector<TopicModel> models(ks.size());
  const auto n = static_cast<std::int64_t>(ks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      models[i] = train_lda(train, c.train_config(ks[i]));
      train_pp[i] =
          perplexity_with_thetas(models[i], train.documents, models[i].doc_theta);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::int64_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) throw std::runtime_error(errors[i]);
  }
  if (!c.o().test.empty()) heldout = c.load_for_model(c.o().test, models[0]);
  for (std::int64_t i = 0; i < n; ++i) {
    heldout_pp[i] = perplexity(models[i], heldout, c.infer_config());
    c.log("k=" + std::to_string(ks[i]) + " heldout " +
          format_double(heldout_pp[i]));
  }
  if (c.o().format == "json") {
    ordered_json rows = ordered_json::array();
    for (std::int64_t i = 0; i < n; ++i) {
      rows.push_back({{"k", ks[i]},
                      {"train_perplexity", train_pp[i]},
                      {"heldout_perplexity", heldout_pp[i]}});
    }
    c.write(c.o().output, rows.dump(2) + "\n");
    return;
  }
  std::string csv = "k,train_perplexity,heldout_perplexity\n";
  for (std::int64_t i = 0; i < n; ++i) {
    csv += std::to_string(ks[i]) + "," + format_double(train_pp[i]) + "," +
           format_double(heldout_pp[i]) + "\n";
  }
  c.write(c.o().output, csv);
}

void cmd_classify(Command& c) {
  const TopicModel model = c.load_model_input();
  if (!model.layout) {
    throw InvalidArgument("model has no label layout; train it with train-plda");
  }
  const std::vector<Document> docs = c.load_for_model(c.o().input, model);
  const Matrix thetas =
      infer_thetas(model, docs, c.infer_config(), Execution::kParallel);
  ClassifyConfig classify;
  classify.threshold = c.o().threshold;
  classify.renormalize_without_background = c.o().renormalize;

  LabelSets predictions, gold;
  const bool has_gold = std::any_of(docs.begin(), docs.end(),
                                    [](auto& d) { return !d.labels.empty(); });
  ordered_json rows = ordered_json::array();
  std::string csv = "doc_id,labels\n";
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const LabelSet predicted = predict_labels(thetas.row(d), *model.layout,
                                              classify);
    predictions[docs[d].id] = predicted;
    gold[docs[d].id].insert(docs[d].labels.begin(), docs[d].labels.end());
    const std::vector<std::string> labels(predicted.begin(), predicted.end());
    ordered_json mass = ordered_json::object();
    for (const auto& [label, m] : label_mass(thetas.row(d), *model.layout)) {
      mass[label] = m;
    }
    rows.push_back({{"id", docs[d].id}, {"labels", labels}, {"mass", mass}});
    csv += docs[d].id + "," + join(labels, ';') + "\n";
  }
  std::optional<MetricsReport> report;
  if (has_gold) report = metrics_report(predictions, gold);

  if (c.o().format == "csv") {
    c.write(c.o().output, csv);
    if (report) {
      c.write(c.o().output + ".metrics.json", to_json(*report).dump(2) + "\n");
    }
    return;
  }
  ordered_json out;
  out["threshold"] = classify.threshold;
  out["documents"] = std::move(rows);
  out["metrics"] = report ? to_json(*report) : ordered_json(nullptr);
  c.write(c.o().output, out.dump(2) + "\n");
}

void cmd_grid_search(Command& c) {
  std::vector<RawDocument> train = c.read_raw(c.o().input);
  std::vector<RawDocument> test;
  if (c.o().test.empty()) {
    std::vector<RawDocument> kept;
    for (std::size_t d = 0; d < train.size(); ++d) {
      (d % 5 == 4 ? test : kept).push_back(train[d]);
    }
    train = std::move(kept);
  } else {
    test = c.read_raw(c.o().test);
  }
  if (train.empty() || test.empty()) {
    throw EmptyInput("grid search needs training and test documents");
  }
  GridInputs inputs;
  inputs.train = train;
  inputs.test = test;
  auto train_labels = c.resolve_labels(&train, Command::ids_of(train));
  auto test_gold = c.resolve_labels(&test, Command::ids_of(test));
  if (!train_labels || !test_gold) {
    throw EmptyInput("grid search needs labels or ratings for the documents");
  }
  inputs.train_labels = std::move(*train_labels);
  inputs.test_gold = std::move(*test_gold);
  std::vector<Document> labelled;
  for (const auto& [id, labels] : inputs.train_labels) {
    labelled.push_back({id, {}, {labels.begin(), labels.end()}});
  }
  inputs.layout_labels = layout_labels_for(labelled);
  inputs.preprocess = c.preprocess();
  inputs.stopwords = &c.stopwords();
  inputs.training = c.train_config(0);
  inputs.infer = c.infer_config();
  inputs.classify.threshold = c.o().threshold;
  inputs.classify.renormalize_without_background = c.o().renormalize;
  inputs.base_seed = c.o().seed;

  GridSpec spec;
  spec.min_doc_freq = c.o().grid_min_doc;
  spec.n_bg = c.o().grid_n_bg;
  spec.n_label = c.o().grid_n_label;
  const std::vector<GridRow> rows = grid_search(inputs, spec);
  if (c.o().format == "json") {
    c.write(c.o().output, grid_json(rows).dump(2) + "\n");
  } else {
    c.write(c.o().output, grid_csv(rows));
  }
}

void cmd_regress(Command& c) {
  const TopicModel model = c.load_model_input();
  struct Split {
    std::vector<Document> docs;
    std::vector<AnnotationRecord> records;
  };
  auto load_split = [&](const std::string& path) {
    Split s;
    s.docs = c.load_for_model(path, model);
    if (is_jsonl(path)) {
      const auto raw = read_jsonl(path);
      s.records = c.load_annotations(&raw);
    } else {
      s.records = c.load_annotations(nullptr);
    }
    if (s.docs.empty()) throw EmptyInput("no documents survive in " + path);
    return s;
  };
  const Split train = load_split(c.o().input);
  const std::optional<Split> test =
      c.o().test.empty() ? std::nullopt
                         : std::optional<Split>(load_split(c.o().test));
  const Split& eval = test ? *test : train;

  const InferenceConfig infer = c.infer_config();
  const Matrix train_theta =
      infer_thetas(model, train.docs, infer, Execution::kParallel);
  const Matrix eval_theta =
      test ? infer_thetas(model, eval.docs, infer, Execution::kParallel)
           : train_theta;
  const RatingTable train_table(train.records);
  const RatingTable eval_table(eval.records);

  RegressionConfig config;
  config.epsilon = c.o().epsilon;
  config.l2 = c.o().l2;
  config.learning_rate = c.o().learning_rate;
  config.epochs = c.o().epochs;
  config.seed = c.o().seed;

  ordered_json models = ordered_json::array();
  ordered_json errors = ordered_json::array();
  std::string csv = error_report_csv_header();
  for (const auto& category : kCategories) {
    std::vector<double> targets;
    for (const auto& doc : train.docs) {
      targets.push_back(train_table.average(doc.id, category));
    }
    const RegressionModel reg =
        train_regressor(train_theta, targets, config, category);
    std::vector<double> predictions, truth;
    for (std::size_t d = 0; d < eval.docs.size(); ++d) {
      predictions.push_back(predict_rating(reg, eval_theta.row(d)));
      truth.push_back(eval_table.average(eval.docs[d].id, category));
    }
    const RegressionErrorReport report = weighted_abs_error(predictions, truth);
    models.push_back(to_json(reg));
    ordered_json e;
    e["category"] = category;
    e["n_topics"] = model.num_topics();
    ordered_json levels = ordered_json::array();
    for (const auto& v : report.level_error) {
      levels.push_back(v ? ordered_json(*v) : ordered_json(nullptr));
    }
    e["level_error"] = std::move(levels);
    e["prevalence"] = report.prevalence;
    e["counts"] = report.counts;
    e["weighted_avg"] = report.weighted_average;
    e["empty_levels"] = report.empty_levels;
    errors.push_back(std::move(e));
    csv += error_report_csv_row(category, model.num_topics(), report);
  }
  if (c.o().format == "csv") {
    c.write(c.o().output, csv);
    return;
  }
  ordered_json out;
  out["split"] = test ? "test" : "train";
  out["models"] = std::move(models);
  out["errors"] = std::move(errors);
  c.write(c.o().output, out.dump(2) + "\n");
}

void cmd_agreement(Command& c) {
  std::vector<AnnotationRecord> records;
  if (!c.o().annotations_file.empty()) {
    records = c.load_annotations(nullptr);
  } else {
    const auto raw = c.read_raw(c.o().input);
    records = annotations_from_documents(raw);
  }
  const AgreementReport report = agreement_report(records);
  if (c.o().format == "csv") {
    std::string csv =
        "category,items,fleiss_kappa,pearson_12,pearson_13,pearson_23\n";
    for (const auto& a : report.categories) {
      csv += a.category + "," + std::to_string(a.items) + "," +
             format_optional(a.fleiss_kappa);
      for (const auto& r : a.pearson) csv += "," + format_optional(r);
      csv += "\n";
    }
    c.write(c.o().output, csv);
    return;
  }
  ordered_json out = ordered_json::array();
  for (const auto& a : report.categories) {
    ordered_json j;
    j["category"] = a.category;
    j["items"] = a.items;
    j["fleiss_kappa"] =
        a.fleiss_kappa ? ordered_json(*a.fleiss_kappa) : ordered_json(nullptr);
    ordered_json p = ordered_json::array();
    for (const auto& r : a.pearson) {
      p.push_back(r ? ordered_json(*r) : ordered_json(nullptr));
    }
    j["pearson"] = std::move(p);
    out.push_back(std::move(j));
  }
  c.write(c.o().output, out.dump(2) + "\n");
}

void cmd_synth(Command& c) {
  const Options& o = c.o();
  GeneratorSpec spec;
  spec.alpha = o.gen_alpha;
  spec.min_doc_len = spec.max_doc_len = o.doc_len;
  spec.seed = o.seed;
  if (o.labeled) {
    LabelPlan plan{build_layout(standard_labels(), o.n_label, o.n_bg), {}};
    const int k = plan.layout.num_topics();
    if (o.vocab_size < k) {
      throw UsageError("--vocab-size must be at least the layout's " +
                       std::to_string(k) + " topics");
    }
    const auto& labels = plan.layout.labels();
    const int per_label = o.docs / static_cast<int>(labels.size());
    const int remainder = o.docs % static_cast<int>(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const int count = per_label + (i == 0 ? remainder : 0);
      if (count > 0) plan.groups.push_back({LabelSet{labels[i]}, count});
    }
    spec.planted_phi = block_topics(k, o.vocab_size, o.leak);
    spec.labels = std::move(plan);
  } else {
    spec.planted_phi = block_topics(o.k.front(), o.vocab_size, o.leak);
    spec.doc_count = o.docs;
  }
  const GeneratedCorpus generated = generate_corpus(spec);
  const std::vector<RawDocument> raw = to_raw_documents(generated);
  c.write(o.output, to_jsonl(raw));
  c.write(o.output + ".truth.json",
          truth_json(generated, spec.planted_phi).dump() + "\n");
}

// Cross-flag checks that the per-flag validators cannot express.
void validate(const std::string& name, const Options& o,
              const CLI::App& sub) {
  auto given = [&](const char* flag) { return sub.count(flag) > 0; };
  if (o.burn_in >= o.iters) {
    throw UsageError("--burn-in must be smaller than --iters");
  }
  if (o.infer_burn_in >= o.infer_iters) {
    throw UsageError("--infer-burn-in must be smaller than --infer-iters");
  }
  if (name == "train-lda" || name == "synth") {
    require(o.k.size() == 1, "--k takes a single value for " + name);
  }
  if (name == "train-plda") {
    require(!given("--k"), "--k is fixed by --n-label and --n-bg for train-plda");
  }
  if (name == "synth" && !o.labeled) {
    require(o.vocab_size >= o.k.front(), "--vocab-size must be at least --k");
  }
  if (name == "synth" && o.labeled) {
    require(!given("--k"), "--k is fixed by --n-label and --n-bg with --labeled");
  }
  if (name == "agreement") {
    require(!o.input.empty() || !o.annotations_file.empty(),
            "--input or --annotations-file is required");
  }
  if (name == "regress") {
    require(is_jsonl(o.input) || !o.annotations_file.empty(),
            "--annotations-file is required when --input is a corpus file");
  }
  if (name == "grid-search") {
    require(is_jsonl(o.input), "--input must be a .jsonl file for grid-search");
    require(o.test.empty() || is_jsonl(o.test),
            "--test must be a .jsonl file for grid-search");
  }
  if (o.labels_file.size() && o.annotations_file.size() &&
      name != "agreement" && name != "regress") {
    throw UsageError("--labels-file and --annotations-file are exclusive");
  }
}

std::vector<std::string> manifest_argv(const std::string& path) {
  const json m = json::parse(read_file(path));
  if (m.value("format", "") != "topicrate-manifest") {
    throw FormatError(path + " is not a topicrate manifest");
  }
  return m.at("argv").get<std::vector<std::string>>();
}

int replay(const std::string& path) {
  const json m = json::parse(read_file(path));
  const auto argv = manifest_argv(path);
  if (!argv.empty() && argv.front() == "replay") {
    throw FormatError("a manifest cannot replay a replay");
  }
  const int status = run(argv);
  if (status != kExitOk) return status;
  for (const auto& [output, hash] : m.at("outputs").items()) {
    if (sha256_file(output) != hash.get<std::string>()) {
      std::cerr << "topicrate: replay output differs: " << output << "\n";
      return kExitRuntime;
    }
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  Options o;
  CLI::App app{"Topic models and content ratings", "topicrate"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("-v,--verbose", o.verbosity, "Log progress to stderr");

  const CLI::Validator& positive = kPositive;
  const CLI::Validator& non_negative = kNonNegative;

  auto add_input = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--input", o.input, "Input file")
                    ->check(CLI::ExistingFile);
    if (required) opt->required();
  };
  auto add_output = [&](CLI::App* s) {
    s->add_option("--output", o.output, "Output file")
        ->required()
        ->check(kWritableParent);
  };
  auto add_preprocess = [&](CLI::App* s) {
    s->add_option("--min-doc-freq", o.min_doc_freq,
                  "Drop tokens found in fewer documents")
        ->check(positive);
    s->add_option("--min-doc-len", o.min_doc_len,
                  "Drop documents with fewer content tokens")
        ->check(positive);
    s->add_option("--stopwords", o.stopwords, "Stopword list, one per line")
        ->check(CLI::ExistingFile);
    s->add_flag("--no-lang-filter", o.no_lang_filter,
                "Keep documents that fail the English check");
  };
  auto add_labels = [&](CLI::App* s) {
    s->add_option("--labels-file", o.labels_file,
                  "JSON object mapping document id to labels")
        ->check(CLI::ExistingFile);
    s->add_option("--annotations-file", o.annotations_file,
                  "CSV doc_id,category,r1,r2,r3")
        ->check(CLI::ExistingFile);
    s->add_option("--label-mode", o.label_mode, "Labels from ratings")
        ->check(CLI::IsMember({"consensus", "union"}));
    s->add_flag("--appropriate-on-all", o.appropriate_on_all,
                "Attach 'appropriate' to every document");
  };
  auto add_train = [&](CLI::App* s) {
    s->add_option("--alpha", o.alpha, "Document-topic prior")->check(positive);
    s->add_option("--beta", o.beta, "Topic-word prior")->check(positive);
    s->add_option("--iters", o.iters, "Gibbs sweeps")->check(positive);
    s->add_option("--burn-in", o.burn_in, "Sweeps before averaging")
        ->check(non_negative);
    s->add_option("--estimator", o.estimator, "Phi/theta estimator")
        ->check(CLI::IsMember({"final", "average"}));
    s->add_option("--thin", o.thin, "Sample spacing for --estimator average")
        ->check(positive);
  };
  auto add_seed = [&](CLI::App* s) {
    s->add_option("--seed", o.seed, "Random seed");
  };
  auto add_infer = [&](CLI::App* s) {
    s->add_option("--infer-iters", o.infer_iters, "Fold-in sweeps")
        ->check(positive);
    s->add_option("--infer-burn-in", o.infer_burn_in,
                  "Fold-in sweeps before averaging")
        ->check(non_negative);
  };
  std::map<std::string, std::string> default_format;
  auto add_format = [&](CLI::App* s, const std::string& fallback) {
    default_format[s->get_name()] = fallback;
    s->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_k = [&](CLI::App* s, const char* help) {
    s->add_option("--k", o.k, help)->delimiter(',')->check(positive);
  };
  auto add_layout = [&](CLI::App* s) {
    s->add_option("--n-label", o.n_label, "Topics per label")->check(positive);
    s->add_option("--n-bg", o.n_bg, "Background topics")->check(non_negative);
  };
  auto add_classify = [&](CLI::App* s) {
    s->add_option("--threshold", o.threshold, "Label mass threshold")
        ->check(kOpenUnit);
    s->add_flag("--renormalize", o.renormalize,
                "Threshold label mass relative to non-background mass");
  };

  CLI::App* pre = app.add_subcommand("preprocess", "JSONL to corpus file");
  add_input(pre, true);
  add_output(pre);
  add_preprocess(pre);
  add_labels(pre);

  CLI::App* lda = app.add_subcommand("train-lda", "Train an LDA model");
  add_input(lda, true);
  add_output(lda);
  add_preprocess(lda);
  add_k(lda, "Number of topics");
  add_train(lda);
  add_seed(lda);

  CLI::App* plda = app.add_subcommand("train-plda", "Train a PLDA model");
  add_input(plda, true);
  add_output(plda);
  add_preprocess(plda);
  add_labels(plda);
  add_k(plda, "Not accepted; K follows from the layout");
  add_layout(plda);
  add_train(plda);
  add_seed(plda);

  CLI::App* ppl = app.add_subcommand("perplexity", "Perplexity for a list of K");
  add_input(ppl, true);
  add_output(ppl);
  ppl->add_option("--test", o.test, "Held-out documents")
      ->check(CLI::ExistingFile);
  add_preprocess(ppl);
  add_k(ppl, "Comma-separated topic counts");
  add_train(ppl);
  add_infer(ppl);
  add_seed(ppl);
  add_format(ppl, "csv");

  CLI::App* cls = app.add_subcommand("classify", "Threshold label prediction");
  add_input(cls, true);
  add_output(cls);
  cls->add_option("--model", o.model, "PLDA model file")
      ->required()
      ->check(CLI::ExistingFile);
  cls->add_option("--stopwords", o.stopwords, "Stopword list, one per line")
      ->check(CLI::ExistingFile);
  add_labels(cls);
  add_classify(cls);
  add_infer(cls);
  add_seed(cls);
  add_format(cls, "json");

  CLI::App* grid = app.add_subcommand("grid-search", "PLDA hyperparameter grid");
  add_input(grid, true);
  add_output(grid);
  grid->add_option("--test", o.test, "Held-out documents")
      ->check(CLI::ExistingFile);
  add_preprocess(grid);
  add_labels(grid);
  add_train(grid);
  add_infer(grid);
  add_classify(grid);
  add_seed(grid);
  grid->add_option("--grid-min-doc", o.grid_min_doc, "min_doc_freq values")
      ->delimiter(',')
      ->check(positive);
  grid->add_option("--grid-n-bg", o.grid_n_bg, "n_bg values")
      ->delimiter(',')
      ->check(non_negative);
  grid->add_option("--grid-n-label", o.grid_n_label, "n_label values")
      ->delimiter(',')
      ->check(positive);
  add_format(grid, "csv");

  CLI::App* reg = app.add_subcommand("regress", "Ratings from topic proportions");
  add_input(reg, true);
  add_output(reg);
  reg->add_option("--model", o.model, "Topic model file")
      ->required()
      ->check(CLI::ExistingFile);
  reg->add_option("--test", o.test, "Evaluation documents")
      ->check(CLI::ExistingFile);
  reg->add_option("--stopwords", o.stopwords, "Stopword list, one per line")
      ->check(CLI::ExistingFile);
  reg->add_option("--annotations-file", o.annotations_file,
                  "CSV doc_id,category,r1,r2,r3")
      ->check(CLI::ExistingFile);
  reg->add_option("--epsilon", o.epsilon, "Insensitive tube half-width")
      ->check(non_negative);
  reg->add_option("--l2", o.l2, "Weight decay")->check(non_negative);
  reg->add_option("--learning-rate", o.learning_rate, "Initial step")
      ->check(positive);
  reg->add_option("--epochs", o.epochs, "Passes over the data")->check(positive);
  add_infer(reg);
  add_seed(reg);
  add_format(reg, "json");

  CLI::App* agr = app.add_subcommand("agreement", "Annotator agreement report");
  add_input(agr, false);
  add_output(agr);
  agr->add_option("--annotations-file", o.annotations_file,
                  "CSV doc_id,category,r1,r2,r3")
      ->check(CLI::ExistingFile);
  add_format(agr, "json");

  CLI::App* syn = app.add_subcommand("synth", "Generate a synthetic corpus");
  add_output(syn);
  add_k(syn, "Planted topics");
  syn->add_option("--docs", o.docs, "Documents")->check(positive);
  syn->add_option("--vocab-size", o.vocab_size, "Vocabulary size")
      ->check(positive);
  syn->add_option("--doc-len", o.doc_len, "Tokens per document")
      ->check(positive);
  syn->add_option("--gen-alpha", o.gen_alpha, "Dirichlet parameter")
      ->check(positive);
  syn->add_option("--leak", o.leak, "Topic mass spread over all words")
      ->check(CLI::Range(0.0, 0.999));
  syn->add_flag("--labeled", o.labeled,
                "One label per document with label-exclusive topics");
  add_layout(syn);
  add_seed(syn);

  CLI::App* rep = app.add_subcommand("replay", "Re-run a manifest");
  rep->add_option("--input", o.manifest, "Manifest file")
      ->required()
      ->check(CLI::ExistingFile);

  std::vector<std::string> full{"topicrate"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : full) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "topicrate: " << e.what() << "\n";
    return kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (o.format.empty() && default_format.contains(name)) {
    o.format = default_format[name];
  }
  try {
    if (name == "replay") return replay(o.manifest);
    validate(name, o, *sub);
    Command c(o, *sub, args);
    if (name == "preprocess") cmd_preprocess(c);
    else if (name == "train-lda") cmd_train_lda(c);
    else if (name == "train-plda") cmd_train_plda(c);
    else if (name == "perplexity") cmd_perplexity(c);
    else if (name == "classify") cmd_classify(c);
    else if (name == "grid-search") cmd_grid_search(c);
    else if (name == "regress") cmd_regress(c);
    else if (name == "agreement") cmd_agreement(c);
    else if (name == "synth") cmd_synth(c);
    c.write_manifest();
  } catch (const UsageError& e) {
    std::cerr << "topicrate " << name << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "topicrate " << name << ": " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace topicrate::cli

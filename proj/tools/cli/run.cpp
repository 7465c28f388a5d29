// SPDX-License-Identifier: Apache-2.0
#include "cli/run.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "hwk/error.hpp"
#include "hwk/eval.hpp"
#include "hwk/features/sentiment.hpp"
#include "hwk/svg.hpp"

namespace hwk::cli {

namespace fs = std::filesystem;

namespace {

const Defaults kShared{
    {"lang", "en"},
    {"seed", "0"},
    {"data.train", ""},
    {"data.dev", ""},
    {"data.fold_dev", "false"},
    {"data.coerce_labels", "false"},
    {"clean.lowercase", "true"},
    {"clean.strip_urls", "true"},
    {"clean.strip_punctuation", "true"},
    {"clean.keep_hashtag_body", "true"},
    {"clean.keep_mention_body", "true"},
    {"clean.collapse_repeats", "3"},
    {"clean.remove_stopwords", "false"},
    {"features.ngram_min", "1"},
    {"features.ngram_max", "3"},
    {"features.min_df", "2"},
    {"features.dense", "true"},
    {"features.standardize", "true"},
    {"features.sentiment", "false"},
    {"features.drop", ""},
    {"linear.epochs", "30"},
};

Defaults with(const Defaults& base, const Defaults& extra) {
  Defaults out = base;
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

std::string model_file(Dim dim, bool linear) {
  return fmt::format("model_{}.{}", to_string(dim), linear ? "txt" : "ckpt");
}

std::optional<Dataset> load_optional(const Config& cfg, const std::string& key, Lang lang, const LoadOptions& lo) {
  const auto& path = cfg.str(key);
  if (path.empty()) return std::nullopt;
  return load_dataset(path, lang, lo);
}

std::vector<LabelSet> gold_labels(const Dataset& ds) {
  std::vector<LabelSet> out;
  for (const auto& t : ds.tweets) {
    if (!t.labels) throw Error(Errc::Unlabeled, fmt::format("tweet {} has no labels", t.id));
    out.push_back(*t.labels);
  }
  return out;
}

GruHyper gru_hyper(const Config& cfg) {
  GruHyper h;
  h.seq_len = cfg.count("gru.seq_len");
  h.embed_dim = cfg.count("gru.embed_dim");
  h.hidden = cfg.count("gru.hidden");
  h.dense = cfg.counts("gru.dense");
  h.dropout = cfg.real("gru.dropout");
  h.batch = cfg.count("gru.batch");
  return h;
}

CnnHyper cnn_hyper(const Config& cfg) {
  CnnHyper h;
  h.max_len = cfg.count("cnn.max_len");
  h.conv_layers = cfg.count("cnn.conv_layers");
  h.filters = cfg.count("cnn.filters");
  h.kernel = cfg.count("cnn.kernel");
  h.pool = cfg.count("cnn.pool");
  h.dense = cfg.counts("cnn.dense");
  h.dropout = cfg.real("cnn.dropout");
  h.batch = cfg.count("cnn.batch");
  return h;
}

void train_linear(const Config& cfg, const Dataset& train, const std::optional<Dataset>& dev, Lang lang,
                  std::uint64_t seed, const fs::path& out, std::string& log) {
  FeaturePipeline pipe(feature_config(cfg));
  std::optional<SentimentLexicon> lex;
  if (cfg.flag("features.sentiment")) lex = default_lexicon(lang);
  pipe.fit(train, lex);
  log += fmt::format("features: {} columns ({} n-grams)\n", pipe.dim(), pipe.vocabulary().size());
  const auto X = pipe.transform(train);
  std::vector<FeatureVector> Xdev;
  if (dev) Xdev = pipe.transform(*dev);

  TrainConfig tc;
  tc.loss = cfg.str("model") == "linsvc" ? Loss::Hinge : Loss::Logistic;
  tc.penalty = parse_penalty(cfg.str("linear.penalty"));
  tc.C = cfg.real("linear.C");
  tc.seed = seed;
  tc.epochs = int(cfg.count("linear.epochs"));
  tc.eta0 = cfg.real("linear.eta0");
  const auto top = cfg.count("report.top_features");

  for (Dim dim : config_dims(cfg)) {
    const auto y = train.labels(dim);
    TrainTrace trace;
    LinearModel m = hwk::train(X, y, tc, &trace);
    m.vocab_checksum = pipe.vocabulary().checksum();
    if (tc.loss == Loss::Hinge) {
      m.calibration = dev ? fit_calibration(m, Xdev, dev->labels(dim)) : fit_calibration(m, X, y);
    }
    log += fmt::format("{}: objective {:.6f} after {} checkpoints, {} rejected epochs, {} nonzero weights\n",
                       to_string(dim), trace.objective.empty() ? 0.0 : trace.objective.back(),
                       trace.objective.size(), trace.rejected_epochs, m.nonzero_count());
    write_file(out / model_file(dim, true), m.serialize());
    const auto imp = linear_importance(m, pipe, top);
    write_file(out / fmt::format("importance_{}.csv", to_string(dim)), importance_csv(imp));
    std::vector<std::pair<std::string, double>> bars;
    for (const auto& r : imp) bars.emplace_back(r.ngram, r.weight);
    write_file(out / fmt::format("importance_{}.svg", to_string(dim)),
               svg_bar_chart(bars, fmt::format("top {} features ({})", to_string(dim), cfg.str("model"))));
  }
  pipe.save(out / "pipeline.txt");
}

void train_neural(const Config& cfg, const Dataset& train, const std::optional<Dataset>& dev, std::uint64_t seed,
                  const fs::path& out, std::string& log) {
  const auto& kind = cfg.str("model");
  NeuralTrainOptions opts;
  opts.epochs = int(cfg.count("neural.epochs"));
  opts.seed = seed;
  opts.adam.lr = cfg.real("neural.lr");
  const double val_fraction = cfg.real("neural.val_fraction");

  for (Dim dim : config_dims(cfg)) {
    Dataset fit = train, val;
    if (dev) {
      val = *dev;
    } else {
      auto s = stratified_split(train, {1.0 - val_fraction, val_fraction, 0.0}, dim, seed);
      fit = std::move(s.train);
      val = std::move(s.val);
    }
    std::unique_ptr<NeuralClassifier> model;
    if (kind == "bigru") {
      const auto clean = clean_config(cfg);
      std::vector<TokenSequence> docs;
      for (const auto& t : fit.tweets) docs.push_back(preprocess(t, clean));
      auto index = WordIndex::build(docs, cfg.count("gru.max_vocab"), cfg.count("gru.min_count"));
      auto h = gru_hyper(cfg);
      h.vocab_size = index.size();
      model = std::make_unique<BiGru>(h, std::move(index), clean, seed);
    } else {
      model = std::make_unique<CharCnn>(cnn_hyper(cfg), seed);
    }
    const auto hist = train_classifier(*model, encode_all(*model, fit), fit.labels(dim), encode_all(*model, val),
                                       val.labels(dim), opts);
    for (const auto& e : hist.epochs)
      log += fmt::format("{} epoch {}: loss {:.6f} val macro-F1 {:.6f}\n", to_string(dim), e.epoch, e.train_loss,
                         e.val_macro_f1);
    log += fmt::format("{}: kept epoch {} ({} parameters)\n", to_string(dim), hist.best_epoch, model->params().count());
    write_file(out / fmt::format("history_{}.csv", to_string(dim)), hist.csv());
    save_checkpoint(*model, out / model_file(dim, false));
  }
}

}  // namespace

const Defaults& train_defaults() {
  static const Defaults d = with(kShared, {
                                              {"model", "logreg"},
                                              {"data.test", ""},
                                              {"train.dims", "HS"},
                                              {"linear.C", "0.1"},
                                              {"linear.penalty", "l2"},
                                              {"linear.eta0", "0"},
                                              {"neural.epochs", "10"},
                                              {"neural.lr", "0.001"},
                                              {"neural.val_fraction", "0.1"},
                                              {"gru.seq_len", "140"},
                                              {"gru.embed_dim", "400"},
                                              {"gru.hidden", "100"},
                                              {"gru.dense", "64,32"},
                                              {"gru.dropout", "0.2"},
                                              {"gru.batch", "32"},
                                              {"gru.max_vocab", "20000"},
                                              {"gru.min_count", "1"},
                                              {"cnn.max_len", "140"},
                                              {"cnn.conv_layers", "3"},
                                              {"cnn.filters", "256"},
                                              {"cnn.kernel", "7"},
                                              {"cnn.pool", "3"},
                                              {"cnn.dense", "512,256"},
                                              {"cnn.dropout", "0.2"},
                                              {"cnn.batch", "32"},
                                              {"report.top_features", "20"},
                                          });
  return d;
}

const Defaults& gridsearch_defaults() {
  static const Defaults d = with(kShared, {
                                              {"train.dims", "HS"},
                                              {"grid.loss", "logistic,hinge"},
                                              {"grid.penalty", "l1,l2"},
                                              {"grid.C", "0.1,1,10,100,1000"},
                                              {"grid.folds", "10"},
                                              {"grid.threads", "1"},
                                          });
  return d;
}

bool is_linear_model(const std::string& model) { return model == "logreg" || model == "linsvc"; }

CleanConfig clean_config(const Config& cfg) {
  CleanConfig c;
  c.lowercase = cfg.flag("clean.lowercase");
  c.strip_urls = cfg.flag("clean.strip_urls");
  c.strip_punctuation = cfg.flag("clean.strip_punctuation");
  c.keep_hashtag_body = cfg.flag("clean.keep_hashtag_body");
  c.keep_mention_body = cfg.flag("clean.keep_mention_body");
  const auto rep = cfg.count("clean.collapse_repeats");
  if (rep > 0) c.collapse_repeats = int(rep);
  else c.collapse_repeats.reset();
  c.remove_stopwords = cfg.flag("clean.remove_stopwords");
  c.validate();
  return c;
}

FeatureConfig feature_config(const Config& cfg) {
  FeatureConfig f;
  f.clean = clean_config(cfg);
  f.ngrams = {int(cfg.count("features.ngram_min")), int(cfg.count("features.ngram_max"))};
  f.min_df = int(cfg.count("features.min_df"));
  f.dense = cfg.flag("features.dense");
  f.standardize = cfg.flag("features.standardize");
  f.sentiment = cfg.flag("features.sentiment");
  for (const auto& slot : cfg.list("features.drop")) f.drop.insert(slot);
  f.validate();
  return f;
}

std::vector<Dim> config_dims(const Config& cfg) {
  std::vector<Dim> dims;
  for (const auto& name : cfg.list("train.dims")) {
    const Dim d = parse_dim(name);
    if (std::find(dims.begin(), dims.end(), d) == dims.end()) dims.push_back(d);
  }
  if (dims.empty()) throw Error(Errc::ConfigError, "train.dims lists no label dimension");
  std::sort(dims.begin(), dims.end());
  return dims;
}

void train_run(const Config& cfg, const fs::path& out, std::string& log) {
  const auto& model = cfg.str("model");
  if (!is_linear_model(model) && model != "bigru" && model != "charcnn")
    throw Error(Errc::ConfigError, fmt::format("unknown model '{}' (logreg, linsvc, bigru, charcnn)", model));
  const Lang lang = parse_lang(cfg.str("lang"));
  const std::uint64_t seed = cfg.count("seed");
  if (cfg.str("data.train").empty()) throw Error(Errc::ConfigError, "no training data (--train or data.train)");
  LoadOptions lo;
  lo.coerce_labels = cfg.flag("data.coerce_labels");
  Dataset train = load_dataset(cfg.str("data.train"), lang, lo);
  auto dev = load_optional(cfg, "data.dev", lang, lo);
  const auto test = load_optional(cfg, "data.test", lang, lo);
  if (dev && cfg.flag("data.fold_dev")) {
    train = concat(train, *dev, "train+dev");
    dev.reset();
  }
  log += fmt::format("model {} lang {} seed {}: {} training tweets\n", model, to_string(lang), seed, train.size());

  fs::create_directories(out);
  write_file(out / "config.snapshot", cfg.snapshot());
  write_file(out / "seed", fmt::format("{}\n", seed));
  if (is_linear_model(model)) train_linear(cfg, train, dev, lang, seed, out, log);
  else train_neural(cfg, train, dev, seed, out, log);

  const auto predictor = Predictor::load(out);
  std::string metrics = "split,dim,metric,value\n";
  const std::vector<std::pair<std::string, const Dataset*>> splits{
      {"train", &train}, {"dev", dev ? &*dev : nullptr}, {"test", test ? &*test : nullptr}};
  for (const auto& [name, ds] : splits) {
    if (!ds) continue;
    std::vector<LabelSet> pred;
    for (const auto& t : ds->tweets) pred.push_back(predictor.predict(t));
    write_file(out / fmt::format("predictions_{}.tsv", name), predictions_tsv(*ds, pred));
    if (!ds->labeled()) {
      log += fmt::format("{}: unlabeled, predictions only\n", name);
      continue;
    }
    metrics += metric_rows(name, *ds, pred, predictor.dims());
    const auto gold = gold_labels(*ds);
    for (Dim dim : predictor.dims()) {
      const auto cm = confusion(dimension(gold, dim), dimension(pred, dim));
      write_file(out / fmt::format("confusion_{}_{}.svg", name, to_string(dim)),
                 svg_confusion(cm, fmt::format("{} {} {}", name, to_string(lang), to_string(dim))));
    }
  }
  write_file(out / "metrics.csv", metrics);
}

Predictor Predictor::load(const fs::path& run_dir) {
  Config cfg = Config::load(run_dir / "config.snapshot");
  cfg.resolve(train_defaults());
  Predictor p;
  p.lang_ = parse_lang(cfg.str("lang"));
  p.dims_ = config_dims(cfg);
  if (is_linear_model(cfg.str("model"))) {
    p.pipeline_ = std::make_unique<FeaturePipeline>(FeaturePipeline::load(run_dir / "pipeline.txt"));
    for (Dim dim : p.dims_) {
      auto m = LinearModel::parse(read_file(run_dir / model_file(dim, true)));
      m.check_vocabulary(p.pipeline_->vocabulary().checksum());
      if (m.dim() != p.pipeline_->dim())
        throw Error(Errc::DimensionMismatch, fmt::format("{} has {} weights, pipeline {} columns",
                                                          model_file(dim, true), m.dim(), p.pipeline_->dim()));
      p.linear_.emplace(dim, std::move(m));
    }
  } else {
    for (Dim dim : p.dims_) p.neural_.emplace(dim, load_checkpoint(run_dir / model_file(dim, false)));
  }
  return p;
}

std::vector<double> Predictor::proba(const Tweet& tweet, Dim dim) const {
  if (pipeline_) return linear_.at(dim).predict_proba(pipeline_->transform(tweet));
  const auto& m = *neural_.at(dim);
  return m.predict_proba(m.encode(tweet));
}

bool Predictor::predict(const Tweet& tweet, Dim dim) const {
  if (pipeline_) return linear_.at(dim).predict(pipeline_->transform(tweet)) == 1;
  const auto& m = *neural_.at(dim);
  return m.predict(m.encode(tweet)) == 1;
}

LabelSet Predictor::predict(const Tweet& tweet) const {
  LabelSet out;
  for (Dim dim : dims_) out.set(dim, predict(tweet, dim));
  if (!out.hs) out.tr = out.ag = false;
  return out;
}

PredictFn Predictor::predict_fn(Dim dim) const {
  if (std::find(dims_.begin(), dims_.end(), dim) == dims_.end())
    throw Error(Errc::InvalidArgument, fmt::format("run has no {} model", to_string(dim)));
  return [this, dim](const std::string& text) {
    Tweet t;
    t.text = text;
    t.lang = lang_;
    return proba(t, dim);
  };
}

std::string predictions_tsv(const Dataset& ds, const std::vector<LabelSet>& pred) {
  std::string out = "id\tHS\tTR\tAG\n";
  for (std::size_t i = 0; i < ds.tweets.size(); ++i)
    out += fmt::format("{}\t{}\t{}\t{}\n", ds.tweets[i].id, int(pred[i].hs), int(pred[i].tr), int(pred[i].ag));
  return out;
}

std::map<std::string, LabelSet> read_predictions(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != "id\tHS\tTR\tAG")
    throw Error(Errc::MissingColumn, fmt::format("{}:1: header must be id<TAB>HS<TAB>TR<TAB>AG", path.string()));
  std::map<std::string, LabelSet> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1)
      f.push_back(line.substr(start, tab - start));
    f.push_back(line.substr(start));
    if (f.size() != 4) throw Error(Errc::MalformedRow, fmt::format("{}:{}: expected 4 fields", path.string(), line_no));
    LabelSet ls;
    for (std::size_t k = 0; k < 3; ++k) {
      if (f[k + 1] != "0" && f[k + 1] != "1")
        throw Error(Errc::BadLabelValue, fmt::format("{}:{}: label '{}' is not 0/1", path.string(), line_no, f[k + 1]));
      ls.set(kAllDims[k], f[k + 1] == "1");
    }
    if (!out.emplace(f[0], ls).second)
      throw Error(Errc::DuplicateId, fmt::format("{}:{}: duplicate id {}", path.string(), line_no, f[0]));
  }
  return out;
}

std::string metric_rows(const std::string& split, const Dataset& gold_ds, const std::vector<LabelSet>& pred,
                        const std::vector<Dim>& dims) {
  const auto gold = gold_labels(gold_ds);
  std::string out;
  for (Dim dim : dims) {
    const auto cm = confusion(dimension(gold, dim), dimension(pred, dim));
    const auto r = metrics_from_confusion(cm);
    const auto d = to_string(dim);
    out += fmt::format("{},{},n,{}\n", split, d, cm.total());
    out += fmt::format("{},{},precision,{:.6f}\n", split, d, r.positive.precision);
    out += fmt::format("{},{},recall,{:.6f}\n", split, d, r.positive.recall);
    out += fmt::format("{},{},f1,{:.6f}\n", split, d, r.positive.f1);
    out += fmt::format("{},{},macro_f1,{:.6f}\n", split, d, r.macro_f1);
    out += fmt::format("{},{},accuracy,{:.6f}\n", split, d, r.accuracy);
    out += fmt::format("{},{},fpr,{:.6f}\n", split, d, false_positive_rate(cm));
  }
  if (std::set<Dim>(dims.begin(), dims.end()).size() == 3) {
    out += fmt::format("{},B,subtask_b,{:.6f}\n", split, subtask_b_score(gold, pred));
    out += fmt::format("{},B,emr,{:.6f}\n", split, emr(gold, pred));
  }
  return out;
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, fmt::format("cannot write {}", path.string()));
  out << content;
  if (!out) throw Error(Errc::IoError, fmt::format("failed writing {}", path.string()));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hwk::cli

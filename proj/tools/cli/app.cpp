// SPDX-License-Identifier: Apache-2.0
#include "cli/app.hpp"

#include <cstdlib>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cli/config.hpp"
#include "cli/run.hpp"
#include "hwk/analysis.hpp"
#include "hwk/error.hpp"
#include "hwk/eval.hpp"
#include "hwk/svg.hpp"
#include "hwk/textprep.hpp"

namespace hwk::cli {

namespace fs = std::filesystem;

namespace {

std::string quoted(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

/// Config file plus flag overrides, with the HWK_SEED fallback.
struct Settings {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> flags;
  std::vector<std::string> sets;

  void flag(const std::string& key, const std::string& value, const std::string& name) {
    if (!value.empty()) flags.emplace_back(key, value), names.push_back(name);
  }

  Config resolve(const Defaults& defaults) const {
    Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
    for (std::size_t i = 0; i < flags.size(); ++i) cfg.set(flags[i].first, flags[i].second, names[i]);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(Errc::ConfigError, fmt::format("--set: expected key=value, got '{}'", kv));
      auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t"));
        s.erase(s.find_last_not_of(" \t") + 1);
        return s;
      };
      cfg.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)), "--set");
    }
    if (!cfg.has("seed"))
      if (const char* env = std::getenv("HWK_SEED"); env && *env) cfg.set("seed", env, "HWK_SEED");
    cfg.resolve(defaults);
    cfg.count("seed");
    return cfg;
  }

  std::vector<std::string> names;
};

std::uint64_t seed_or_env(const std::string& flag) {
  std::string v = flag;
  std::string origin = "--seed";
  if (v.empty())
    if (const char* env = std::getenv("HWK_SEED"); env && *env) v = env, origin = "HWK_SEED";
  if (v.empty()) return 0;
  Config c;
  c.set("seed", v, origin);
  return c.count("seed");
}

Dataset load_input(const std::string& path, const std::string& lang, bool coerce = false) {
  LoadOptions lo;
  lo.coerce_labels = coerce;
  return load_dataset(path, parse_lang(lang), lo);
}

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

int do_train(const Settings& s, std::string out_dir, std::ostream& out) {
  const Config cfg = s.resolve(train_defaults());
  if (out_dir.empty()) out_dir = fmt::format("runs/{}-s{}", cfg.str("model"), cfg.str("seed"));
  std::string log;
  train_run(cfg, out_dir, log);
  write_file(fs::path(out_dir) / "train.log", log);
  out << log << fmt::format("run directory: {}\n", out_dir);
  return 0;
}

int do_gridsearch(const Settings& s, std::string out_dir, std::ostream& out) {
  const Config cfg = s.resolve(gridsearch_defaults());
  const auto seed = cfg.count("seed");
  if (out_dir.empty()) out_dir = fmt::format("runs/gridsearch-s{}", seed);
  const Lang lang = parse_lang(cfg.str("lang"));
  if (cfg.str("data.train").empty()) throw Error(Errc::ConfigError, "no training data (--train or data.train)");
  LoadOptions lo;
  lo.coerce_labels = cfg.flag("data.coerce_labels");
  Dataset train = load_dataset(cfg.str("data.train"), lang, lo);
  if (!cfg.str("data.dev").empty() && cfg.flag("data.fold_dev"))
    train = concat(train, load_dataset(cfg.str("data.dev"), lang, lo), "train+dev");
  const auto dims = config_dims(cfg);
  if (dims.size() != 1) throw Error(Errc::ConfigError, "grid search tunes one label dimension at a time");

  std::vector<GridPoint> grid;
  for (const auto& loss : cfg.list("grid.loss"))
    for (const auto& pen : cfg.list("grid.penalty"))
      for (const auto& c : cfg.list("grid.C")) {
        Config one;
        one.set("C", c, "grid.C");
        grid.push_back({parse_loss(loss), parse_penalty(pen), one.real("C")});
      }
  if (grid.empty()) throw Error(Errc::ConfigError, "empty parameter grid");

  FeaturePipeline pipe(feature_config(cfg));
  pipe.fit(train);
  const auto X = pipe.transform(train);
  const auto y = train.labels(dims[0]);
  GridSearchOptions opts;
  opts.k = int(cfg.count("grid.folds"));
  opts.seed = seed;
  opts.epochs = int(cfg.count("linear.epochs"));
  opts.threads = int(cfg.count("grid.threads"));
  const auto res = grid_search_cv(X, y, grid, opts);

  std::string csv = "loss,penalty,C,mean_macro_f1,std_macro_f1";
  for (int k = 1; k <= opts.k; ++k) csv += fmt::format(",fold{}", k);
  csv += "\n";
  for (const auto& r : res.results) {
    csv += fmt::format("{},{},{},{:.6f},{:.6f}", to_string(r.params.loss), to_string(r.params.penalty), r.params.C,
                       r.mean, r.std);
    for (double f : r.fold_macro_f1) csv += fmt::format(",{:.6f}", f);
    csv += "\n";
  }
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "config.snapshot", cfg.snapshot());
  write_file(fs::path(out_dir) / "seed", fmt::format("{}\n", seed));
  write_file(fs::path(out_dir) / "gridsearch.csv", csv);
  const auto& b = res.results[res.best];
  out << fmt::format("best: loss={} penalty={} C={} mean_macro_f1={:.6f} std={:.6f}\n", to_string(b.params.loss),
                     to_string(b.params.penalty), b.params.C, b.mean, b.std);
  out << fmt::format("results: {}\n", (fs::path(out_dir) / "gridsearch.csv").string());
  return 0;
}

int do_predict(const std::string& run_dir, const std::string& input, const std::string& out_path, std::ostream& out) {
  const auto p = Predictor::load(run_dir);
  const auto ds = load_dataset(input, p.lang());
  std::vector<LabelSet> pred;
  for (const auto& t : ds.tweets) pred.push_back(p.predict(t));
  const auto tsv = predictions_tsv(ds, pred);
  if (out_path.empty()) out << tsv;
  else write_file(out_path, tsv);
  return 0;
}

int do_evaluate(const std::string& pred_path, const std::string& gold_path, const std::string& task,
                bool positive_only, std::ostream& out) {
  if (task != "a" && task != "b") throw Error(Errc::InvalidArgument, fmt::format("--task must be a or b, got '{}'", task));
  const auto gold = load_dataset(gold_path, Lang::EN);
  const auto pred_map = read_predictions(pred_path);
  std::vector<LabelSet> pred;
  for (const auto& t : gold.tweets) {
    auto it = pred_map.find(t.id);
    if (it == pred_map.end()) throw Error(Errc::MalformedRow, fmt::format("{}: no prediction for id {}", pred_path, t.id));
    pred.push_back(it->second);
  }
  if (pred_map.size() != gold.size())
    throw Error(Errc::MalformedRow,
                fmt::format("{}: {} predictions for {} gold tweets", pred_path, pred_map.size(), gold.size()));
  std::vector<LabelSet> truth;
  for (const auto& t : gold.tweets) {
    if (!t.labels) throw Error(Errc::Unlabeled, fmt::format("{}: gold tweet {} has no labels", gold_path, t.id));
    truth.push_back(*t.labels);
  }
  out << fmt::format("task={}\nn={}\n", task, gold.size());
  if (task == "a") {
    const auto r = binary_metrics(dimension(truth, Dim::HS), dimension(pred, Dim::HS));
    out << fmt::format("precision={:.6f}\nrecall={:.6f}\nf1={:.6f}\n", r.positive.precision, r.positive.recall,
                       r.positive.f1);
    if (!positive_only) {
      const auto cm = confusion(dimension(truth, Dim::HS), dimension(pred, Dim::HS));
      out << fmt::format("macro_f1={:.6f}\naccuracy={:.6f}\nfpr={:.6f}\n", r.macro_f1, r.accuracy,
                         false_positive_rate(cm));
    }
    return 0;
  }
  for (Dim d : kAllDims) {
    const auto yt = dimension(truth, d), yp = dimension(pred, d);
    if (positive_only) out << fmt::format("{}.f1={:.6f}\n", to_string(d), binary_metrics(yt, yp).positive.f1);
    else out << fmt::format("{}.macro_f1={:.6f}\n", to_string(d), macro_f1(yt, yp));
  }
  out << fmt::format("subtask_b={:.6f}\nemr={:.6f}\n", subtask_b_score(truth, pred), emr(truth, pred));
  return 0;
}

struct ExplainArgs {
  std::string run, text, input, id, out, dim = "HS", seed;
  std::size_t samples = 1000, top_k = 10, global = 0;
  double width = 0;
};

int do_explain(const ExplainArgs& a, std::ostream& out) {
  const auto p = Predictor::load(a.run);
  Tweet tweet;
  if (!a.text.empty()) {
    if (!a.input.empty()) throw Error(Errc::InvalidArgument, "use either --text or --input/--id");
    tweet.id = a.id.empty() ? "text" : a.id;
    tweet.text = a.text;
    tweet.lang = p.lang();
  } else {
    if (a.input.empty() || a.id.empty()) throw Error(Errc::InvalidArgument, "explain needs --text or --input with --id");
    const auto ds = load_dataset(a.input, p.lang());
    auto it = std::find_if(ds.tweets.begin(), ds.tweets.end(), [&](const Tweet& t) { return t.id == a.id; });
    if (it == ds.tweets.end()) throw Error(Errc::InvalidArgument, fmt::format("{}: no tweet with id {}", a.input, a.id));
    tweet = *it;
  }
  const Dim dim = parse_dim(a.dim);
  LimeOptions opts;
  opts.n_samples = a.samples;
  opts.top_k = a.top_k;
  opts.seed = seed_or_env(a.seed);
  if (a.width > 0) opts.kernel_width = a.width;
  const auto ex = lime_explain(p.predict_fn(dim), tweet, opts);
  out << ex.report();
  if (a.global > 0) {
    if (!p.linear()) throw Error(Errc::InvalidArgument, "--global needs a linear run");
    out << importance_csv(linear_importance(p.linear_model(dim), *p.pipeline(), a.global));
  }
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    std::string safe;
    for (char c : tweet.id) safe += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_';
    std::vector<std::pair<std::string, double>> bars;
    for (const auto& w : ex.weights) bars.emplace_back(w.token, w.weight);
    write_file(fs::path(a.out) / fmt::format("explanation_{}.json", safe), ex.report());
    write_file(fs::path(a.out) / fmt::format("explanation_{}.svg", safe),
               svg_bar_chart(bars, fmt::format("{} P={:.2f} ({})", to_string(dim), ex.probability, tweet.id)));
  }
  return 0;
}

struct AuditArgs {
  std::string train, test, lang = "en", dim = "HS", out = "audit";
  std::size_t min_support = 20, top = 10;
  bool coerce = false;
};

int do_audit(const AuditArgs& a, std::ostream& out) {
  const auto train = load_input(a.train, a.lang, a.coerce);
  const auto test = load_input(a.test, a.lang, a.coerce);
  const auto rep = discrepancy_report(train, test, a.min_support, parse_dim(a.dim));
  fs::create_directories(a.out);
  write_file(fs::path(a.out) / "discrepancy.csv", rep.csv());
  out << rep.summary(a.top);
  for (const auto& [name, ds] : {std::pair{"train", &train}, std::pair{"test", &test}}) {
    const auto tags = hashtag_stats(*ds, a.top);
    write_file(fs::path(a.out) / fmt::format("hashtags_{}.csv", name), tags.csv());
    std::vector<std::pair<std::string, double>> bars;
    for (const auto& r : tags.rows) bars.emplace_back(r.tag, r.share);
    write_file(fs::path(a.out) / fmt::format("hashtags_{}.svg", name),
               svg_bar_chart(bars, fmt::format("top hashtags ({})", name)));
    out << fmt::format("{}: {} hashtag occurrences, {} distinct, top-{} share {:.1f}%, {:.1f}% of tweets tagged\n", name,
                       tags.total_occurrences, tags.distinct, tags.rows.size(), 100 * tags.top_share(),
                       tags.tweets ? 100.0 * double(tags.tweets_with_tag) / double(tags.tweets) : 0.0);
  }
  out << fmt::format("report: {}\n", (fs::path(a.out) / "discrepancy.csv").string());
  return 0;
}

int do_preprocess(const Settings& s, const std::string& input, const std::string& out_path, std::ostream& out) {
  const Config cfg = s.resolve(train_defaults());
  const auto clean = clean_config(cfg);
  const auto ds = load_dataset(input, parse_lang(cfg.str("lang")));
  std::string tsv = "id\ttokens\thashtags\tmentions\n";
  for (const auto& t : ds.tweets) {
    const auto seq = preprocess(t, clean);
    tsv += fmt::format("{}\t{}\t{}\t{}\n", t.id, join(seq.tokens, ' '), join(seq.kept_hashtags, ' '),
                       join(seq.kept_mentions, ' '));
  }
  if (out_path.empty()) out << tsv;
  else write_file(out_path, tsv);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hwk: multilingual hate-speech toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Settings train_s;
  std::string model, train_path, dev_path, test_path, seed, lang, dims, out_dir;
  bool fold_dev = false, coerce = false;
  auto* train = app.add_subcommand("train", "Train a model and write a run directory");
  train->add_option("--model", model, "logreg | linsvc | bigru | charcnn");
  train->add_option("--config", train_s.config_path, "key = value settings file");
  train->add_option("--train", train_path, "Training TSV");
  train->add_option("--dev", dev_path, "Development TSV");
  train->add_option("--test", test_path, "Test TSV");
  train->add_option("--seed", seed, "Seed (falls back to HWK_SEED)");
  train->add_option("--lang", lang, "en | es");
  train->add_option("--dims", dims, "Label dimensions, e.g. HS,TR,AG");
  train->add_flag("--fold-dev", fold_dev, "Merge the development split into training");
  train->add_flag("--coerce-labels", coerce, "Force TR = AG = 0 on rows with HS = 0");
  train->add_option("--set", train_s.sets, "Extra key=value overrides")->take_all();
  train->add_option("--out", out_dir, "Run directory (default runs/<model>-s<seed>)");

  Settings grid_s;
  std::string folds, threads;
  auto* grid = app.add_subcommand("gridsearch", "Stratified k-fold search over linear models");
  grid->add_option("--config", grid_s.config_path, "key = value settings file");
  grid->add_option("--train", train_path, "Training TSV");
  grid->add_option("--dev", dev_path, "Development TSV (used with --fold-dev)");
  grid->add_option("--seed", seed, "Seed (falls back to HWK_SEED)");
  grid->add_option("--lang", lang, "en | es");
  grid->add_option("--dim", dims, "Label dimension to tune");
  grid->add_option("--folds", folds, "Number of folds");
  grid->add_option("--threads", threads, "Worker threads");
  grid->add_flag("--fold-dev", fold_dev, "Merge the development split into training");
  grid->add_flag("--coerce-labels", coerce, "Force TR = AG = 0 on rows with HS = 0");
  grid->add_option("--set", grid_s.sets, "Extra key=value overrides")->take_all();
  grid->add_option("--out", out_dir, "Output directory (default runs/gridsearch-s<seed>)");

  std::string run_dir, input, pred_out;
  auto* predict = app.add_subcommand("predict", "Label a TSV with a trained run");
  predict->add_option("--run", run_dir, "Run directory")->required();
  predict->add_option("--input", input, "TSV to label")->required();
  predict->add_option("--out", pred_out, "Output TSV (default stdout)");

  std::string pred_path, gold_path, task = "a";
  bool positive_only = false;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against gold labels");
  evaluate->add_option("--pred", pred_path, "Predictions TSV (id, HS, TR, AG)")->required();
  evaluate->add_option("--gold", gold_path, "Gold TSV")->required();
  evaluate->add_option("--task", task, "a (HS) or b (HS, TR, AG)");
  evaluate->add_flag("--positive-only", positive_only, "Report positive-class scores only");

  ExplainArgs ex;
  auto* explain = app.add_subcommand("explain", "LIME explanation of one tweet");
  explain->add_option("--run", ex.run, "Run directory")->required();
  explain->add_option("--text", ex.text, "Text to explain");
  explain->add_option("--input", ex.input, "TSV holding the tweet");
  explain->add_option("--id", ex.id, "Tweet id within --input");
  explain->add_option("--dim", ex.dim, "Label dimension");
  explain->add_option("--samples", ex.samples, "Perturbation samples");
  explain->add_option("--top-k", ex.top_k, "Tokens to report");
  explain->add_option("--width", ex.width, "Kernel width (default 0.75 * sqrt(tokens))");
  explain->add_option("--seed", ex.seed, "Seed (falls back to HWK_SEED)");
  explain->add_option("--global", ex.global, "Also list the N heaviest linear features");
  explain->add_option("--out", ex.out, "Directory for the JSON report and SVG chart");

  AuditArgs au;
  auto* audit = app.add_subcommand("audit", "Hashtag and label-drift audit of two splits");
  audit->add_option("--train", au.train, "Training TSV")->required();
  audit->add_option("--test", au.test, "Test TSV")->required();
  audit->add_option("--lang", au.lang, "en | es");
  audit->add_option("--dim", au.dim, "Label dimension");
  audit->add_option("--min-support", au.min_support, "Minimum matching tweets per split");
  audit->add_option("--top", au.top, "Rows in the printed summary and hashtag tables");
  audit->add_flag("--coerce-labels", au.coerce, "Force TR = AG = 0 on rows with HS = 0");
  audit->add_option("--out", au.out, "Output directory");

  Settings prep_s;
  auto* prep = app.add_subcommand("preprocess", "Print cleaned, stemmed tokens");
  prep->add_option("--input", input, "TSV to process")->required();
  prep->add_option("--config", prep_s.config_path, "key = value settings file (clean.* keys)");
  prep->add_option("--lang", lang, "en | es");
  prep->add_option("--out", pred_out, "Output TSV (default stdout)");

  std::vector<std::string> argv_store(args.begin(), args.end());
  std::vector<const char*> argv{"hwk"};
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    try {
      app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      throw Error(Errc::InvalidArgument, e.what());
    }

    auto common = [&](Settings& s) {
      s.flag("model", model, "--model");
      s.flag("data.train", train_path, "--train");
      s.flag("data.dev", dev_path, "--dev");
      s.flag("data.test", test_path, "--test");
      s.flag("seed", seed, "--seed");
      s.flag("lang", lang, "--lang");
      s.flag("train.dims", dims, "--dims");
      if (fold_dev) s.flag("data.fold_dev", "true", "--fold-dev");
      if (coerce) s.flag("data.coerce_labels", "true", "--coerce-labels");
    };
    if (train->parsed()) {
      common(train_s);
      return do_train(train_s, out_dir, out);
    }
    if (grid->parsed()) {
      common(grid_s);
      grid_s.flag("grid.folds", folds, "--folds");
      grid_s.flag("grid.threads", threads, "--threads");
      return do_gridsearch(grid_s, out_dir, out);
    }
    if (predict->parsed()) return do_predict(run_dir, input, pred_out, out);
    if (evaluate->parsed()) return do_evaluate(pred_path, gold_path, task, positive_only, out);
    if (explain->parsed()) return do_explain(ex, out);
    if (audit->parsed()) return do_audit(au, out);
    if (prep->parsed()) {
      prep_s.flag("lang", lang, "--lang");
      return do_preprocess(prep_s, input, pred_out, out);
    }
    throw Error(Errc::InvalidArgument, "no subcommand");
  } catch (const Error& e) {
    err << fmt::format("error: code={} message=\"{}\"\n", to_string(e.code()), quoted(e.what()));
  } catch (const fs::filesystem_error& e) {
    err << fmt::format("error: code={} message=\"{}\"\n", to_string(Errc::IoError), quoted(e.what()));
  }
  return 2;
}

}  // namespace hwk::cli

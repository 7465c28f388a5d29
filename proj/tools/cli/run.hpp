// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cli/config.hpp"
#include "hwk/corpus.hpp"
#include "hwk/explain.hpp"
#include "hwk/features/pipeline.hpp"
#include "hwk/linear.hpp"
#include "hwk/neural.hpp"

namespace hwk::cli {

using Defaults = std::vector<std::pair<std::string, std::string>>;

/// Every key `train` understands, with its default.
const Defaults& train_defaults();
const Defaults& gridsearch_defaults();

bool is_linear_model(const std::string& model);
FeatureConfig feature_config(const Config& cfg);
CleanConfig clean_config(const Config& cfg);
std::vector<Dim> config_dims(const Config& cfg);

/// `log` collects progress lines for train.log.
void train_run(const Config& cfg, const std::filesystem::path& out, std::string& log);

/// Models of a finished run directory.
class Predictor {
 public:
  static Predictor load(const std::filesystem::path& run_dir);

  Lang lang() const { return lang_; }
  const std::vector<Dim>& dims() const { return dims_; }
  bool linear() const { return pipeline_ != nullptr; }
  const FeaturePipeline* pipeline() const { return pipeline_.get(); }
  const LinearModel& linear_model(Dim dim) const { return linear_.at(dim); }

  /// [P(negative), P(positive)] for one dimension.
  std::vector<double> proba(const Tweet& tweet, Dim dim) const;
  bool predict(const Tweet& tweet, Dim dim) const;
  /// Untrained dimensions are 0; TR and AG are forced to 0 when HS is 0.
  LabelSet predict(const Tweet& tweet) const;
  PredictFn predict_fn(Dim dim) const;

 private:
  Lang lang_ = Lang::EN;
  std::vector<Dim> dims_;
  std::unique_ptr<FeaturePipeline> pipeline_;
  std::map<Dim, LinearModel> linear_;
  std::map<Dim, std::shared_ptr<NeuralClassifier>> neural_;
};

/// `id<TAB>HS<TAB>TR<TAB>AG` rows with a header.
std::string predictions_tsv(const Dataset& ds, const std::vector<LabelSet>& pred);
std::map<std::string, LabelSet> read_predictions(const std::filesystem::path& path);

/// `split,dim,metric,value` rows; B rows appear when all three dimensions
/// are predicted.
std::string metric_rows(const std::string& split, const Dataset& gold, const std::vector<LabelSet>& pred,
                        const std::vector<Dim>& dims);

void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace hwk::cli

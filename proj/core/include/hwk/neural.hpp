// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hwk/autodiff.hpp"
#include "hwk/corpus.hpp"
#include "hwk/textprep.hpp"

namespace hwk {

/// One-hot character encoder over a fixed 70-symbol alphabet: 26 letters,
/// 10 digits, 33 other symbols and newline. Text is read backwards, so the
/// final character lands in column 0 and only the last L characters are
/// kept. ASCII capitals fold to lowercase; anything else outside the
/// alphabet (including spaces) yields an all-zero column.
class CharQuantizer {
 public:
  explicit CharQuantizer(std::size_t max_len = 140);

  std::size_t alphabet_size() const { return alphabet_.size(); }
  std::size_t max_len() const { return max_len_; }
  const std::u32string& alphabet() const { return alphabet_; }
  std::optional<std::size_t> row(char32_t c) const;

  /// [alphabet_size, max_len] matrix.
  ad::Tensor quantize(std::string_view text) const;

 private:
  std::u32string alphabet_;
  std::unordered_map<char32_t, std::size_t> index_;
  std::size_t max_len_;
};

/// Token ids for the word model: 0 = padding, 1 = unknown, then training
/// tokens by descending frequency (ties in lexicographic order).
class WordIndex {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnknown = 1;

  WordIndex() = default;
  static WordIndex build(const std::vector<TokenSequence>& docs, std::size_t max_size = 0,
                         std::size_t min_count = 1);
  static WordIndex from_tokens(std::vector<std::string> tokens);

  /// Vocabulary size including the two reserved ids.
  std::size_t size() const { return tokens_.size() + 2; }
  std::size_t id(const std::string& token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  /// First `seq_len` tokens as ids, right-padded with kPad.
  std::vector<std::size_t> encode(const std::vector<std::string>& tokens, std::size_t seq_len) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> ids_;
};

struct GruHyper {
  std::size_t vocab_size = 2;
  std::size_t seq_len = 140;
  std::size_t embed_dim = 400;
  std::size_t hidden = 100;
  std::vector<std::size_t> dense{64, 32};
  double dropout = 0.2;
  std::size_t batch = 32;
  std::size_t classes = 2;

  void validate() const;
};

struct CnnHyper {
  std::size_t alphabet = 70;
  std::size_t max_len = 140;
  std::size_t conv_layers = 3;
  std::size_t filters = 256;
  std::size_t kernel = 7;
  std::size_t pool = 3;
  std::vector<std::size_t> dense{512, 256};
  double dropout = 0.2;
  std::size_t batch = 32;
  std::size_t classes = 2;

  void validate() const;
};

/// Sequence length after each conv and each pool, in order.
std::vector<std::size_t> cnn_length_trace(const CnnHyper& hyper);

/// Encoded model input: word ids for the recurrent model, the one-hot
/// character matrix for the convolutional one.
struct NeuralInput {
  std::vector<std::size_t> ids;
  ad::Tensor chars;
};

/// Ordered named parameters.
class ParamSet {
 public:
  ad::Tensor& add(std::string name, ad::Tensor t);
  ad::Tensor& get(std::string_view name);
  const ad::Tensor& get(std::string_view name) const;
  std::vector<ad::Tensor> tensors() const;
  const std::vector<std::pair<std::string, ad::Tensor>>& entries() const { return entries_; }
  std::vector<std::pair<std::string, ad::Tensor>>& entries() { return entries_; }
  std::size_t count() const;
  void fill(double value);
  /// Deep copy of every value, for snapshots.
  std::vector<std::vector<double>> snapshot() const;
  void restore(const std::vector<std::vector<double>>& values);

 private:
  std::vector<std::pair<std::string, ad::Tensor>> entries_;
};

class NeuralClassifier {
 public:
  virtual ~NeuralClassifier() = default;
  virtual std::string_view kind() const = 0;
  virtual std::size_t classes() const = 0;
  virtual std::size_t batch() const = 0;
  /// Class probabilities [classes].
  virtual ad::Tensor forward(ad::Tape& tape, const NeuralInput& in, Rng& rng, bool train) const = 0;
  virtual NeuralInput encode(const Tweet& tweet) const = 0;
  virtual std::string hyper_string() const = 0;

  ParamSet& params() { return params_; }
  const ParamSet& params() const { return params_; }

  std::vector<double> predict_proba(const NeuralInput& in) const;
  int predict(const NeuralInput& in) const;

 protected:
  ParamSet params_;
};

/// Embedding -> spatial dropout -> forward and backward GRU (padding skipped)
/// -> [h_fwd, h_bwd] -> dense relu layers with dropout -> softmax.
/// GRU step: z = s(x Wz + h Uz + bz), r = s(x Wr + h Ur + br),
/// n = tanh(x Wn + (r * h) Un + bn), h' = z * h + (1 - z) * n.
class BiGru final : public NeuralClassifier {
 public:
  BiGru(GruHyper hyper, WordIndex index, CleanConfig clean, std::uint64_t seed);

  std::string_view kind() const override { return "bigru"; }
  std::size_t classes() const override { return hyper_.classes; }
  std::size_t batch() const override { return hyper_.batch; }
  ad::Tensor forward(ad::Tape& tape, const NeuralInput& in, Rng& rng, bool train) const override;
  NeuralInput encode(const Tweet& tweet) const override;
  std::string hyper_string() const override;

  const GruHyper& hyper() const { return hyper_; }
  const WordIndex& index() const { return index_; }
  const CleanConfig& clean() const { return clean_; }

  /// Final hidden state of one direction over the given embedded rows.
  ad::Tensor run_direction(ad::Tape& tape, const ad::Tensor& embedded, std::string_view prefix,
                           bool reverse) const;

 private:
  GruHyper hyper_;
  WordIndex index_;
  CleanConfig clean_;
};

/// conv_layers x (conv1d -> relu -> maxpool) -> flatten -> dense relu layers
/// with dropout -> softmax, over the quantized character matrix.
class CharCnn final : public NeuralClassifier {
 public:
  CharCnn(CnnHyper hyper, std::uint64_t seed);

  std::string_view kind() const override { return "charcnn"; }
  std::size_t classes() const override { return hyper_.classes; }
  std::size_t batch() const override { return hyper_.batch; }
  ad::Tensor forward(ad::Tape& tape, const NeuralInput& in, Rng& rng, bool train) const override;
  NeuralInput encode(const Tweet& tweet) const override;
  std::string hyper_string() const override;

  const CnnHyper& hyper() const { return hyper_; }
  const CharQuantizer& quantizer() const { return quantizer_; }

 private:
  CnnHyper hyper_;
  CharQuantizer quantizer_;
};

struct NeuralTrainOptions {
  int epochs = 10;
  std::uint64_t seed = 0;
  ad::AdamConfig adam;
  /// Stop once validation macro-F1 reaches this value (disabled when > 1).
  double target_val_macro_f1 = 2.0;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0;
  double val_macro_f1 = 0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  double best_val_macro_f1 = 0;

  /// `epoch,train_loss,val_macro_f1` with a fixed number of decimals.
  std::string csv() const;
};

/// Mini-batch Adam on per-sample cross-entropy. Leaves the model holding the
/// parameters of the epoch with the best validation macro-F1 (earliest on ties).
TrainHistory train_classifier(NeuralClassifier& model, const std::vector<NeuralInput>& train_x,
                              const std::vector<int>& train_y, const std::vector<NeuralInput>& val_x,
                              const std::vector<int>& val_y, const NeuralTrainOptions& opts);

std::vector<NeuralInput> encode_all(const NeuralClassifier& model, const Dataset& ds);

struct RepeatSummary {
  std::vector<double> values;
  double mean = 0;
  double std = 0;
};

/// Runs `experiment(seed)` for each seed and summarizes the returned score.
RepeatSummary repeat_seeds(const std::function<double(std::uint64_t)>& experiment,
                           const std::vector<std::uint64_t>& seeds);

/// Text checkpoint: model kind, hyper-parameters, encoder state and every
/// tensor with its shape.
void save_checkpoint(const NeuralClassifier& model, const std::filesystem::path& path);
std::string serialize_checkpoint(const NeuralClassifier& model);
std::unique_ptr<NeuralClassifier> parse_checkpoint(std::string_view text);
std::unique_ptr<NeuralClassifier> load_checkpoint(const std::filesystem::path& path);

}  // namespace hwk

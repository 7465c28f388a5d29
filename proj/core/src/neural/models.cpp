// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include <fmt/format.h>

#include "hwk/error.hpp"
#include "hwk/neural.hpp"

namespace hwk {

using ad::Tape;
using ad::Tensor;

namespace {

Tensor glorot(ad::Shape shape, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  return Tensor::randn(std::move(shape), rng, std::sqrt(2.0 / double(fan_in + fan_out)), true);
}

void add_dense(ParamSet& p, const std::string& name, std::size_t in, std::size_t out, Rng& rng) {
  p.add(name + ".W", glorot({in, out}, in, out, rng));
  p.add(name + ".b", Tensor::zeros({out}, true));
}

Tensor dense_layer(Tape& tape, const ParamSet& p, const std::string& name, const Tensor& x) {
  return ad::add(tape, ad::matmul(tape, x, p.get(name + ".W")), p.get(name + ".b"));
}

/// Hidden relu layers with dropout, then the softmax output layer.
Tensor head(Tape& tape, const ParamSet& p, Tensor x, std::size_t layers, double rate, Rng& rng,
            bool train) {
  for (std::size_t i = 0; i < layers; ++i) {
    x = ad::relu(tape, dense_layer(tape, p, fmt::format("dense{}", i), x));
    x = ad::dropout(tape, x, rate, rng, train);
  }
  return ad::softmax(tape, dense_layer(tape, p, "out", x));
}

void check_dense(const std::vector<std::size_t>& dense) {
  for (auto d : dense)
    if (d == 0) throw Error(Errc::InvalidArgument, "dense widths must be positive");
}

void check_dropout(double rate) {
  if (!(rate >= 0.0 && rate < 1.0)) throw Error(Errc::InvalidArgument, "dropout must be in [0, 1)");
}

}  // namespace

void GruHyper::validate() const {
  if (vocab_size < 2 || seq_len == 0 || embed_dim == 0 || hidden == 0 || batch == 0 || classes < 2)
    throw Error(Errc::InvalidArgument, "GRU hyper-parameters must be positive (vocab >= 2, classes >= 2)");
  check_dense(dense);
  check_dropout(dropout);
}

void CnnHyper::validate() const {
  if (alphabet == 0 || max_len == 0 || conv_layers == 0 || filters == 0 || kernel == 0 || pool == 0 ||
      batch == 0 || classes < 2)
    throw Error(Errc::InvalidArgument, "CNN hyper-parameters must be positive (classes >= 2)");
  check_dense(dense);
  check_dropout(dropout);
  cnn_length_trace(*this);
}

std::vector<std::size_t> cnn_length_trace(const CnnHyper& h) {
  std::vector<std::size_t> trace;
  std::size_t len = h.max_len;
  for (std::size_t i = 0; i < h.conv_layers; ++i) {
    if (len < h.kernel)
      throw Error(Errc::ShapeMismatch, fmt::format("conv layer {} sees length {} < kernel {}", i, len, h.kernel));
    len = len - h.kernel + 1;
    trace.push_back(len);
    len /= h.pool;
    if (len == 0) throw Error(Errc::ShapeMismatch, fmt::format("pool layer {} leaves no positions", i));
    trace.push_back(len);
  }
  return trace;
}

ad::Tensor& ParamSet::add(std::string name, ad::Tensor t) {
  for (auto& [n, _] : entries_)
    if (n == name) throw Error(Errc::DuplicateId, "duplicate parameter " + name);
  entries_.emplace_back(std::move(name), std::move(t));
  return entries_.back().second;
}

ad::Tensor& ParamSet::get(std::string_view name) {
  for (auto& [n, t] : entries_)
    if (n == name) return t;
  throw Error(Errc::InvalidArgument, fmt::format("no parameter named {}", name));
}

const ad::Tensor& ParamSet::get(std::string_view name) const {
  return const_cast<ParamSet*>(this)->get(name);
}

std::vector<ad::Tensor> ParamSet::tensors() const {
  std::vector<ad::Tensor> out;
  for (auto& [_, t] : entries_) out.push_back(t);
  return out;
}

std::size_t ParamSet::count() const {
  std::size_t n = 0;
  for (auto& [_, t] : entries_) n += t.size();
  return n;
}

void ParamSet::fill(double value) {
  for (auto& [_, t] : entries_)
    for (auto& v : t.data()) v = value;
}

std::vector<std::vector<double>> ParamSet::snapshot() const {
  std::vector<std::vector<double>> out;
  for (auto& [_, t] : entries_) out.emplace_back(t.data().begin(), t.data().end());
  return out;
}

void ParamSet::restore(const std::vector<std::vector<double>>& values) {
  if (values.size() != entries_.size()) throw Error(Errc::ShapeMismatch, "snapshot size mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto dst = entries_[i].second.data();
    if (dst.size() != values[i].size()) throw Error(Errc::ShapeMismatch, "snapshot tensor mismatch");
    std::copy(values[i].begin(), values[i].end(), dst.begin());
  }
}

std::vector<double> NeuralClassifier::predict_proba(const NeuralInput& in) const {
  Tape tape;
  tape.set_recording(false);
  Rng rng(0);
  const Tensor p = forward(tape, in, rng, false);
  return {p.data().begin(), p.data().end()};
}

int NeuralClassifier::predict(const NeuralInput& in) const {
  const auto p = predict_proba(in);
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i] > p[best]) best = i;
  return int(best);
}

BiGru::BiGru(GruHyper hyper, WordIndex index, CleanConfig clean, std::uint64_t seed)
    : hyper_(std::move(hyper)), index_(std::move(index)), clean_(clean) {
  hyper_.validate();
  clean_.validate();
  Rng rng(seed);
  const std::size_t E = hyper_.embed_dim, H = hyper_.hidden;
  params_.add("embedding", Tensor::randn({hyper_.vocab_size, E}, rng, 0.05, true));
  for (const char* dir : {"fwd", "bwd"}) {
    const std::string d = dir;
    params_.add(d + ".W", glorot({E, 3 * H}, E, H, rng));
    params_.add(d + ".U_zr", glorot({H, 2 * H}, H, H, rng));
    params_.add(d + ".U_n", glorot({H, H}, H, H, rng));
    params_.add(d + ".b", Tensor::zeros({3 * H}, true));
  }
  std::size_t in = 2 * H;
  for (std::size_t i = 0; i < hyper_.dense.size(); ++i) {
    add_dense(params_, fmt::format("dense{}", i), in, hyper_.dense[i], rng);
    in = hyper_.dense[i];
  }
  add_dense(params_, "out", in, hyper_.classes, rng);
}

Tensor BiGru::run_direction(Tape& tape, const Tensor& embedded, std::string_view prefix,
                            bool reverse) const {
  const std::string d(prefix);
  const std::size_t H = hyper_.hidden;
  Tensor h = Tensor::zeros({H});
  if (embedded.rank() != 2 || embedded.dim(0) == 0) return h;
  const Tensor xw = ad::add(tape, ad::matmul(tape, embedded, params_.get(d + ".W")), params_.get(d + ".b"));
  const Tensor& u_zr = params_.get(d + ".U_zr");
  const Tensor& u_n = params_.get(d + ".U_n");
  const std::size_t T = embedded.dim(0);
  for (std::size_t s = 0; s < T; ++s) {
    const Tensor x = ad::row(tape, xw, reverse ? T - 1 - s : s);
    const Tensor hu = ad::matmul(tape, h, u_zr);
    const Tensor z = ad::sigmoid(tape, ad::add(tape, ad::slice(tape, x, 0, H), ad::slice(tape, hu, 0, H)));
    const Tensor r = ad::sigmoid(tape, ad::add(tape, ad::slice(tape, x, H, H), ad::slice(tape, hu, H, H)));
    const Tensor n = ad::tanh(
        tape, ad::add(tape, ad::slice(tape, x, 2 * H, H), ad::matmul(tape, ad::mul(tape, r, h), u_n)));
    h = ad::add(tape, n, ad::mul(tape, z, ad::sub(tape, h, n)));
  }
  return h;
}

Tensor BiGru::forward(Tape& tape, const NeuralInput& in, Rng& rng, bool train) const {
  if (in.ids.size() > hyper_.seq_len)
    throw Error(Errc::ShapeMismatch,
                fmt::format("sequence of {} ids exceeds seq_len {}", in.ids.size(), hyper_.seq_len));
  std::vector<std::size_t> ids;
  for (auto id : in.ids) {
    if (id >= hyper_.vocab_size)
      throw Error(Errc::ShapeMismatch, fmt::format("token id {} outside vocabulary of {}", id, hyper_.vocab_size));
    if (id != WordIndex::kPad) ids.push_back(id);
  }
  Tensor h_fwd = Tensor::zeros({hyper_.hidden});
  Tensor h_bwd = h_fwd;
  if (!ids.empty()) {
    Tensor emb = ad::embedding_lookup(tape, params_.get("embedding"), ids);
    emb = ad::spatial_dropout(tape, emb, hyper_.dropout, rng, train);
    h_fwd = run_direction(tape, emb, "fwd", false);
    h_bwd = run_direction(tape, emb, "bwd", true);
  }
  const Tensor joined = ad::concat(tape, {h_fwd, h_bwd});
  return head(tape, params_, joined, hyper_.dense.size(), hyper_.dropout, rng, train);
}

NeuralInput BiGru::encode(const Tweet& tweet) const {
  NeuralInput in;
  in.ids = index_.encode(preprocess(tweet, clean_).tokens, hyper_.seq_len);
  return in;
}

std::string BiGru::hyper_string() const {
  std::string dense;
  for (auto d : hyper_.dense) dense += fmt::format("{}{}", dense.empty() ? "" : ",", d);
  return fmt::format("vocab_size={} seq_len={} embed_dim={} hidden={} dense={} dropout={} batch={} classes={}",
                     hyper_.vocab_size, hyper_.seq_len, hyper_.embed_dim, hyper_.hidden, dense,
                     hyper_.dropout, hyper_.batch, hyper_.classes);
}

CharCnn::CharCnn(CnnHyper hyper, std::uint64_t seed) : hyper_(std::move(hyper)), quantizer_(hyper_.max_len) {
  hyper_.validate();
  if (hyper_.alphabet != quantizer_.alphabet_size())
    throw Error(Errc::InvalidArgument,
                fmt::format("alphabet size {} does not match quantizer ({})", hyper_.alphabet,
                            quantizer_.alphabet_size()));
  Rng rng(seed);
  const std::size_t F = hyper_.filters, K = hyper_.kernel;
  std::size_t cin = hyper_.alphabet;
  for (std::size_t i = 0; i < hyper_.conv_layers; ++i) {
    params_.add(fmt::format("conv{}.W", i), glorot({F, cin, K}, cin * K, F * K, rng));
    params_.add(fmt::format("conv{}.b", i), Tensor::zeros({F}, true));
    cin = F;
  }
  std::size_t in = F * cnn_length_trace(hyper_).back();
  for (std::size_t i = 0; i < hyper_.dense.size(); ++i) {
    add_dense(params_, fmt::format("dense{}", i), in, hyper_.dense[i], rng);
    in = hyper_.dense[i];
  }
  add_dense(params_, "out", in, hyper_.classes, rng);
}

Tensor CharCnn::forward(Tape& tape, const NeuralInput& in, Rng& rng, bool train) const {
  const Tensor& x0 = in.chars;
  if (x0.rank() != 2 || x0.dim(0) != hyper_.alphabet || x0.dim(1) != hyper_.max_len)
    throw Error(Errc::ShapeMismatch,
                fmt::format("char input {} expected [{}, {}]", ad::shape_string(x0.shape()), hyper_.alphabet,
                            hyper_.max_len));
  Tensor x = x0;
  for (std::size_t i = 0; i < hyper_.conv_layers; ++i) {
    x = ad::conv1d(tape, x, params_.get(fmt::format("conv{}.W", i)), params_.get(fmt::format("conv{}.b", i)));
    x = ad::maxpool1d(tape, ad::relu(tape, x), hyper_.pool);
  }
  return head(tape, params_, ad::flatten(tape, x), hyper_.dense.size(), hyper_.dropout, rng, train);
}

NeuralInput CharCnn::encode(const Tweet& tweet) const {
  NeuralInput in;
  in.chars = quantizer_.quantize(tweet.text);
  return in;
}

std::string CharCnn::hyper_string() const {
  std::string dense;
  for (auto d : hyper_.dense) dense += fmt::format("{}{}", dense.empty() ? "" : ",", d);
  return fmt::format(
      "alphabet={} max_len={} conv_layers={} filters={} kernel={} pool={} dense={} dropout={} batch={} classes={}",
      hyper_.alphabet, hyper_.max_len, hyper_.conv_layers, hyper_.filters, hyper_.kernel, hyper_.pool, dense,
      hyper_.dropout, hyper_.batch, hyper_.classes);
}

}  // namespace hwk

// SPDX-License-Identifier: Apache-2.0
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hwk/error.hpp"
#include "hwk/linear.hpp"

namespace hwk {

namespace {

constexpr std::string_view kLinearMagic = "hwk-linear v1";
constexpr std::string_view kOvrMagic = "hwk-ovr v1";

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct LineReader {
  std::istringstream in;
  int lineno = 0;

  explicit LineReader(std::string_view text) : in(std::string(text)) {}

  Error fail(std::string_view why) const {
    return Error(Errc::FormatError, fmt::format("model line {}: {}", lineno, why));
  }
  std::string line() {
    std::string l;
    ++lineno;
    if (!std::getline(in, l)) throw fail("truncated");
    return l;
  }
  /// "key v1 v2 ..." -> values after the expected key.
  std::vector<std::string> keyed(std::string_view key) {
    std::istringstream ls(line());
    std::string k;
    ls >> k;
    if (k != key) throw fail(fmt::format("expected '{}'", key));
    std::vector<std::string> out;
    for (std::string v; ls >> v;) out.push_back(v);
    return out;
  }
  double number(const std::string& s) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw fail(fmt::format("bad number '{}'", s));
    }
  }
};

LinearModel parse_linear(LineReader& r) {
  if (r.line() != kLinearMagic) throw r.fail("missing linear model header");
  LinearModel m;
  m.loss = parse_loss(r.keyed("loss").at(0));
  m.penalty = parse_penalty(r.keyed("penalty").at(0));
  m.C = r.number(r.keyed("C").at(0));
  m.classes.clear();
  for (const auto& c : r.keyed("classes")) m.classes.push_back(static_cast<int>(r.number(c)));
  if (m.classes.size() != 2) throw r.fail("a linear model has exactly two classes");
  m.vocab_checksum = std::stoull(r.keyed("vocabulary").at(0), nullptr, 16);
  m.calibration = r.number(r.keyed("calibration").at(0));
  m.bias = r.number(r.keyed("bias").at(0));
  const auto dim = static_cast<std::size_t>(r.number(r.keyed("weights").at(0)));
  m.weights.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) m.weights.push_back(r.number(r.line()));
  for (double w : m.weights)
    if (!std::isfinite(w)) throw r.fail("non-finite weight");
  return m;
}

}  // namespace

Loss parse_loss(std::string_view name) {
  if (name == "logistic" || name == "logreg") return Loss::Logistic;
  if (name == "hinge" || name == "linsvc") return Loss::Hinge;
  throw Error(Errc::InvalidArgument, fmt::format("unknown loss '{}'", name));
}

Penalty parse_penalty(std::string_view name) {
  if (name == "l1" || name == "L1") return Penalty::L1;
  if (name == "l2" || name == "L2") return Penalty::L2;
  throw Error(Errc::InvalidArgument, fmt::format("unknown penalty '{}'", name));
}

std::string_view to_string(Loss loss) { return loss == Loss::Logistic ? "logistic" : "hinge"; }
std::string_view to_string(Penalty penalty) { return penalty == Penalty::L1 ? "l1" : "l2"; }

double LinearModel::margin(const FeatureVector& x) const {
  if (x.dim() != weights.size())
    throw Error(Errc::DimensionMismatch,
                fmt::format("feature vector has {} columns, model expects {}", x.dim(), weights.size()));
  return x.dot(weights) + bias;
}

double LinearModel::positive_probability(const FeatureVector& x) const {
  const double m = margin(x);
  return sigmoid(loss == Loss::Hinge ? calibration * m : m);
}

std::vector<double> LinearModel::predict_proba(const FeatureVector& x) const {
  const double p = positive_probability(x);
  return {1.0 - p, p};
}

int LinearModel::predict(const FeatureVector& x) const { return margin(x) > 0 ? classes[1] : classes[0]; }

std::size_t LinearModel::nonzero_count() const {
  return static_cast<std::size_t>(std::count_if(weights.begin(), weights.end(), [](double w) { return w != 0.0; }));
}

void LinearModel::check_vocabulary(std::uint64_t checksum) const {
  if (vocab_checksum != 0 && checksum != 0 && vocab_checksum != checksum)
    throw Error(Errc::VocabularyMismatch,
                fmt::format("model was fitted on vocabulary {:016x}, got {:016x}", vocab_checksum, checksum));
}

std::string LinearModel::serialize() const {
  std::string out(kLinearMagic);
  out += fmt::format("\nloss {}\npenalty {}\nC {:.17g}\nclasses {} {}\nvocabulary {:016x}\n", to_string(loss),
                     to_string(penalty), C, classes.at(0), classes.at(1), vocab_checksum);
  out += fmt::format("calibration {:.17g}\nbias {:.17g}\nweights {}\n", calibration, bias, weights.size());
  for (double w : weights) out += fmt::format("{:.17g}\n", w);
  return out;
}

LinearModel LinearModel::parse(std::string_view text) {
  LineReader r(text);
  return parse_linear(r);
}

std::vector<double> OvrModel::predict_proba(const FeatureVector& x) const {
  if (models.size() == 1) return models[0].predict_proba(x);
  std::vector<double> p;
  p.reserve(models.size());
  double total = 0;
  for (const auto& m : models) {
    p.push_back(m.positive_probability(x));
    total += p.back();
  }
  for (double& v : p) v = total > 0 ? v / total : 1.0 / static_cast<double>(p.size());
  return p;
}

int OvrModel::predict(const FeatureVector& x) const {
  if (models.size() == 1) return models[0].predict(x);
  const auto p = predict_proba(x);
  // max_element keeps the first maximum, i.e. the lowest class index on ties.
  return classes[static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin())];
}

std::string OvrModel::serialize() const {
  std::string out(kOvrMagic);
  out += "\nclasses";
  for (int c : classes) out += fmt::format(" {}", c);
  out += fmt::format("\nmodels {}\n", models.size());
  for (const auto& m : models) out += m.serialize();
  return out;
}

OvrModel OvrModel::parse(std::string_view text) {
  LineReader r(text);
  if (r.line() != kOvrMagic) throw r.fail("missing one-vs-rest header");
  OvrModel m;
  for (const auto& c : r.keyed("classes")) m.classes.push_back(static_cast<int>(r.number(c)));
  const auto n = static_cast<std::size_t>(r.number(r.keyed("models").at(0)));
  const std::size_t expected = m.classes.size() == 2 ? 1 : m.classes.size();
  if (n != expected) throw r.fail("model count does not match class count");
  for (std::size_t i = 0; i < n; ++i) m.models.push_back(parse_linear(r));
  return m;
}

void OvrModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, fmt::format("cannot write {}", path.string()));
  out << serialize();
}

OvrModel OvrModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace hwk

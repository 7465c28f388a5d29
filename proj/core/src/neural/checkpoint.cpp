// SPDX-License-Identifier: Apache-2.0
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "hwk/error.hpp"
#include "hwk/neural.hpp"

namespace hwk {

namespace {

constexpr std::string_view kMagic = "hwk-neural v1";

std::string clean_line(const CleanConfig& c) {
  return fmt::format("clean {} {} {} {} {} {} {}\n", int(c.lowercase), int(c.strip_urls), int(c.strip_punctuation),
                     int(c.keep_hashtag_body), int(c.keep_mention_body), c.collapse_repeats.value_or(0),
                     int(c.remove_stopwords));
}

class Reader {
 public:
  explicit Reader(std::string_view text) : in_(std::string(text)) {}

  std::string line() {
    std::string s;
    if (!std::getline(in_, s)) throw fail("unexpected end of checkpoint");
    ++line_no_;
    return s;
  }

  std::vector<std::string> fields(std::string_view tag) {
    std::istringstream ss(line());
    std::vector<std::string> out;
    for (std::string f; ss >> f;) out.push_back(f);
    if (out.empty() || out[0] != tag) throw fail(fmt::format("expected '{}'", tag));
    out.erase(out.begin());
    return out;
  }

  Error fail(const std::string& msg) const {
    return Error(Errc::FormatError, fmt::format("checkpoint line {}: {}", line_no_, msg));
  }

 private:
  std::istringstream in_;
  std::size_t line_no_ = 0;
};

template <class T>
T number(const Reader& r, const std::string& s) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw r.fail("bad number '" + s + "'");
  return v;
}

double real(const Reader& r, const std::string& s) { return number<double>(r, s); }

std::map<std::string, std::string> hyper_map(const Reader& r, const std::vector<std::string>& fields) {
  std::map<std::string, std::string> out;
  for (const auto& f : fields) {
    const auto eq = f.find('=');
    if (eq == std::string::npos) throw r.fail("hyper field without '=': " + f);
    out[f.substr(0, eq)] = f.substr(eq + 1);
  }
  return out;
}

const std::string& need(const Reader& r, const std::map<std::string, std::string>& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw r.fail("missing hyper-parameter " + key);
  return it->second;
}

std::vector<std::size_t> widths(const Reader& r, const std::string& s) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start < s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    out.push_back(number<std::size_t>(r, s.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string serialize_checkpoint(const NeuralClassifier& model) {
  std::string out;
  out += fmt::format("{}\nkind {}\nhyper {}\n", kMagic, model.kind(), model.hyper_string());
  if (const auto* gru = dynamic_cast<const BiGru*>(&model)) {
    out += clean_line(gru->clean());
    out += fmt::format("words {}\n", gru->index().tokens().size());
    for (const auto& t : gru->index().tokens()) out += t + "\n";
  }
  const auto& entries = model.params().entries();
  out += fmt::format("tensors {}\n", entries.size());
  for (const auto& [name, t] : entries) {
    out += fmt::format("tensor {} {}", name, t.rank());
    for (auto d : t.shape()) out += fmt::format(" {}", d);
    out += "\n";
    bool first = true;
    for (double v : t.data()) {
      out += fmt::format("{}{:.17g}", first ? "" : " ", v);
      first = false;
    }
    out += "\n";
  }
  return out;
}

std::unique_ptr<NeuralClassifier> parse_checkpoint(std::string_view text) {
  Reader r(text);
  if (r.line() != kMagic) throw r.fail("not a neural checkpoint");
  const auto kind = r.fields("kind");
  if (kind.size() != 1) throw r.fail("kind needs one value");
  const auto hm = hyper_map(r, r.fields("hyper"));
  auto size = [&](const char* k) { return number<std::size_t>(r, need(r, hm, k)); };

  std::unique_ptr<NeuralClassifier> model;
  if (kind[0] == "bigru") {
    GruHyper h;
    h.vocab_size = size("vocab_size");
    h.seq_len = size("seq_len");
    h.embed_dim = size("embed_dim");
    h.hidden = size("hidden");
    h.dense = widths(r, need(r, hm, "dense"));
    h.dropout = real(r, need(r, hm, "dropout"));
    h.batch = size("batch");
    h.classes = size("classes");
    const auto cl = r.fields("clean");
    if (cl.size() != 7) throw r.fail("clean needs 7 fields");
    CleanConfig c;
    c.lowercase = cl[0] == "1";
    c.strip_urls = cl[1] == "1";
    c.strip_punctuation = cl[2] == "1";
    c.keep_hashtag_body = cl[3] == "1";
    c.keep_mention_body = cl[4] == "1";
    const int rep = number<int>(r, cl[5]);
    if (rep > 0) c.collapse_repeats = rep;
    else c.collapse_repeats.reset();
    c.remove_stopwords = cl[6] == "1";
    const auto wf = r.fields("words");
    if (wf.size() != 1) throw r.fail("words needs a count");
    std::vector<std::string> tokens(number<std::size_t>(r, wf[0]));
    for (auto& t : tokens) t = r.line();
    model = std::make_unique<BiGru>(h, WordIndex::from_tokens(std::move(tokens)), c, 0);
  } else if (kind[0] == "charcnn") {
    CnnHyper h;
    h.alphabet = size("alphabet");
    h.max_len = size("max_len");
    h.conv_layers = size("conv_layers");
    h.filters = size("filters");
    h.kernel = size("kernel");
    h.pool = size("pool");
    h.dense = widths(r, need(r, hm, "dense"));
    h.dropout = real(r, need(r, hm, "dropout"));
    h.batch = size("batch");
    h.classes = size("classes");
    model = std::make_unique<CharCnn>(h, 0);
  } else {
    throw r.fail("unknown model kind " + kind[0]);
  }

  const auto tf = r.fields("tensors");
  if (tf.size() != 1 || number<std::size_t>(r, tf[0]) != model->params().entries().size())
    throw r.fail("tensor count does not match the architecture");
  for (auto& [name, t] : model->params().entries()) {
    const auto f = r.fields("tensor");
    if (f.size() < 2 || f[0] != name) throw r.fail("expected tensor " + name);
    const auto rank = number<std::size_t>(r, f[1]);
    if (f.size() != rank + 2) throw r.fail("shape of " + name + " has the wrong rank");
    ad::Shape shape;
    for (std::size_t i = 0; i < rank; ++i) shape.push_back(number<std::size_t>(r, f[2 + i]));
    if (shape != t.shape())
      throw r.fail(fmt::format("tensor {} has shape {}, architecture expects {}", name, ad::shape_string(shape),
                               ad::shape_string(t.shape())));
    std::istringstream vs(r.line());
    auto data = t.data();
    std::size_t k = 0;
    for (std::string v; vs >> v; ++k) {
      if (k >= data.size()) throw r.fail("too many values for " + name);
      data[k] = real(r, v);
    }
    if (k != data.size()) throw r.fail("too few values for " + name);
  }
  return model;
}

void save_checkpoint(const NeuralClassifier& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << serialize_checkpoint(model);
  if (!out) throw Error(Errc::IoError, "failed writing " + path.string());
}

std::unique_ptr<NeuralClassifier> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_checkpoint(ss.str());
}

}  // namespace hwk

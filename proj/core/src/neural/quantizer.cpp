// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "hwk/error.hpp"
#include "hwk/neural.hpp"
#include "hwk/unicode.hpp"

namespace hwk {

namespace {

std::u32string default_alphabet() {
  std::u32string a;
  for (char32_t c = U'a'; c <= U'z'; ++c) a.push_back(c);
  for (char32_t c = U'0'; c <= U'9'; ++c) a.push_back(c);
  a += U"|-,;.!?:'\"/\\_@%^&*~`+=<>()[]{}#$";
  a.push_back(U'’');
  a.push_back(U'\n');
  return a;
}

}  // namespace

CharQuantizer::CharQuantizer(std::size_t max_len) : alphabet_(default_alphabet()), max_len_(max_len) {
  if (max_len == 0) throw Error(Errc::InvalidArgument, "quantizer length must be positive");
  for (std::size_t i = 0; i < alphabet_.size(); ++i) index_.emplace(alphabet_[i], i);
}

std::optional<std::size_t> CharQuantizer::row(char32_t c) const {
  if (c >= U'A' && c <= U'Z') c += U'a' - U'A';
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ad::Tensor CharQuantizer::quantize(std::string_view text) const {
  const std::u32string chars = unicode::decode_lossy(text);
  ad::Tensor out = ad::Tensor::zeros({alphabet_size(), max_len_});
  auto data = out.data();
  const std::size_t n = std::min(chars.size(), max_len_);
  for (std::size_t col = 0; col < n; ++col) {
    if (auto r = row(chars[chars.size() - 1 - col])) data[*r * max_len_ + col] = 1.0;
  }
  return out;
}

}  // namespace hwk

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hwk {

enum class Errc {
  MissingColumn,
  BadLabelValue,
  DuplicateId,
  EncodingError,
  MalformedRow,
  Unlabeled,
  ClassTooSmall,
  BadFractions,
  UnsupportedLanguage,
  EmptyCorpus,
  InvalidArgument,
  DegenerateText,
  NotFitted,
  SingleClass,
  DimensionMismatch,
  AllZero,
  ShapeMismatch,
  NoTape,
  LengthMismatch,
  EmptyInput,
  EmptyTokens,
  NoMatches,
  VocabularyMismatch,
  FormatError,
  ConfigError,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// front-ends can report it in machine-readable form.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace hwk

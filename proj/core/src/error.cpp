// SPDX-License-Identifier: Apache-2.0
#include "hwk/error.hpp"

namespace hwk {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::BadLabelValue: return "BadLabelValue";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::EncodingError: return "EncodingError";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::Unlabeled: return "Unlabeled";
    case Errc::ClassTooSmall: return "ClassTooSmall";
    case Errc::BadFractions: return "BadFractions";
    case Errc::UnsupportedLanguage: return "UnsupportedLanguage";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DegenerateText: return "DegenerateText";
    case Errc::NotFitted: return "NotFitted";
    case Errc::SingleClass: return "SingleClass";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::AllZero: return "AllZero";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NoTape: return "NoTape";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::EmptyTokens: return "EmptyTokens";
    case Errc::NoMatches: return "NoMatches";
    case Errc::VocabularyMismatch: return "VocabularyMismatch";
    case Errc::FormatError: return "FormatError";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace hwk

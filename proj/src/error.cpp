#include "rgqda/error.hpp"

namespace rgqda {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::TooFewObservations: return "TooFewObservations";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::ConstantColumn: return "ConstantColumn";
    case ErrorKind::ClassTooSmall: return "ClassTooSmall";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::UnsupportedDesign: return "UnsupportedDesign";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace rgqda

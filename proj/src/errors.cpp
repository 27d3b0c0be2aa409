#include "edgelbp/errors.hpp"

namespace edgelbp {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidImage: return "InvalidImage";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::EmptyShape: return "EmptyShape";
    case Errc::SchemeMismatch: return "SchemeMismatch";
    case Errc::DegenerateLabels: return "DegenerateLabels";
    case Errc::InvalidFeature: return "InvalidFeature";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::DegenerateClass: return "DegenerateClass";
    case Errc::DecodeError: return "DecodeError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace edgelbp

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace edgelbp {

enum class Errc {
  InvalidImage,
  InvalidArgument,
  OutOfDomain,
  EmptyShape,
  SchemeMismatch,
  DegenerateLabels,
  InvalidFeature,
  EmptyDataset,
  DegenerateClass,
  DecodeError,
  IoError,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library carries one of the `Errc` kinds so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace edgelbp

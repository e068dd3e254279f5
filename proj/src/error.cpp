#include "gsp/error.hpp"

#include <cmath>

namespace gsp {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::shape_mismatch: return "shape-mismatch";
    case ErrorKind::singular_series: return "singular-series";
    case ErrorKind::domain: return "domain-error";
    case ErrorKind::numeric_failure: return "numeric-failure";
    case ErrorKind::cutoff_overflow: return "cutoff-overflow";
  }
  return "unknown";
}

void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

double require_finite(double value, const char* context) {
  if (!std::isfinite(value)) {
    raise(ErrorKind::numeric_failure, std::string(context) + ": non-finite result");
  }
  return value;
}

}  // namespace gsp

#include "bhgs/error.hpp"

namespace bhgs {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::admissibility: return "admissibility";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::normalization: return "normalization";
    case ErrorKind::not_extremizer: return "not_extremizer";
    case ErrorKind::config: return "config";
    case ErrorKind::dependency: return "dependency";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace bhgs

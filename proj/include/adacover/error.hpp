#pragma once

#include <stdexcept>
#include <string>

namespace adacover {

enum class ErrorKind {
  invalid_argument,
  empty_polytope,
  unbounded_polytope,
  unsupported_dimension,
  degenerate_polytope,
  refinement_stalled,
  timeout,
  infeasible_confidence,
  infeasible_lipschitz,
  lp_failure,
  io,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so the CLI can map it
/// onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::invalid_argument, what);
}

}  // namespace adacover

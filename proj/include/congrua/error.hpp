#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace congrua {

// Every failure the library reports by exception carries one of these kinds.
// Values that are legitimate outcomes (no solution, inconclusive search) are
// returned as values instead.
enum class ErrorKind {
  InvalidArgument,
  NotFinite,
  NoIdempotent,
  RankNotOne,
  Degenerate,
  NoCICover,
  PreconditionFailed,
  EisensteinIdeal,
  BlockNotFound,
  Unsupported,
  PairingDegenerate,
  PrecisionLoss,
  PoleHit,
  NotPrimitive,
  SlowConvergence,
  UnsupportedLocalType,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace congrua

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sbpick {

enum class ErrorKind {
  InvalidInput,
  NonConvergence,
  NotPSD,
  RankDeficient,
  IllConditioned,
  NotAContraction,
  OutOfDomain,
  PoleAtBoundary,
  DuplicateNodes,
  SymmetrizationFailed,
  ModelInconsistent,
  NotUnitary,
  NotDiagonalizable,
  SingularResolvent,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries one of the kinds above so that
// callers (the CLI in particular) can map outcomes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sbpick

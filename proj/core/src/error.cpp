#include "sbpick/error.hpp"

namespace sbpick {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::NotAContraction: return "NotAContraction";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::PoleAtBoundary: return "PoleAtBoundary";
    case ErrorKind::DuplicateNodes: return "DuplicateNodes";
    case ErrorKind::SymmetrizationFailed: return "SymmetrizationFailed";
    case ErrorKind::ModelInconsistent: return "ModelInconsistent";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorKind::SingularResolvent: return "SingularResolvent";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace sbpick

#include "bfcone/error.hpp"

namespace bfcone {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::AmbiguousSpectrum: return "AmbiguousSpectrum";
    case ErrorKind::DegenerateMinimalPoly: return "DegenerateMinimalPoly";
    case ErrorKind::OnDomainBoundary: return "OnDomainBoundary";
    case ErrorKind::NotOrthogonal: return "NotOrthogonal";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::NearPole: return "NearPole";
    case ErrorKind::SpecViolation: return "SpecViolation";
    case ErrorKind::EmptyDomain: return "EmptyDomain";
    case ErrorKind::UnsupportedCase: return "UnsupportedCase";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::WrongCase: return "WrongCase";
    case ErrorKind::NearCollision: return "NearCollision";
    case ErrorKind::UnknownId: return "UnknownId";
    case ErrorKind::IncompatibleCase: return "IncompatibleCase";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace bfcone

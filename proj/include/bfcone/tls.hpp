#pragma once

// Radial Kähler potential of the equal-weight case-1 families: x(t) solves
// e^{a x} mu'(x)^{-1/2} = t with a = (m+2) kbar, and then
// x'' = l1 t x'^3 + l2 x'^2 with l1 = a^2 + d/2, l2 = -2a.

#include "bfcone/families.hpp"

namespace bfcone {

struct TlsResidual {
  double t = 0.0;       // t = phi(x0)
  double x = 0.0;       // Newton solution
  double newton = 0.0;  // |phi(x) - t| / max(1, t)
  double ode = 0.0;     // relative ODE residual at x
  int iterations = 0;
};

struct TlsCoefficients {
  double a = 0.0, l1 = 0.0, l2 = 0.0;
};

/// WrongCase unless case 1 with equal spacelike eigenvalues of B.
TlsCoefficients tls_coefficients(const FamilySpec& spec);

/// Solves for x at t = phi(x0) from a perturbed start and evaluates the ODE there.
TlsResidual tls_residual(const FamilySpec& spec, double x0);

}  // namespace bfcone

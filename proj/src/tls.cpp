#include "bfcone/tls.hpp"

#include <cmath>

#include "bfcone/error.hpp"

namespace bfcone {

TlsCoefficients tls_coefficients(const FamilySpec& spec) {
  if (spec.family_case != 1) throw Error(ErrorKind::WrongCase, "the radial potential ODE needs case 1");
  const auto k = case1_kj(spec);
  for (double v : k)
    if (std::abs(v - k.front()) > 1e-12) throw Error(ErrorKind::WrongCase, "needs equal spacelike eigenvalues");
  TlsCoefficients c;
  c.a = (spec.mdim + 2) * k.front();
  c.l1 = c.a * c.a + spec.d / 2.0;
  c.l2 = -2.0 * c.a;
  return c;
}

TlsResidual tls_residual(const FamilySpec& spec, double x0) {
  const TlsCoefficients c = tls_coefficients(spec);
  const MuSolution mu = MuSolution::make(spec.d, spec.constant, false);
  using D = Dual2<double>;
  auto phi = [&](double x) {
    const D m = mu.eval(D::variable(x));
    const D mp = 0.5 * m * m + spec.d;  // mu' from the Riccati equation
    if (!(mp.v > 0.0)) throw Error(ErrorKind::DomainError, "mu' must be positive");
    return exp(c.a * D::variable(x)) / sqrt(mp);
  };
  TlsResidual out;
  out.t = phi(x0).v;
  double x = x0 * 1.05;
  for (out.iterations = 0; out.iterations < 100; ++out.iterations) {
    const D p = phi(x);
    const double step = (p.v - out.t) / p.d;
    x -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  if (out.iterations >= 100) throw Error(ErrorKind::NoConvergence, "Newton did not converge");
  out.x = x;
  const D p = phi(x);
  out.newton = std::abs(p.v - out.t) / std::max(1.0, std::abs(out.t));
  // x' = 1/phi', x'' = -phi''/phi'^3
  const double xd = 1.0 / p.d;
  const double xdd = -p.dd * xd * xd * xd;
  const double t1 = c.l1 * out.t * xd * xd * xd;
  const double t2 = c.l2 * xd * xd;
  out.ode = std::abs(xdd - t1 - t2) / std::max({std::abs(xdd), std::abs(t1), std::abs(t2), 1.0});
  return out;
}

}  // namespace bfcone

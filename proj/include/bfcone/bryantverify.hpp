#pragma once

// The polynomial description of the eigenvalues of Theta for the nilpotent
// families (cases 3 and 4), checked against the curvature pipeline.
//
// Notation: Bhat = B_r / r^2 = B + delta(r) A, qhat its minimal polynomial,
// qhat1 = qhat / (t - gamma)^2, c = gamma - lambda, s = c / (m + 3),
// phat(t) = (a~(t) w, w) / (Bhat w, w) with a~ the reduced adjoint of Bhat,
// P1(t) = (t - (m+2) c/(m+3)) phat(t + s) + (f / r^2) qhat1(t + s).

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bfcone/chart.hpp"
#include "bfcone/families.hpp"
#include "bfcone/polyalg.hpp"

namespace bfcone {

/// Polynomial data at one point of a case 3/4 family.
struct HatData {
  double r = 0.0, f = 0.0;
  double c = 0.0, s = 0.0;
  Eigen::MatrixXcd Bhat;
  Eigen::VectorXcd w;
  RealPoly qhat, qhat1, Qhat, phat, p1;
  /// (B_r^2 w, w) / (r^2 (B_r w, w))
  double bsq_ratio = 0.0;
};

/// Throws WrongCase outside cases 3/4, OutsideDomain off the domain.
HatData hat_data(const OperatorFamily& fam, const ConeChartPoint& z);
RealPoly p1_poly(const OperatorFamily& fam, const ConeChartPoint& z);

/// Per-point eigenvalue bookkeeping.
struct SpectralTrack {
  std::vector<double> eta;        // roots of phat
  std::vector<double> xi;         // r^2 eta
  std::vector<double> numeric;    // complex eigenvalues of Theta, ascending
  std::vector<double> predicted;  // roots of P1 and of Qhat/qhat (shifted), ascending
  std::vector<double> p1_roots;
  std::vector<bool> p1_constant;  // per P1 root, from the predicate
};

SpectralTrack spectral_track(const OperatorFamily& fam, const ConeChartPoint& z);

/// Max distance between the sorted numeric and predicted spectra, relative
/// to max(1, |spectrum|).  Case 1: only the constant eigenvalues (roots of
/// p_c / p_m) are matched.  Case 2: IncompatibleCase.
double theta_spectrum_residual(const OperatorFamily& fam, const ConeChartPoint& z);

/// d/dr phat(t) against (2f/r)(phat(t) - qhat1(t)), relative.
double check_dr(const OperatorFamily& fam, const ConeChartPoint& z, double t);

/// Root velocities of phat along the ray (Richardson-extrapolated finite
/// differences) against (2f/r) qhat1(eta)/phat'(eta); max relative residual.
double check_dot(const OperatorFamily& fam, const ConeChartPoint& z);

struct HoriResult {
  double res1 = 0.0, res2 = 0.0, res3 = 0.0;
  double lt = 0.0;  // L_t field against the H-gradient of phat(t)
  double lhs1 = 0.0, rhs1 = 0.0;
};

/// The three identities for horizontal gradients of phat(t) and f/r^2.
HoriResult check_hori(const OperatorFamily& fam, const ConeChartPoint& z, double t);

/// Non-constant roots of P1 at z, ascending.
std::vector<double> nonconstant_roots(const OperatorFamily& fam, const ConeChartPoint& z);

/// |grad xi_j|^2 against -4 p_m(xi_j) / P_n'(xi_j), relative.  j indexes
/// nonconstant_roots.  NearCollision when a root is within 1e-4 of another.
double check_grad(const OperatorFamily& fam, const ConeChartPoint& z, int j);

struct ConstantRoots {
  std::vector<double> roots;
  double qhat1_at_c = 0.0;
  bool exceptional = false;  // lambda != 0, alpha = 0 and every mu_j = 0
};

/// Predicted constant roots of P1.
ConstantRoots constante_predicate(const FamilySpec& spec);

/// Roots of P1 at z that do not move (within tol) when r changes to r2.
std::vector<double> stationary_roots(const OperatorFamily& fam, const ConeChartPoint& z, double r2,
                                     double tol = 1e-7);

/// Lagrange form of qhat1(t+s) - phat(t+s); coefficientwise, relative.
double check_e(const OperatorFamily& fam, const ConeChartPoint& z);

struct ExpresiiResult {
  double eigen = 0.0;  // Theta(L_j) equation
  double v = 0.0;      // Theta(V) equation
};

/// Action of Theta on L_j and V against the closed forms, relative g-norms.
ExpresiiResult check_expresii(const OperatorFamily& fam, const ConeChartPoint& z);

/// (a~(t)w, a~(t)w)/(Aw,w) against q'(t)p(t) - q(t)p'(t), relative.
double check_patrat(const Eigen::MatrixXcd& a, const RealPoly& q, const Eigen::VectorXcd& w, double t);
/// 4 |a~(t)w - p(t) A w|^2_H against 4(q'p - qp' - 2tp^2 + p^2 (A^2w,w)/(Aw,w)), relative.
double check_aditional(const Eigen::MatrixXcd& a, const RealPoly& q, const Eigen::VectorXcd& w, double t);

/// Bhat and an annihilating polynomial at z: qhat for cases 3/4, the numeric
/// minimal polynomial otherwise.
std::pair<Eigen::MatrixXcd, RealPoly> hat_operator(const OperatorFamily& fam, const ConeChartPoint& z);

}  // namespace bfcone

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "bfcone/chart.hpp"
#include "bfcone/jets.hpp"
#include "bfcone/polyalg.hpp"

namespace bfcone {

// ---------------------------------------------------------------- mu ODE

/// Solution branches of mu' = mu^2/2 + d.
enum class MuBranch {
  Tan,       // d > 0: beta tan(beta (t + c) / 2)
  Exp,       // d < 0, mu' > 0: beta (1 + e^{beta t + c}) / (1 - e^{beta t + c})
  Tanh,      // d < 0, mu' < 0: beta (1 - e^{beta t + c}) / (1 + e^{beta t + c})
  Rational,  // d = 0: -2 / (t + c)
};

std::string to_string(MuBranch b);

struct MuSolution {
  double d = 0.0;
  double c = 0.0;  // integration constant (phase, p or q)
  MuBranch branch = MuBranch::Rational;
  double beta = 0.0;

  /// Branch for sign(d); decreasing selects the mu' < 0 solution.
  static MuSolution make(double d, double c, bool decreasing = false);

  /// Poles of the branch inside [lo, hi].
  std::vector<double> poles(double lo, double hi) const;
  double distance_to_pole(double t) const;

  template <class S>
  S eval(const S& t) const {
    using std::exp;
    using std::tan;
    switch (branch) {
      case MuBranch::Tan: return beta * tan(0.5 * beta * (t + c));
      case MuBranch::Exp: {
        S e = exp(beta * t + c);
        return beta * (1.0 + e) / (1.0 - e);
      }
      case MuBranch::Tanh: {
        S e = exp(beta * t + c);
        return beta * (1.0 - e) / (1.0 + e);
      }
      case MuBranch::Rational: return -2.0 / (t + c);
    }
    return S(0.0);
  }
};

/// (mu, mu') at t; NearPole within 1e-3 of a singularity.
std::pair<double, double> mu_solution(double d, double c, double t, bool decreasing = false);

// ---------------------------------------------------------------- specs

struct DiagonalB {
  std::vector<double> eigenvalues;  // e_0 first
};

struct BetaBlock {
  double value = 0.0;
  int mult = 1;
};

/// gamma Id + N on W_0 = span(e_0..e_n), beta_j on the remaining blocks.
struct ParabolicB {
  std::optional<double> gamma;
  double alpha = 0.0;
  std::vector<std::complex<double>> mu;  // mu_2 .. mu_n
  std::vector<BetaBlock> betas;
};

struct MatrixB {
  Eigen::MatrixXcd m;
};

using BDesc = std::variant<DiagonalB, ParabolicB, MatrixB>;

/// Extra term eps r^4 P added to B_r (breaks the family structure on purpose).
struct Perturbation {
  Eigen::MatrixXcd matrix;
  double scale = 0.0;
};

struct FamilySpec {
  std::string name;
  int mdim = 2;
  int family_case = 1;
  double d = 0.0;
  double lambda = 0.0;
  double constant = 0.0;
  BDesc b = DiagonalB{};
  std::optional<std::pair<double, double>> interval;
  int samples = 20;
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerances;
  std::optional<Perturbation> perturbation;
  bool decreasing_mu() const { return family_case == 2; }
};

// ---------------------------------------------------------------- families

/// Coefficients of B_r = b2 B + psi A + chi P and A_r = psiA A + chiA P,
/// with r-derivatives.
template <class S>
struct RadialCoeffs {
  S b2, psi, chi;        // B_r
  S db2, dpsi, dchi;     // dB_r/dr
  S psiA, chiA;          // A_r
  S dpsiA, dchiA;        // dA_r/dr
};

struct CaseData {
  // cases 3/4
  double gamma = 0.0;
  double alpha = 0.0;
  int n0 = 0;  // n + 1 = dim W_0
  std::vector<std::complex<double>> mu;
  std::vector<BetaBlock> betas;
  bool any_mu() const;
  double c(double lambda) const { return gamma - lambda; }
  RealPoly qhat() const;   // minimal polynomial of B + delta A
  RealPoly Qhat(int dim) const;  // characteristic polynomial
  RealPoly qhat1() const;  // qhat / (t - gamma)^2
};

class OperatorFamily {
 public:
  /// strict: throw SpecViolation on any failed invariant; otherwise record it.
  OperatorFamily(const FamilySpec& spec, bool strict);

  const FamilySpec& spec() const { return spec_; }
  int mdim() const { return spec_.mdim; }
  int family_case() const { return spec_.family_case; }
  /// Real chart dimension 2(mdim+1).
  int chart_dim() const { return 2 * (spec_.mdim + 1); }
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }

  const Eigen::MatrixXcd& A() const { return A_; }
  const Eigen::MatrixXcd& B() const { return B_; }
  const Eigen::MatrixXcd& P() const { return P_; }
  bool perturbed() const { return perturbed_; }
  const std::optional<MuSolution>& mu() const { return mu_; }
  const std::optional<CaseData>& case_data() const { return case_data_; }
  const std::vector<std::string>& violations() const { return violations_; }
  double commutator_norm() const;

  /// psi with B_r = r^2 B + psi(r) A.
  template <class S>
  S psi(const S& r) const {
    using std::exp;
    const S t = r * r;
    switch (spec_.family_case) {
      case 1: return -1.0 * t * mu_->eval(t);
      case 2: return t * mu_->eval(t);
      case 3: return -1.0 * t * t;
      default: return t * exp(spec_.lambda * t) * (-1.0 / spec_.lambda);
    }
  }

  template <class S>
  S chi(const S& r) const {
    if (!perturbed_) return S(0.0);
    return spec_.perturbation->scale * (r * r) * (r * r);
  }

  template <class S>
  RadialCoeffs<S> radial(const S& r) const {
    using D = Dual2<S>;
    const D rr = D::variable(r);
    const D p = psi(rr);
    const D x = chi(rr);
    RadialCoeffs<S> k;
    k.b2 = r * r;
    k.db2 = 2.0 * r;
    k.psi = p.v;
    k.dpsi = p.d;
    k.chi = x.v;
    k.dchi = x.d;
    // A_r = B_r - (r/2) dB_r/dr
    k.psiA = p.v - 0.5 * r * p.d;
    k.chiA = x.v - 0.5 * r * x.d;
    k.dpsiA = 0.5 * p.d - 0.5 * r * p.dd;
    k.dchiA = 0.5 * x.d - 0.5 * r * x.dd;
    return k;
  }

  Eigen::MatrixXcd B_r(double r) const;
  Eigen::MatrixXcd Bdot_r(double r) const;
  Eigen::MatrixXcd A_r(double r) const;
  Eigen::MatrixXcd Adot_r(double r) const;
  /// Closed forms: mu'(r^2) r^4 A, r^4 A, r^4 e^{lambda r^2} A.
  Eigen::MatrixXcd A_r_closed(double r) const;
  /// B_r / r^2.
  Eigen::MatrixXcd Bhat_r(double r) const { return B_r(r) / (r * r); }
  /// delta(r) with Bhat_r = B + delta A (cases 3/4).
  double delta(double r) const;

 private:
  void validate(bool strict);

  FamilySpec spec_;
  Eigen::MatrixXcd A_, B_, P_;
  bool perturbed_ = false;
  std::optional<MuSolution> mu_;
  std::optional<CaseData> case_data_;
  double r_min_ = 0.5, r_max_ = 2.0;
  std::vector<std::string> violations_;
};

OperatorFamily build_family(const FamilySpec& spec, bool strict = true);

/// Normal form of A for the given case.
Eigen::MatrixXcd case_A(int family_case, int mdim);

/// Rejection sampling of domain points; deterministic in seed.
std::vector<ConeChartPoint> sample_domain(const OperatorFamily& fam, int n, std::uint64_t seed,
                                          double margin = 1e-3);

struct PredictedPolys {
  RealPoly p_m;
  RealPoly p_c;
  std::string note;
};

PredictedPolys predicted_polys(const FamilySpec& spec);

enum class ExampleName { Bryant, WProj, Einstein, Tachibana, Flat };

/// Spec for a named example; params as documented per name.
FamilySpec example_spec(ExampleName name, const std::vector<double>& params, int mdim = 2,
                        bool negative_d = false);
ExampleName parse_example_name(const std::string& s);

enum class PotentialSubtype { Hyperbolic, Elliptic, Parabolic };
std::string to_string(PotentialSubtype s);
PotentialSubtype subtype_of(const FamilySpec& spec);

/// f_j(t) of the isomorphism F (j = 1..mdim+1).
template <class S>
S potential_fj(PotentialSubtype sub, const FamilySpec& spec, int j, const S& t);

/// F(z) = (f_1(r^2) z_1, ...).
Eigen::VectorXcd potential_map(const FamilySpec& spec, const Eigen::VectorXcd& z);

struct PotentialSolve {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Solves sum |w_j|^2 / f_j(x)^2 = x by safeguarded Newton.
PotentialSolve solve_implicit_potential(PotentialSubtype sub, const FamilySpec& spec,
                                        const Eigen::VectorXcd& wpoint);

/// Spacelike B eigenvalues k_1..k_{m+1} of a case-1 diagonal spec.
std::vector<double> case1_kj(const FamilySpec& spec);

}  // namespace bfcone

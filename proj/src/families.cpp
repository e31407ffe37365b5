#include "bfcone/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "bfcone/conegeom.hpp"
#include "bfcone/error.hpp"
#include "bfcone/indefherm.hpp"

namespace bfcone {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPoleGuard = 1e-3;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(MuBranch b) {
  switch (b) {
    case MuBranch::Tan: return "tan";
    case MuBranch::Exp: return "exp";
    case MuBranch::Tanh: return "tanh";
    case MuBranch::Rational: return "rational";
  }
  return "?";
}

MuSolution MuSolution::make(double d, double c, bool decreasing) {
  MuSolution s;
  s.d = d;
  s.c = c;
  if (decreasing) {
    if (!(d < 0.0)) throw Error(ErrorKind::SpecViolation, "mu' < 0 requires d < 0");
    s.branch = MuBranch::Tanh;
    s.beta = std::sqrt(-2.0 * d);
  } else if (d > 0.0) {
    s.branch = MuBranch::Tan;
    s.beta = std::sqrt(2.0 * d);
  } else if (d < 0.0) {
    s.branch = MuBranch::Exp;
    s.beta = std::sqrt(-2.0 * d);
  } else {
    s.branch = MuBranch::Rational;
  }
  return s;
}

std::vector<double> MuSolution::poles(double lo, double hi) const {
  std::vector<double> out;
  switch (branch) {
    case MuBranch::Tan: {
      // beta (t + c) / 2 = pi/2 + k pi
      const double period = 2.0 * kPi / beta;
      double k0 = std::floor((beta * (lo + c) / 2.0 - kPi / 2.0) / kPi) - 1.0;
      for (double k = k0;; k += 1.0) {
        double t = (kPi + 2.0 * k * kPi) / beta - c;
        if (t > hi) break;
        if (t >= lo) out.push_back(t);
        if (period <= 0.0) break;
      }
      break;
    }
    case MuBranch::Exp: {
      double t = -c / beta;
      if (t >= lo && t <= hi) out.push_back(t);
      break;
    }
    case MuBranch::Rational: {
      double t = -c;
      if (t >= lo && t <= hi) out.push_back(t);
      break;
    }
    case MuBranch::Tanh: break;
  }
  return out;
}

double MuSolution::distance_to_pole(double t) const {
  switch (branch) {
    case MuBranch::Tan: {
      // distance in t to nearest (pi + 2 k pi)/beta - c
      const double period = 2.0 * kPi / beta;
      double phase = t + c - kPi / beta;
      double rem = phase - period * std::round(phase / period);
      return std::abs(rem);
    }
    case MuBranch::Exp: return std::abs(t + c / beta);
    case MuBranch::Rational: return std::abs(t + c);
    case MuBranch::Tanh: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

std::pair<double, double> mu_solution(double d, double c, double t, bool decreasing) {
  MuSolution s = MuSolution::make(d, c, decreasing);
  if (s.distance_to_pole(t) < kPoleGuard)
    throw Error(ErrorKind::NearPole, "t = " + fmt(t) + " is within 1e-3 of a pole of the " + to_string(s.branch) + " branch");
  Dual2<double> m = s.eval(Dual2<double>::variable(t));
  return {m.v, m.d};
}

// ---------------------------------------------------------------- CaseData

bool CaseData::any_mu() const {
  for (auto m : mu)
    if (std::abs(m) > 0.0) return true;
  return false;
}

RealPoly CaseData::qhat() const {
  RealPoly q = RealPoly::constant(1.0);
  const int k = any_mu() ? 3 : 2;
  for (int i = 0; i < k; ++i) q = q * RealPoly::linear(gamma);
  for (const auto& b : betas) q = q * RealPoly::linear(b.value);
  return q;
}

RealPoly CaseData::Qhat(int) const {
  RealPoly q = RealPoly::constant(1.0);
  for (int i = 0; i < n0; ++i) q = q * RealPoly::linear(gamma);
  for (const auto& b : betas)
    for (int i = 0; i < b.mult; ++i) q = q * RealPoly::linear(b.value);
  return q;
}

RealPoly CaseData::qhat1() const {
  RealPoly q = RealPoly::constant(1.0);
  if (any_mu()) q = q * RealPoly::linear(gamma);
  for (const auto& b : betas) q = q * RealPoly::linear(b.value);
  return q;
}

// ---------------------------------------------------------------- families

Eigen::MatrixXcd case_A(int family_case, int mdim) {
  const int n = mdim + 2;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  const double s = 1.0 / (2.0 * (mdim + 2));
  switch (family_case) {
    case 1:
      a(0, 0) = -(mdim + 1) * s;
      for (int j = 1; j < n; ++j) a(j, j) = s;
      break;
    case 2:
      for (int j = 0; j < n - 1; ++j) a(j, j) = -s;
      a(n - 1, n - 1) = (mdim + 1) * s;
      break;
    case 3:
    case 4:
      a(0, 0) = -1.0;
      a(0, 1) = 1.0;
      a(1, 0) = -1.0;
      a(1, 1) = 1.0;
      break;
    default: throw Error(ErrorKind::SpecViolation, "case must be 1, 2, 3 or 4");
  }
  return a;
}

OperatorFamily::OperatorFamily(const FamilySpec& spec, bool strict) : spec_(spec) {
  const int m = spec_.mdim;
  if (m < 2 || 2 * (m + 1) > kMaxVars)
    throw Error(ErrorKind::SpecViolation, "mdim must lie in [2, " + std::to_string(kMaxVars / 2 - 1) + "]");
  const int n = m + 2;
  A_ = case_A(spec_.family_case, m);
  P_ = Eigen::MatrixXcd::Zero(n, n);

  if (const auto* dg = std::get_if<DiagonalB>(&spec_.b)) {
    if (static_cast<int>(dg->eigenvalues.size()) != n)
      throw Error(ErrorKind::SpecViolation, "diagonal B needs mdim+2 eigenvalues");
    B_ = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) B_(j, j) = dg->eigenvalues[j];
  } else if (const auto* mb = std::get_if<MatrixB>(&spec_.b)) {
    if (mb->m.rows() != n || mb->m.cols() != n)
      throw Error(ErrorKind::SpecViolation, "matrix B must be (mdim+2) square");
    B_ = mb->m;
  } else {
    const auto& pb = std::get<ParabolicB>(spec_.b);
    if (spec_.family_case != 3 && spec_.family_case != 4)
      throw Error(ErrorKind::SpecViolation, "parabolic B description applies to cases 3 and 4");
    CaseData cd;
    int rest = 0;
    for (const auto& b : pb.betas) {
      if (b.mult < 1) throw Error(ErrorKind::SpecViolation, "beta multiplicity must be positive");
      rest += b.mult;
    }
    cd.n0 = n - rest;
    if (cd.n0 < 2) throw Error(ErrorKind::SpecViolation, "W_0 must have dimension >= 2");
    if (static_cast<int>(pb.mu.size()) > cd.n0 - 2)
      throw Error(ErrorKind::SpecViolation, "too many mu_j for dim W_0");
    double gsum = 0.0;
    for (const auto& b : pb.betas) gsum += b.mult * b.value;
    cd.gamma = pb.gamma.value_or(-gsum / cd.n0);
    cd.alpha = pb.alpha;
    cd.mu = pb.mu;
    cd.betas = pb.betas;
    B_ = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < cd.n0; ++j) B_(j, j) = cd.gamma;
    B_(0, 0) += -cd.alpha;
    B_(0, 1) += cd.alpha;
    B_(1, 0) += -cd.alpha;
    B_(1, 1) += cd.alpha;
    for (std::size_t k = 0; k < cd.mu.size(); ++k) {
      const int j = 2 + static_cast<int>(k);
      B_(0, j) = cd.mu[k];
      B_(1, j) = cd.mu[k];
      B_(j, 0) = -std::conj(cd.mu[k]);
      B_(j, 1) = std::conj(cd.mu[k]);
    }
    int pos = cd.n0;
    for (const auto& b : cd.betas)
      for (int i = 0; i < b.mult; ++i, ++pos) B_(pos, pos) = b.value;
    case_data_ = cd;
  }

  if (spec_.perturbation) {
    const auto& p = *spec_.perturbation;
    if (p.matrix.rows() != n || p.matrix.cols() != n)
      throw Error(ErrorKind::SpecViolation, "perturbation matrix must be (mdim+2) square");
    P_ = p.matrix;
    perturbed_ = p.scale != 0.0;
  }

  if (spec_.family_case == 1 || spec_.family_case == 2)
    mu_ = MuSolution::make(spec_.d, spec_.constant, spec_.decreasing_mu());
  if (spec_.family_case == 4 && spec_.lambda == 0.0)
    throw Error(ErrorKind::SpecViolation, "case 4 needs lambda != 0");

  if (spec_.interval) {
    r_min_ = spec_.interval->first;
    r_max_ = spec_.interval->second;
    if (!(r_min_ > 0.0 && r_max_ > r_min_)) throw Error(ErrorKind::SpecViolation, "interval J must satisfy 0 < r_min < r_max");
  } else if (mu_) {
    // Largest pole-free stretch of t = r^2 in [0.25, 4], margin 0.1.
    const double lo = 0.25, hi = 4.0, gap = 0.1;
    std::vector<double> cuts{lo};
    for (double p : mu_->poles(lo - gap, hi + gap)) {
      cuts.push_back(p - gap);
      cuts.push_back(p + gap);
    }
    cuts.push_back(hi);
    double best = -1.0, a = lo, b = hi;
    for (std::size_t i = 0; i + 1 < cuts.size(); i += 2) {
      double s = std::max(cuts[i], lo), e = std::min(cuts[i + 1], hi);
      if (e - s > best) {
        best = e - s;
        a = s;
        b = e;
      }
    }
    if (best <= 0.0) throw Error(ErrorKind::EmptyDomain, "no pole-free interval in the default range");
    r_min_ = std::sqrt(a);
    r_max_ = std::sqrt(b);
  }
  validate(strict);
}

double OperatorFamily::commutator_norm() const { return (A_ * B_ - B_ * A_).norm(); }

void OperatorFamily::validate(bool strict) {
  HermForm form{spec_.mdim};
  const double scale = std::max(1.0, B_.norm());
  HermOp bop(B_, form);
  if (bop.hermitian_residual() > 1e-12 * scale)
    violations_.push_back("B is not eta-hermitian (residual " + fmt(bop.hermitian_residual()) + ")");
  if (std::abs(B_.trace()) > 1e-12 * scale)
    violations_.push_back("B is not trace-free (trace " + fmt(std::abs(B_.trace())) + ")");
  const double comm = commutator_norm();
  if (comm > 1e-12 * scale) violations_.push_back("[A,B] != 0 (norm " + fmt(comm) + ")");
  if (case_data_) {
    std::set<double> seen;
    for (const auto& b : case_data_->betas) {
      if (std::abs(b.value - case_data_->gamma) < 1e-12)
        violations_.push_back("gamma coincides with beta " + fmt(b.value));
      if (!seen.insert(b.value).second) violations_.push_back("repeated beta " + fmt(b.value));
    }
  }
  if (perturbed_) {
    HermOp pop(P_, form);
    if (pop.hermitian_residual() > 1e-12 * std::max(1.0, P_.norm()))
      violations_.push_back("perturbation is not eta-hermitian");
    violations_.push_back("B_r carries a perturbation term outside the classified families");
  }
  if (strict && !violations_.empty()) {
    std::string msg;
    for (const auto& v : violations_) msg += (msg.empty() ? "" : "; ") + v;
    throw Error(ErrorKind::SpecViolation, msg);
  }
}

Eigen::MatrixXcd OperatorFamily::B_r(double r) const {
  auto k = radial(r);
  return k.b2 * B_ + k.psi * A_ + k.chi * P_;
}

Eigen::MatrixXcd OperatorFamily::Bdot_r(double r) const {
  auto k = radial(r);
  return k.db2 * B_ + k.dpsi * A_ + k.dchi * P_;
}

Eigen::MatrixXcd OperatorFamily::A_r(double r) const {
  auto k = radial(r);
  return k.psiA * A_ + k.chiA * P_;
}

Eigen::MatrixXcd OperatorFamily::Adot_r(double r) const {
  auto k = radial(r);
  return k.dpsiA * A_ + k.dchiA * P_;
}

Eigen::MatrixXcd OperatorFamily::A_r_closed(double r) const {
  const double t = r * r;
  double coef = 0.0;
  switch (spec_.family_case) {
    case 1: coef = mu_solution(spec_.d, spec_.constant, t, false).second * t * t; break;
    case 2: coef = -mu_solution(spec_.d, spec_.constant, t, true).second * t * t; break;
    case 3: coef = t * t; break;
    default: coef = t * t * std::exp(spec_.lambda * t); break;
  }
  Eigen::MatrixXcd out = coef * A_;
  if (perturbed_) out += (-spec_.perturbation->scale * t * t) * P_;
  return out;
}

double OperatorFamily::delta(double r) const {
  if (spec_.family_case == 3) return -r * r;
  if (spec_.family_case == 4) return -std::exp(spec_.lambda * r * r) / spec_.lambda;
  throw Error(ErrorKind::WrongCase, "delta(r) is defined for cases 3 and 4");
}

OperatorFamily build_family(const FamilySpec& spec, bool strict) { return OperatorFamily(spec, strict); }

std::vector<ConeChartPoint> sample_domain(const OperatorFamily& fam, int n, std::uint64_t seed, double margin) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "sample count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ur(fam.r_min(), fam.r_max());
  const int k = fam.mdim() + 1;
  std::vector<ConeChartPoint> out;
  long budget = 10000L * n;
  while (static_cast<int>(out.size()) < n) {
    Eigen::VectorXcd u = random_unit(k, rng);
    double r = ur(rng);
    ConeChartPoint p(r * u);
    if (domain_contains(fam, p, margin)) {
      out.push_back(p);
    } else if (--budget <= 0) {
      throw Error(ErrorKind::EmptyDomain, "rejection budget exhausted");
    }
  }
  return out;
}

// ---------------------------------------------------------------- polynomials

std::vector<double> case1_kj(const FamilySpec& spec) {
  const auto* dg = std::get_if<DiagonalB>(&spec.b);
  if (spec.family_case != 1 || dg == nullptr)
    throw Error(ErrorKind::UnsupportedCase, "case-1 model data needs a diagonal B");
  return {dg->eigenvalues.begin() + 1, dg->eigenvalues.end()};
}

PredictedPolys predicted_polys(const FamilySpec& spec) {
  const int m = spec.mdim;
  PredictedPolys out;
  if (spec.family_case == 2)
    throw Error(ErrorKind::UnsupportedCase, "no model polynomials are available for case 2");
  if (spec.family_case == 1) {
    auto kj = case1_kj(spec);
    double k = 0.0;
    for (double v : kj) k += v;
    const double K = (m + 2) * k / (m + 3);
    // ((t + K)^2 + d/2): the hyperbolic model is written in the cone's own
    // metric normalization, where its roots are -K +- i beta/2.
    RealPoly quad = RealPoly({K * K + spec.d / 2.0, 2.0 * K, 1.0});
    std::vector<double> quad_real;
    if (spec.d <= 0.0) {
      double s = std::sqrt(-spec.d / 2.0);
      quad_real = {-K - s, -K + s};
    }
    out.p_c = quad;
    out.p_m = quad;
    std::vector<double> used;
    for (double v : kj) {
      double root = v + k / (m + 3);
      out.p_c = out.p_c * RealPoly::linear(root);
      bool dup = false;
      for (double q : quad_real)
        if (std::abs(q - root) < 1e-9) dup = true;
      for (double q : used)
        if (std::abs(q - root) < 1e-9) dup = true;
      if (!dup) {
        out.p_m = out.p_m * RealPoly::linear(root);
        used.push_back(root);
      }
    }
    out.note = spec.d > 0.0 ? "hyperbolic" : (spec.d < 0.0 ? "elliptic" : "parabolic1");
    return out;
  }
  OperatorFamily fam(spec, false);
  const CaseData& cd = *fam.case_data();
  const double lam = spec.family_case == 3 ? 0.0 : spec.lambda;
  const double c = cd.c(lam);
  const double s = c / (m + 3);
  const RealPoly L = RealPoly::linear((m + 2) * c / (m + 3));
  out.p_c = L * cd.Qhat(m + 2).shifted(s);
  RealPoly base = RealPoly::constant(1.0);
  bool c_beta = false;
  for (const auto& b : cd.betas) {
    base = base * RealPoly::linear(b.value - s);
    if (std::abs(c - b.value) < 1e-9) c_beta = true;
  }
  const bool c_gamma = std::abs(c - cd.gamma) < 1e-9;
  const RealPoly g1 = RealPoly::linear(cd.gamma - s);
  auto gpow = [&](int k) {
    RealPoly p = RealPoly::constant(1.0);
    for (int i = 0; i < k; ++i) p = p * g1;
    return p;
  };
  if (cd.any_mu()) {
    if (!(c_beta || c_gamma)) {
      out.p_m = L * gpow(3) * base;
      out.note = "p_m subcase 1";
    } else {
      out.p_m = gpow(3) * base;
      out.note = "p_m subcase 2";
    }
  } else if (!c_beta) {
    if (lam != 0.0 && cd.alpha == 0.0) {
      out.p_m = L * gpow(1) * base;
      out.note = "p_m subcase 3 (alpha = 0, lambda != 0)";
    } else {
      out.p_m = L * gpow(2) * base;
      out.note = "p_m subcase 3";
    }
  } else {
    if (cd.alpha == 0.0) {
      out.p_m = gpow(1) * base;
      out.note = "p_m subcase 4 (alpha = 0)";
    } else {
      out.p_m = gpow(2) * base;
      out.note = "p_m subcase 4";
    }
  }
  return out;
}

// ---------------------------------------------------------------- examples

ExampleName parse_example_name(const std::string& s) {
  if (s == "bryant") return ExampleName::Bryant;
  if (s == "wproj") return ExampleName::WProj;
  if (s == "einstein") return ExampleName::Einstein;
  if (s == "tachibana") return ExampleName::Tachibana;
  if (s == "flat") return ExampleName::Flat;
  throw Error(ErrorKind::BadParams, "unknown example '" + s + "'");
}

FamilySpec example_spec(ExampleName name, const std::vector<double>& params, int mdim, bool negative_d) {
  FamilySpec s;
  s.family_case = 1;
  switch (name) {
    case ExampleName::Flat: {
      s.name = "flat";
      s.mdim = mdim;
      s.b = DiagonalB{std::vector<double>(mdim + 2, 0.0)};
      break;
    }
    case ExampleName::Bryant: {
      if (params.size() < 3) throw Error(ErrorKind::BadParams, "bryant needs k_1..k_{m+1} with m >= 2");
      s.name = "bryant";
      s.mdim = static_cast<int>(params.size()) - 1;
      double sum = 0.0;
      for (double k : params) {
        if (k < 0.0) throw Error(ErrorKind::BadParams, "bryant weights must be non-negative");
        sum += k;
      }
      std::vector<double> ev{-sum / (s.mdim + 2)};
      for (double k : params) ev.push_back(k - sum / (s.mdim + 2));
      s.b = DiagonalB{ev};
      break;
    }
    case ExampleName::WProj: {
      if (params.size() < 4) throw Error(ErrorKind::BadParams, "wproj needs a_1..a_{m+2} with m >= 2");
      s.name = "wproj";
      s.mdim = static_cast<int>(params.size()) - 2;
      const int m = s.mdim;
      double sum = 0.0;
      for (double a : params) {
        if (!(a > 0.0)) throw Error(ErrorKind::BadParams, "weights must be positive");
      }
      for (int j = 0; j < m + 1; ++j) sum += params[j];
      std::vector<double> ev{-sum / (m + 2)};
      for (int j = 0; j < m + 1; ++j) ev.push_back(params[j] - sum / (m + 2));
      s.b = DiagonalB{ev};
      const double am = params[m + 1];
      s.d = (negative_d ? -2.0 : 2.0) * am * am / ((m + 3.0) * (m + 3.0));
      break;
    }
    case ExampleName::Einstein: {
      if (params.size() < 2) throw Error(ErrorKind::BadParams, "einstein needs e and case");
      const double e = params[0];
      const int c = static_cast<int>(params[1]);
      s.name = "einstein";
      s.mdim = mdim;
      s.family_case = c;
      if (c == 1 || c == 2) {
        if (e == 0.0) throw Error(ErrorKind::BadParams, "einstein cases 1/2 need e != 0");
        Eigen::MatrixXcd a = case_A(c, mdim);
        std::vector<double> ev(mdim + 2);
        for (int j = 0; j < mdim + 2; ++j) ev[j] = e * a(j, j).real();
        s.b = DiagonalB{ev};
        s.d = -0.5 * e * e;
        // Case 1 with e < 0 needs mu > beta, i.e. t below the exp pole.
        if (c == 1 && e < 0.0) s.constant = -5.0 * std::abs(e);
      } else if (c == 4) {
        if (e != 0.0) throw Error(ErrorKind::BadParams, "einstein case 4 needs e = 0");
        s.lambda = params.size() > 2 ? params[2] : -1.0;
        if (!(s.lambda < 0.0)) throw Error(ErrorKind::BadParams, "einstein case 4 needs lambda < 0");
        s.b = ParabolicB{0.0, 0.0, {}, {}};
      } else {
        throw Error(ErrorKind::BadParams, "einstein is defined for cases 1, 2 and 4");
      }
      break;
    }
    case ExampleName::Tachibana: {
      if (params.empty()) throw Error(ErrorKind::BadParams, "tachibana needs kbar");
      const double kb = params[0];
      s.name = "tachibana";
      s.mdim = mdim;
      std::vector<double> ev{-(mdim + 1) * kb};
      for (int j = 0; j < mdim + 1; ++j) ev.push_back(kb);
      s.b = DiagonalB{ev};
      s.d = params.size() > 1 ? params[1] : 0.0;
      break;
    }
  }
  return s;
}

// ---------------------------------------------------------------- potentials

std::string to_string(PotentialSubtype s) {
  switch (s) {
    case PotentialSubtype::Hyperbolic: return "hyperbolic";
    case PotentialSubtype::Elliptic: return "elliptic";
    case PotentialSubtype::Parabolic: return "parabolic";
  }
  return "?";
}

PotentialSubtype subtype_of(const FamilySpec& spec) {
  if (spec.family_case != 1) throw Error(ErrorKind::WrongCase, "implicit potentials are defined for case 1");
  if (spec.d > 0.0) return PotentialSubtype::Hyperbolic;
  if (spec.d < 0.0) return PotentialSubtype::Elliptic;
  return PotentialSubtype::Parabolic;
}

template <class S>
S potential_fj(PotentialSubtype sub, const FamilySpec& spec, int j, const S& t) {
  using std::exp;
  using std::sqrt;
  auto kj = case1_kj(spec);
  double k = 0.0;
  for (double v : kj) k += v;
  const double kk = kj[j - 1] + k;
  if (sub == PotentialSubtype::Parabolic) {
    const double q = spec.constant;
    return exp(0.5 * kk * t) * sqrt(t + q) / sqrt(t);
  }
  MuSolution mu = MuSolution::make(spec.d, spec.constant, false);
  Dual2<S> m = mu.eval(Dual2<S>::variable(t));
  const S mp4 = sqrt(sqrt(m.d));
  if (sub == PotentialSubtype::Hyperbolic) {
    return std::sqrt(mu.beta / std::sqrt(2.0)) * exp(0.5 * kk * t) / (sqrt(t) * mp4);
  }
  const double p = spec.constant;
  return std::sqrt(mu.beta) * std::pow(2.0, 0.25) * exp(0.5 * kk * (t + p / mu.beta) + p) / (sqrt(t) * mp4);
}

template double potential_fj<double>(PotentialSubtype, const FamilySpec&, int, const double&);
template Dual2<double> potential_fj<Dual2<double>>(PotentialSubtype, const FamilySpec&, int, const Dual2<double>&);

Eigen::VectorXcd potential_map(const FamilySpec& spec, const Eigen::VectorXcd& z) {
  const PotentialSubtype sub = subtype_of(spec);
  const double t = z.squaredNorm();
  Eigen::VectorXcd w(z.size());
  for (int j = 0; j < z.size(); ++j) w(j) = potential_fj(sub, spec, j + 1, t) * z(j);
  return w;
}

PotentialSolve solve_implicit_potential(PotentialSubtype sub, const FamilySpec& spec, const Eigen::VectorXcd& wpoint) {
  OperatorFamily fam(spec, false);
  double lo = 0.25 * fam.r_min() * fam.r_min();
  double hi = 4.0 * fam.r_max() * fam.r_max();
  // Shrink the bracket to the pole-free stretch around J.
  const double jlo = fam.r_min() * fam.r_min(), jhi = fam.r_max() * fam.r_max();
  if (sub != PotentialSubtype::Parabolic || spec.constant != 0.0) {
    MuSolution mu = MuSolution::make(spec.d, spec.constant, false);
    for (double p : mu.poles(lo, hi)) {
      if (p <= jlo) lo = std::max(lo, p + 1e-6);
      if (p >= jhi) hi = std::min(hi, p - 1e-6);
    }
  }
  auto phi = [&](const Dual2<double>& x) {
    Dual2<double> s(0.0);
    for (int j = 0; j < wpoint.size(); ++j) {
      Dual2<double> f = potential_fj(sub, spec, j + 1, x);
      s = s + std::norm(wpoint(j)) / (f * f);
    }
    return s - x;
  };
  auto val = [&](double x) { return phi(Dual2<double>(x)).v; };
  auto brackets = [&](double a, double b) {
    const double fa = val(a), fb = val(b);
    return std::isfinite(fa) && std::isfinite(fb) && fa * fb <= 0.0;
  };
  // The residual can blow up with the same sign at both poles; try the
  // sampling domain first, then scan the pole-free stretch.
  const double dlo = std::max(lo, jlo * (1.0 - 1e-3)), dhi = std::min(hi, jhi * (1.0 + 1e-3));
  if (dlo < dhi && brackets(dlo, dhi)) {
    lo = dlo;
    hi = dhi;
  } else if (!brackets(lo, hi)) {
    constexpr int kGrid = 400;
    bool found = false;
    double a = lo;
    for (int i = 1; i <= kGrid && !found; ++i) {
      const double b = lo + (hi - lo) * i / kGrid;
      if (brackets(a, b)) {
        lo = a;
        hi = b;
        found = true;
      }
      a = b;
    }
    if (!found)
      throw Error(ErrorKind::NoConvergence, "no sign change of the implicit equation on the admissible bracket");
  }
  double flo = val(lo);
  double x = 0.5 * (lo + hi);
  PotentialSolve out;
  for (int it = 1; it <= 100; ++it) {
    Dual2<double> f = phi(Dual2<double>::variable(x));
    out.iterations = it;
    if (std::abs(f.v) < 1e-13 * std::max(1.0, x)) {
      out.x = x;
      out.residual = std::abs(f.v);
      return out;
    }
    if ((f.v < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = f.v;
    } else {
      hi = x;
    }
    double next = (f.d != 0.0) ? x - f.v / f.d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  throw Error(ErrorKind::NoConvergence, "implicit potential did not converge in 100 iterations");
}

}  // namespace bfcone

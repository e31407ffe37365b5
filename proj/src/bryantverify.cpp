#include "bfcone/bryantverify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bfcone/bochner.hpp"
#include "bfcone/conegeom.hpp"
#include "bfcone/cx.hpp"
#include "bfcone/error.hpp"
#include "bfcone/indefherm.hpp"

namespace bfcone {

namespace {

const CaseData& require_nilpotent(const OperatorFamily& fam) {
  if (!fam.case_data() || (fam.family_case() != 3 && fam.family_case() != 4))
    throw Error(ErrorKind::WrongCase, "polynomial P1 is defined for cases 3 and 4");
  return *fam.case_data();
}

void require_in_domain(const OperatorFamily& fam, const ConeChartPoint& z) {
  if (!domain_contains(fam, z, 0.0)) throw Error(ErrorKind::OutsideDomain, "point outside the domain");
}

std::vector<Jet2> jets_at(const ConeChartPoint& z) {
  const Eigen::VectorXd x = z.real();
  const int n = static_cast<int>(x.size());
  std::vector<Jet2> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(Jet2::variable(x(i), i, n));
  return out;
}

double rel(double a, double b, double floor = 1e-9) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

template <class T>
struct HatEval {
  T phat;
  T f_over_r2;
};

// phat(tau) and f/r^2 with Bhat applied through the radial coefficients, so
// that derivatives in the chart (Jet2) or along the ray (Dual2) come out exact.
template <class T>
HatEval<T> hat_eval(const OperatorFamily& fam, const RealPoly& q, std::span<const T> x, double tau) {
  const LocalGeom<T> g = local_geom<T>(fam, x);
  const RadialCoeffs<T> rc = fam.radial(g.r);
  const T r2 = g.r * g.r;
  const T dl = rc.psi / r2;
  const T ch = rc.chi / r2;
  const bool pert = fam.perturbed();
  auto bhat = [&](const CVec<T>& v) {
    CVec<T> out = mat_apply(fam.B(), v);
    const CVec<T> av = mat_apply(fam.A(), v);
    CVec<T> pv;
    if (pert) pv = mat_apply(fam.P(), v);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] += av[i] * dl;
      if (pert) out[i] += pv[i] * ch;
    }
    return out;
  };
  const int L = q.degree();
  // Horner over the reduced adjoint coefficients v_k = Bhat v_{k-1} + (-1)^k sigma_k w.
  CVec<T> v = g.w;
  CVec<T> acc = g.w;
  for (int k = 1; k < L; ++k) {
    const double sg = elementary_symmetric(q, k) * ((k % 2 == 0) ? 1.0 : -1.0);
    CVec<T> nv = bhat(v);
    for (std::size_t i = 0; i < nv.size(); ++i) nv[i] += g.w[i] * T(sg);
    v = std::move(nv);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = acc[i] * T(tau) + v[i];
  }
  HatEval<T> out;
  out.phat = eta_pair(acc, g.w).re / eta_pair(bhat(g.w), g.w).re;
  out.f_over_r2 = g.f / r2;
  return out;
}

template <class T>
T p1_eval(const OperatorFamily& fam, const CaseData& cd, std::span<const T> x, double t) {
  const int m = fam.mdim();
  const double c = cd.c(fam.spec().lambda);
  const double s = c / (m + 3);
  const HatEval<T> h = hat_eval<T>(fam, cd.qhat(), x, t + s);
  return h.phat * (t - (m + 2) * c / (m + 3)) + h.f_over_r2 * cd.qhat1()(t + s);
}

std::vector<double> phat_roots(const OperatorFamily& fam, const ConeChartPoint& z) {
  return real_roots(hat_data(fam, z).phat);
}

ConeChartPoint along_ray(const ConeChartPoint& z, double r) { return ConeChartPoint(z.z() * (r / z.r())); }

double nearest(const std::vector<double>& v, double x) {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (double y : v)
    if (std::isnan(best) || std::abs(y - x) < std::abs(best - x)) best = y;
  return best;
}

// Sorted match: both lists sorted ascending; returns max gap (inf on size mismatch).
double sorted_gap(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double g = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::abs(a[i] - b[i]));
  return g;
}

std::vector<double> theta_numeric(const OperatorFamily& fam, const ConeChartPoint& z) {
  std::vector<double> ev = complex_eigenvalues(theta_op(riemann(fam, z), fam.mdim() + 1));
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace

// ---------------------------------------------------------------- P1

HatData hat_data(const OperatorFamily& fam, const ConeChartPoint& z) {
  const CaseData& cd = require_nilpotent(fam);
  require_in_domain(fam, z);
  const int m = fam.mdim();
  HatData h;
  h.r = z.r();
  h.f = f_and_G(fam, z).f;
  h.c = cd.c(fam.spec().lambda);
  h.s = h.c / (m + 3);
  h.Bhat = fam.Bhat_r(h.r);
  h.w = z.w();
  h.qhat = cd.qhat();
  h.qhat1 = cd.qhat1();
  h.Qhat = cd.Qhat(m + 2);
  const HermForm form{m};
  h.phat = pA_poly_with(h.Bhat, h.qhat, form, h.w);
  const double bw = form.pair(h.Bhat * h.w, h.w).real();
  h.bsq_ratio = form.pair(h.Bhat * (h.Bhat * h.w), h.w).real() / bw;
  const RealPoly lin({-(m + 2) * h.c / (m + 3), 1.0});
  h.p1 = lin * h.phat.shifted(h.s) + (h.f / (h.r * h.r)) * h.qhat1.shifted(h.s);
  return h;
}

RealPoly p1_poly(const OperatorFamily& fam, const ConeChartPoint& z) { return hat_data(fam, z).p1; }

ConstantRoots constante_predicate(const FamilySpec& spec) {
  const OperatorFamily fam(spec, false);
  const CaseData& cd = require_nilpotent(fam);
  const int m = spec.mdim;
  const double c = cd.c(spec.lambda);
  ConstantRoots out;
  out.qhat1_at_c = cd.qhat1()(c);
  out.exceptional = spec.lambda != 0.0 && cd.alpha == 0.0 && !cd.any_mu();
  const double base = (m + 2) * c / (m + 3);
  const double scale = std::max(1.0, cd.qhat1().max_abs_coeff());
  if (std::abs(out.qhat1_at_c) <= 1e-12 * scale) out.roots.push_back(base);
  if (out.exceptional) out.roots.push_back(base + spec.lambda);
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

std::vector<double> stationary_roots(const OperatorFamily& fam, const ConeChartPoint& z, double r2, double tol) {
  const std::vector<double> a = real_roots(p1_poly(fam, z));
  const std::vector<double> b = real_roots(p1_poly(fam, along_ray(z, r2)));
  std::vector<double> out;
  for (double x : a) {
    const double y = nearest(b, x);
    if (!std::isnan(y) && std::abs(x - y) <= tol * std::max(1.0, std::abs(x))) out.push_back(x);
  }
  return out;
}

std::vector<double> nonconstant_roots(const OperatorFamily& fam, const ConeChartPoint& z) {
  std::vector<double> rs = real_roots(p1_poly(fam, z));
  for (double c : constante_predicate(fam.spec()).roots) {
    auto it = std::min_element(rs.begin(), rs.end(),
                               [c](double a, double b) { return std::abs(a - c) < std::abs(b - c); });
    if (it != rs.end() && std::abs(*it - c) <= 1e-6 * std::max(1.0, std::abs(c))) rs.erase(it);
  }
  return rs;
}

// ---------------------------------------------------------------- spectra

SpectralTrack spectral_track(const OperatorFamily& fam, const ConeChartPoint& z) {
  const HatData h = hat_data(fam, z);
  const CaseData& cd = *fam.case_data();
  SpectralTrack st;
  st.eta = real_roots(h.phat);
  for (double e : st.eta) st.xi.push_back(h.r * h.r * e);
  st.numeric = theta_numeric(fam, z);
  st.p1_roots = real_roots(h.p1);
  const std::vector<double> cr = constante_predicate(fam.spec()).roots;
  for (double x : st.p1_roots) {
    bool c = false;
    for (double y : cr) c = c || std::abs(x - y) <= 1e-6 * std::max(1.0, std::abs(y));
    st.p1_constant.push_back(c);
  }
  st.predicted = st.p1_roots;
  const int k = cd.any_mu() ? 3 : 2;
  for (int i = 0; i < cd.n0 - k; ++i) st.predicted.push_back(cd.gamma - h.s);
  for (const auto& b : cd.betas)
    for (int i = 0; i < b.mult - 1; ++i) st.predicted.push_back(b.value - h.s);
  std::sort(st.predicted.begin(), st.predicted.end());
  return st;
}

double theta_spectrum_residual(const OperatorFamily& fam, const ConeChartPoint& z) {
  const int cs = fam.family_case();
  if (cs == 2) throw Error(ErrorKind::IncompatibleCase, "no predicted polynomials for case 2");
  if (cs == 3 || cs == 4) {
    const SpectralTrack st = spectral_track(fam, z);
    double scale = 1.0;
    for (double x : st.numeric) scale = std::max(scale, std::abs(x));
    if (st.p1_roots.size() != static_cast<std::size_t>(p1_poly(fam, z).degree()))
      return std::numeric_limits<double>::infinity();  // complex roots of P1
    return sorted_gap(st.numeric, st.predicted) / scale;
  }
  // case 1: constant eigenvalues are the roots of p_c / p_m
  const PredictedPolys pp = predicted_polys(fam.spec());
  const auto [pc, rem] = pp.p_c.divmod(pp.p_m);
  if (rem.max_abs_coeff() > 1e-8 * std::max(1.0, pp.p_c.max_abs_coeff()))
    throw Error(ErrorKind::SpecViolation, "p_m does not divide p_c");
  std::vector<double> numeric = theta_numeric(fam, z);
  double scale = 1.0;
  for (double x : numeric) scale = std::max(scale, std::abs(x));
  // a repeated root comes back split by ~eps^(1/k); the cluster mean is accurate
  std::vector<std::complex<double>> rs = roots(pc);
  std::sort(rs.begin(), rs.end(), [](auto a, auto b) { return a.real() < b.real(); });
  std::vector<std::complex<double>> merged;
  for (std::size_t i = 0; i < rs.size();) {
    std::size_t j = i + 1;
    std::complex<double> sum = rs[i];
    while (j < rs.size() && std::abs(rs[j] - rs[i]) < 1e-3 * std::max(1.0, std::abs(rs[i]))) sum += rs[j++];
    for (std::size_t k = i; k < j; ++k) merged.push_back(sum / static_cast<double>(j - i));
    i = j;
  }
  double worst = 0.0;
  for (const auto& c : merged) {
    if (numeric.empty()) return std::numeric_limits<double>::infinity();
    auto it = std::min_element(numeric.begin(), numeric.end(), [&](double a, double b) {
      return std::abs(a - c.real()) < std::abs(b - c.real());
    });
    worst = std::max(worst, std::abs(*it - c.real()) + std::abs(c.imag()));
    numeric.erase(it);
  }
  return worst / scale;
}

// ---------------------------------------------------------------- radial

double check_dr(const OperatorFamily& fam, const ConeChartPoint& z, double t) {
  const CaseData& cd = require_nilpotent(fam);
  require_in_domain(fam, z);
  using D = Dual2<double>;
  const Eigen::VectorXd u = z.real() / z.r();
  const D r = D::variable(z.r());
  std::vector<D> x;
  for (int i = 0; i < u.size(); ++i) x.push_back(r * u(i));
  const HatEval<D> h = hat_eval<D>(fam, cd.qhat(), std::span<const D>(x), t);
  const double f = h.f_over_r2.v * z.r() * z.r();
  const double rhs = 2.0 * f / z.r() * (h.phat.v - cd.qhat1()(t));
  return rel(h.phat.d, rhs, 1.0);
}

double check_dot(const OperatorFamily& fam, const ConeChartPoint& z) {
  const HatData h0 = hat_data(fam, z);
  const std::vector<double> eta = real_roots(h0.phat);
  if (eta.empty()) return 0.0;
  const double r = z.r();
  const double hstep = 1e-3 * r;
  auto roots_at = [&](double rr) { return phat_roots(fam, along_ray(z, rr)); };
  const auto rp = roots_at(r + hstep), rm = roots_at(r - hstep);
  const auto rp2 = roots_at(r + hstep / 2), rm2 = roots_at(r - hstep / 2);
  const RealPoly dp = h0.phat.derivative();
  double worst = 0.0;
  for (double e : eta) {
    const double d1 = (nearest(rp, e) - nearest(rm, e)) / (2.0 * hstep);
    const double d2 = (nearest(rp2, e) - nearest(rm2, e)) / hstep;
    const double lhs = (4.0 * d2 - d1) / 3.0;
    const double rhs = 2.0 * h0.f / r * h0.qhat1(e) / dp(e);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return worst;
}

// ---------------------------------------------------------------- horizontal

HoriResult check_hori(const OperatorFamily& fam, const ConeChartPoint& z, double t) {
  const HatData h = hat_data(fam, z);
  const CaseData& cd = *fam.case_data();
  const std::vector<Jet2> xj = jets_at(z);
  const HatEval<Jet2> he = hat_eval<Jet2>(fam, h.qhat, std::span<const Jet2>(xj), t);
  const int n = fam.chart_dim();
  Eigen::VectorXd dp(n), dF(n);
  for (int i = 0; i < n; ++i) {
    dp(i) = he.phat.grad(i);
    dF(i) = he.f_over_r2.grad(i);
  }
  const FramePoint fp = frame(fam, z);
  const Eigen::MatrixXd g = metric(fam, z);
  const std::vector<Eigen::VectorXd> basis = horizontal_basis(fp, g);
  double l1 = 0.0, l2 = 0.0, l3 = 0.0;
  for (const auto& e : basis) {
    const double a = dp.dot(e), b = dF.dot(e);
    l1 += a * a;
    l2 += b * b;
    l3 += a * b;
  }
  const double p = h.phat(t);
  const double pd = h.phat.derivative()(t);
  const double q = h.qhat(t);
  const double qd = h.qhat.derivative()(t);
  const double r = h.r, f = h.f, gam = cd.gamma;
  const double r1 = 4.0 * (qd * p - q * pd - 2.0 * t * p * p + p * p * h.bsq_ratio);
  const double r2 = 4.0 * f * f / std::pow(r, 4) * (h.bsq_ratio - 2.0 * gam);
  const double r3 = 4.0 * f / (r * r) * ((t - gam) * h.qhat1(t) - (t + gam) * p + p * h.bsq_ratio);
  HoriResult out;
  out.lhs1 = l1;
  out.rhs1 = r1;
  out.res1 = rel(l1, r1);
  out.res2 = rel(l2, r2);
  out.res3 = rel(l3, r3);
  // L_t realized as a chart vector; g(L_t, e) must reproduce d phat(t)(e).
  const Eigen::VectorXcd aw = reduced_adjoint_with(h.Bhat, h.qhat).eval(t) * h.w;
  const Eigen::VectorXcd X = 2.0 * (aw - p * (h.Bhat * h.w));
  const Eigen::VectorXd Z = chart_vector_of(z, X);
  double worst = 0.0, scale = 1.0;
  for (const auto& e : basis) {
    worst = std::max(worst, std::abs(Z.dot(g * e) - dp.dot(e)));
    scale = std::max(scale, std::abs(dp.dot(e)));
  }
  out.lt = worst / scale;
  return out;
}

// ---------------------------------------------------------------- gradients

double check_grad(const OperatorFamily& fam, const ConeChartPoint& z, int j) {
  const CaseData& cd = require_nilpotent(fam);
  const HatData h = hat_data(fam, z);
  const std::vector<double> all = real_roots(h.p1);
  const std::vector<double> nc = nonconstant_roots(fam, z);
  if (j < 0 || j >= static_cast<int>(nc.size()))
    throw Error(ErrorKind::InvalidInput, "no non-constant root with index " + std::to_string(j));
  const double xi = nc[j];
  int close = 0;
  for (double y : all)
    if (std::abs(y - xi) <= 1e-4) ++close;
  if (close != 1) throw Error(ErrorKind::NearCollision, "roots of P1 closer than 1e-4");

  const std::vector<Jet2> xj = jets_at(z);
  const Jet2 pj = p1_eval<Jet2>(fam, cd, std::span<const Jet2>(xj), xi);
  const double dP = h.p1.derivative()(xi);
  const int n = fam.chart_dim();
  Eigen::VectorXd dxi(n);
  for (int i = 0; i < n; ++i) dxi(i) = -pj.grad(i) / dP;
  const Eigen::MatrixXd g = metric(fam, z);
  const double lhs = dxi.dot(g.ldlt().solve(dxi));

  double pn = 1.0;
  for (int i = 0; i < static_cast<int>(nc.size()); ++i)
    if (i != j) pn *= xi - nc[i];
  const RealPoly pm = predicted_polys(fam.spec()).p_m;
  const double rhs = -4.0 * pm(xi) / pn;
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-12);
}

// ---------------------------------------------------------------- Lagrange

double check_e(const OperatorFamily& fam, const ConeChartPoint& z) {
  const HatData h = hat_data(fam, z);
  const std::vector<double> eta = real_roots(h.phat);
  if (static_cast<int>(eta.size()) != h.phat.degree()) return std::numeric_limits<double>::infinity();
  const RealPoly dp = h.phat.derivative();
  RealPoly lhs;
  for (std::size_t j = 0; j < eta.size(); ++j) {
    RealPoly term = RealPoly::constant(h.qhat1(eta[j]) / dp(eta[j]));
    for (std::size_t i = 0; i < eta.size(); ++i)
      if (i != j) term = term * RealPoly::linear(eta[i] - h.s);
    lhs += term;
  }
  const RealPoly rhs = h.qhat1.shifted(h.s) - h.phat.shifted(h.s);
  return coeff_distance(lhs, rhs) / std::max(1.0, rhs.max_abs_coeff());
}

// ---------------------------------------------------------------- Theta on L_j and V

ExpresiiResult check_expresii(const OperatorFamily& fam, const ConeChartPoint& z) {
  const CaseData& cd = require_nilpotent(fam);
  const HatData h = hat_data(fam, z);
  const int m = fam.mdim();
  const double r = h.r, r2 = r * r, f = h.f;
  const HermForm form{m};
  const Eigen::MatrixXcd Br = fam.B_r(r);
  const int L = h.qhat.degree();
  const RealPoly qr = std::pow(r2, L) * h.qhat.scaled_arg(1.0 / r2);
  const RealPoly pr = pA_poly_with(Br, qr, form, h.w);
  const MatrixPoly bt = reduced_adjoint_with(Br, qr);
  const std::vector<double> eta = real_roots(h.phat);

  const Sym11 th = theta_op(riemann(fam, z), m + 1);
  const Eigen::MatrixXd g = th.g;
  const Eigen::MatrixXd op = g.ldlt().solve(th.s);
  auto gnorm = [&g](const Eigen::VectorXd& v) { return std::sqrt(std::max(0.0, v.dot(g * v))); };
  const Eigen::VectorXd V = z.real();

  ExpresiiResult out;
  Eigen::VectorXd vsum = Eigen::VectorXd::Zero(V.size());
  const RealPoly dpr = pr.derivative();
  for (double e : eta) {
    const double xi = r2 * e;
    const Eigen::VectorXd Lj = chart_vector_of(z, bt.eval(xi) * h.w);
    const double coef = qr(xi) / (r2 * r2 * (e - cd.gamma));
    const Eigen::VectorXd res = op * Lj - (e - h.s) * Lj + coef * V;
    const double scale =
        std::max({gnorm(op * Lj), std::abs(e - h.s) * gnorm(Lj), std::abs(coef) * gnorm(V), 1e-12});
    out.eigen = std::max(out.eigen, gnorm(res) / scale);
    vsum += Lj / (dpr(xi) * (e - cd.gamma));
  }
  const double cV = f / r2 - (m + 2) * h.c / (m + 3);
  const Eigen::VectorXd predicted = f / (r2 * r2) * vsum - cV * V;
  const Eigen::VectorXd thV = op * V;
  out.v = gnorm(thV - predicted) / std::max({gnorm(thV), gnorm(predicted), 1e-12});
  return out;
}

// ---------------------------------------------------------------- sphere identities

double check_patrat(const Eigen::MatrixXcd& a, const RealPoly& q, const Eigen::VectorXcd& w, double t) {
  const HermForm form{static_cast<int>(w.size()) - 2};
  const RealPoly p = pA_poly_with(a, q, form, w);
  const Eigen::VectorXcd aw = reduced_adjoint_with(a, q).eval(t) * w;
  const double lhs = form.pair(aw, aw).real() / form.pair(a * w, w).real();
  const double rhs = q.derivative()(t) * p(t) - q(t) * p.derivative()(t);
  return rel(lhs, rhs, 1.0);
}

double check_aditional(const Eigen::MatrixXcd& a, const RealPoly& q, const Eigen::VectorXcd& w, double t) {
  const int m = static_cast<int>(w.size()) - 2;
  const HermForm form{m};
  const RealPoly p = pA_poly_with(a, q, form, w);
  const double pt = p(t);
  const Eigen::VectorXcd X = reduced_adjoint_with(a, q).eval(t) * w - pt * (a * w);
  const HermOp op(a, form);
  const NullPoint x(w.tail(w.size() - 1));
  const double lhs = 4.0 * sphere_metric_H(op, x, X, X);
  const double aww = form.pair(a * w, w).real();
  const double a2 = form.pair(a * (a * w), w).real();
  const double rhs =
      4.0 * (q.derivative()(t) * pt - q(t) * p.derivative()(t) - 2.0 * t * pt * pt + pt * pt * a2 / aww);
  return rel(lhs, rhs, 1.0);
}

std::pair<Eigen::MatrixXcd, RealPoly> hat_operator(const OperatorFamily& fam, const ConeChartPoint& z) {
  const Eigen::MatrixXcd bh = fam.Bhat_r(z.r());
  if ((fam.family_case() == 3 || fam.family_case() == 4) && !fam.perturbed())
    return {bh, fam.case_data()->qhat()};
  return {bh, minimal_polynomial(bh, 1e-8)};
}

}  // namespace bfcone

#include "bfcone/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "bfcone/bochner.hpp"
#include "bfcone/bryantverify.hpp"
#include "bfcone/conegeom.hpp"
#include "bfcone/error.hpp"
#include "bfcone/indefherm.hpp"
#include "bfcone/tls.hpp"

namespace bfcone {

namespace {

constexpr double kCurvFloor = 1e-8;
const double kInf = std::numeric_limits<double>::infinity();

std::vector<CatalogEntry> build_catalog() {
  const std::vector<int> all{1, 2, 3, 4}, radial{1, 2}, nil{3, 4};
  return {
      {"I1", "functf", "f = 1 + r d/dr theta_r(T_r) / 2", 1e-10, all},
      {"I2", "difbr", "A_r = B_r - (r/2) dB_r/dr", 1e-10, all},
      {"I3", "G1", "r G'/2 - G + 2 = r^4 mu'(r^2)", 1e-10, radial},
      {"I4", "curb(a)", "R(X,Y,Z,W) on H against the sphere curvature", 1e-6, all},
      {"I5", "curb(b)", "R(T,V,V,T)", 1e-6, all},
      {"I6", "curb(c)", "R(T,V,V,Z)", 1e-6, all},
      {"I7", "curb(d)", "R(T,V,Z,W)", 1e-6, all},
      {"I8", "patrat", "(a~w,a~w)/(Aw,w) = q'p - qp'", 1e-10, all},
      {"I9", "aditional", "|dp_A(t)|^2 on the sphere model", 1e-10, all},
      {"I10", "dr", "d/dr phat = (2f/r)(phat - qhat1)", 1e-8, nil},
      {"I11", "dot", "root velocities of phat", 1e-7, nil},
      {"I12a", "hori(1)", "|d^H phat(t)|^2 and the L_t field", 1e-6, nil},
      {"I12b", "hori(2)", "|d^H (f/r^2)|^2", 1e-6, nil},
      {"I12c", "hori(3)", "g(d^H (f/r^2), d^H phat(t))", 1e-6, nil},
      {"I13", "grad", "|grad xi|^2 = -4 p_m(xi)/P_n'(xi)", 1e-4, nil},
      {"I14", "e", "Lagrange form of qhat1 - phat", 1e-10, nil},
      {"I15", "p1", "Theta spectrum against the predicted roots", 1e-6, {1, 3, 4}},
      {"I16", "kahler-symmetries", "curvature symmetries and J-invariance", 1e-6, all},
      {"I17", "dual", "<c*(S), R> = <S, c(R)>", 1e-10, all},
      {"I18", "kahler", "g = omega(., J.) and d omega = 0", 1e-6, all},
      {"I19", "operatori(3)", "B trace-free, eta-hermitian, [A,B] = 0", 1e-10, all, true},
      {"I20", "flat(1)", "G depends on r only", 1e-6, all},
      {"I21", "explicit", "Bochner tensor vanishes", 1e-6, all},
      {"I22", "constante", "constant roots of P1", 1e-7, nil},
      {"I23", "tls", "potential ODE x'' = l1 t x'^3 + l2 x'^2", 1e-8, {1}},
      {"I24", "expresii", "Theta on L_j and V", 1e-6, nil},
      {"I25", "radial", "x(F(z)) = |z|^2", 1e-8, {1}},
  };
}

bool skippable(ErrorKind k) {
  return k == ErrorKind::NearCollision || k == ErrorKind::AmbiguousSpectrum ||
         k == ErrorKind::DegenerateMinimalPoly || k == ErrorKind::OnDomainBoundary;
}

double rel(double a, double b, double floor = 1.0) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Curvature computed at most once per point.
class PointCtx {
 public:
  PointCtx(const OperatorFamily& fam, const ConeChartPoint& z) : fam_(fam), z_(z) {}
  const Curv4& R() {
    if (!R_) R_ = riemann(fam_, z_);
    return *R_;
  }
  double normR() {
    if (!nR_) nR_ = tensor_norm(R());
    return *nR_;
  }

 private:
  const OperatorFamily& fam_;
  const ConeChartPoint& z_;
  std::optional<Curv4> R_;
  std::optional<double> nR_;
};

double functf(const OperatorFamily& fam, const ConeChartPoint& z) {
  using D = Dual2<double>;
  const HermForm form{fam.mdim()};
  const Eigen::VectorXcd w = z.w();
  const double bB = form.pair(fam.B() * w, w).real();
  const double aA = form.pair(fam.A() * w, w).real();
  const double aP = fam.perturbed() ? form.pair(fam.P() * w, w).real() : 0.0;
  const RadialCoeffs<D> rc = fam.radial(D::variable(z.r()));
  const D b = rc.b2 * bB + rc.psi * aA + rc.chi * aP;
  const double f = form.pair(fam.A_r_closed(z.r()) * w, w).real() / b.v;
  // theta_r(T_r) = 1 for all r, so d/dr theta_r(T_r) at a fixed sphere vector is -b'/b.
  const double rhs = 1.0 - z.r() * b.d / (2.0 * b.v);
  return rel(f, rhs);
}

double difbr(const OperatorFamily& fam, const ConeChartPoint& z) {
  const double r = z.r();
  const Eigen::MatrixXcd Ar = fam.A_r_closed(r);
  const Eigen::MatrixXcd lhs = fam.B_r(r) - 0.5 * r * fam.Bdot_r(r);
  double res = (Ar - lhs).cwiseAbs().maxCoeff() / std::max(1.0, Ar.cwiseAbs().maxCoeff());
  // closed-form dB_r/dr against the radial jet
  const HermForm form{fam.mdim()};
  const Eigen::VectorXcd w = z.w();
  const Jet1r jr = deriv_r(
      [&](const Dual2<double>& rr) {
        const RadialCoeffs<Dual2<double>> rc = fam.radial(rr);
        const double bB = form.pair(fam.B() * w, w).real();
        const double aA = form.pair(fam.A() * w, w).real();
        const double aP = fam.perturbed() ? form.pair(fam.P() * w, w).real() : 0.0;
        return rc.b2 * bB + rc.psi * aA + rc.chi * aP;
      },
      r);
  const double bd = form.pair(fam.Bdot_r(r) * w, w).real();
  return std::max(res, rel(jr.d1, bd));
}

double g1(const OperatorFamily& fam, const ConeChartPoint& z) {
  const double r = z.r();
  const Dual2<double> G = G_along_ray(fam, z);
  const Dual2<double> mu = fam.mu()->eval(Dual2<double>::variable(r * r));
  const double lhs = r * G.d / 2.0 - G.v + 2.0;
  return rel(lhs, std::pow(r, 4) * mu.d);
}

double curb(PointCtx& ctx, const OperatorFamily& fam, const ConeChartPoint& z, int which, std::uint64_t seed) {
  if (ctx.normR() < kCurvFloor) return 0.0;
  const CurbResiduals c = curb_residuals(fam, z, ctx.R(), seed);
  switch (which) {
    case 0: return c.a;
    case 1: return c.b;
    case 2: return c.c;
    default: return c.d;
  }
}

std::vector<double> t_grid() { return {-1.3, -0.4, 0.3, 0.7, 1.6}; }

double patrat_or_aditional(const OperatorFamily& fam, const ConeChartPoint& z, bool aditional) {
  const auto [a, q] = hat_operator(fam, z);
  double worst = 0.0;
  for (double t : t_grid())
    worst = std::max(worst, aditional ? check_aditional(a, q, z.w(), t) : check_patrat(a, q, z.w(), t));
  return worst;
}

double dr_all(const OperatorFamily& fam, const ConeChartPoint& z) {
  std::vector<double> ts{0.7, -0.3};
  for (double e : real_roots(hat_data(fam, z).phat)) ts.push_back(e);
  double worst = 0.0;
  for (double t : ts) worst = std::max(worst, check_dr(fam, z, t));
  return worst;
}

double grad_all(const OperatorFamily& fam, const ConeChartPoint& z) {
  double worst = 0.0;
  const int n = static_cast<int>(nonconstant_roots(fam, z).size());
  for (int j = 0; j < n; ++j) worst = std::max(worst, check_grad(fam, z, j));
  return worst;
}

double kahler_sym(PointCtx& ctx) {
  if (ctx.normR() < kCurvFloor) return 0.0;
  const KahlerResiduals k = kahler_residuals(ctx.R());
  const double scale = max_abs(ctx.R().data());
  return std::max({k.antisym, k.pair, k.bianchi, k.j_invariance}) / scale;
}

double dual(const OperatorFamily& fam, const ConeChartPoint& z, std::uint64_t seed) {
  const Eigen::MatrixXd g = metric(fam, z);
  const Eigen::MatrixXd J = frame(fam, z).Jmat;
  const int n = static_cast<int>(g.rows());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Curv4 R0(n, g, J);
  for (double& x : R0.data()) x = nd(rng);
  const Curv4 R = project_kahler(R0);
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) M(i, k) = nd(rng);
  M = (0.5 * (M + M.transpose())).eval();
  Sym11 S{0.5 * (M + J.transpose() * M * J), g, J};
  const double lhs = inner(adjoint_ck(S), R);
  const double rhs = inner(S, ricci_contract(R));
  return std::abs(lhs - rhs) / std::max(form_norm(S) * tensor_norm(R), 1e-300);
}

double kahler_form(const OperatorFamily& fam, const ConeChartPoint& z) {
  const Eigen::MatrixXd g = metric(fam, z);
  const Eigen::MatrixXd w = omega(fam, z);
  const Eigen::MatrixXd J = frame(fam, z).Jmat;
  const double a = (g - w * J).cwiseAbs().maxCoeff() / g.cwiseAbs().maxCoeff();
  const double b = d_omega_residual(fam, z) / w.cwiseAbs().maxCoeff();
  return std::max(a, b);
}

double g_radial(const OperatorFamily& fam, const ConeChartPoint& z) {
  const Jet2 G = G_jet(fam, z);
  const FramePoint fp = frame(fam, z);
  const Eigen::MatrixXd g = metric(fam, z);
  const int n = fam.chart_dim();
  Eigen::VectorXd dG(n);
  for (int i = 0; i < n; ++i) dG(i) = G.grad(i);
  std::vector<Eigen::VectorXd> dirs = horizontal_basis(fp, g);
  dirs.push_back(fp.T / std::sqrt(fp.T.dot(g * fp.T)));
  double worst = 0.0;
  for (const auto& e : dirs) worst = std::max(worst, std::abs(dG.dot(e)));
  return worst / std::max(1.0, std::abs(G.value()));
}

double bochner_flat(PointCtx& ctx) {
  if (ctx.normR() < kCurvFloor) return 0.0;
  return tensor_norm(decompose(ctx.R()).W) / ctx.normR();
}

double constante(const OperatorFamily& fam, const ConeChartPoint& z) {
  const double r = z.r();
  double r2 = 0.97 * r;
  if (!domain_contains(fam, Eigen::VectorXcd(z.z() * (r2 / r)), 0.0)) r2 = 1.03 * r;
  std::vector<double> st = stationary_roots(fam, z, r2);
  std::vector<double> pr = constante_predicate(fam.spec()).roots;
  if (st.size() != pr.size()) return kInf;
  std::sort(st.begin(), st.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < st.size(); ++i) worst = std::max(worst, std::abs(st[i] - pr[i]));
  return worst / std::max(1.0, max_abs(pr));
}

double tls_sample(const OperatorFamily& fam, const ConeChartPoint& z) {
  const TlsResidual t = tls_residual(fam.spec(), z.r() * z.r());
  return std::max(t.ode, t.newton);
}

double potential(const OperatorFamily& fam, const ConeChartPoint& z) {
  const FamilySpec& spec = fam.spec();
  const Eigen::VectorXcd w = potential_map(spec, z.z());
  const PotentialSolve ps = solve_implicit_potential(subtype_of(spec), spec, w);
  return rel(ps.x, z.r() * z.r());
}

double eval_id(const std::string& id, const OperatorFamily& fam, const ConeChartPoint& z, PointCtx& ctx,
               std::uint64_t seed) {
  if (id == "I1") return functf(fam, z);
  if (id == "I2") return difbr(fam, z);
  if (id == "I3") return g1(fam, z);
  if (id == "I4") return curb(ctx, fam, z, 0, seed);
  if (id == "I5") return curb(ctx, fam, z, 1, seed);
  if (id == "I6") return curb(ctx, fam, z, 2, seed);
  if (id == "I7") return curb(ctx, fam, z, 3, seed);
  if (id == "I8") return patrat_or_aditional(fam, z, false);
  if (id == "I9") return patrat_or_aditional(fam, z, true);
  if (id == "I10") return dr_all(fam, z);
  if (id == "I11") return check_dot(fam, z);
  if (id == "I12a") {
    const HoriResult h = check_hori(fam, z, 0.7);
    return std::max(h.res1, h.lt);
  }
  if (id == "I12b") return check_hori(fam, z, 0.7).res2;
  if (id == "I12c") return check_hori(fam, z, 0.7).res3;
  if (id == "I13") return grad_all(fam, z);
  if (id == "I14") return check_e(fam, z);
  if (id == "I15") return theta_spectrum_residual(fam, z);
  if (id == "I16") return kahler_sym(ctx);
  if (id == "I17") return dual(fam, z, seed);
  if (id == "I18") return kahler_form(fam, z);
  if (id == "I20") return g_radial(fam, z);
  if (id == "I21") return bochner_flat(ctx);
  if (id == "I22") return constante(fam, z);
  if (id == "I23") return tls_sample(fam, z);
  if (id == "I24") {
    const ExpresiiResult e = check_expresii(fam, z);
    return std::max(e.eigen, e.v);
  }
  if (id == "I25") return potential(fam, z);
  throw Error(ErrorKind::UnknownId, "no per-sample check '" + id + "'");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t x = seed * 0x9E3779B97F4A7C15ULL + k + 0x632BE59BD9B4E019ULL;
  x ^= x >> 31;
  x *= 0xBF58476D1CE4E5B9ULL;
  return x ^ (x >> 29);
}

struct Cell {
  double residual = 0.0;
  bool skipped = false;
  std::string error;
};

Cell evaluate(const std::string& id, const OperatorFamily& fam, const ConeChartPoint& z, PointCtx& ctx,
              std::uint64_t seed) {
  Cell c;
  try {
    c.residual = eval_id(id, fam, z, ctx, seed);
    if (std::isnan(c.residual)) c.residual = kInf;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::UnknownId || e.kind() == ErrorKind::IncompatibleCase) throw;
    if (skippable(e.kind())) {
      c.skipped = true;
    } else {
      c.residual = kInf;
    }
    c.error = std::string(to_string(e.kind()));
  } catch (const std::exception& e) {
    c.residual = kInf;
    c.error = e.what();
  }
  return c;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string point_string(const ConeChartPoint& z) {
  std::ostringstream os;
  os.precision(17);
  os << "z=(";
  for (int j = 0; j < z.z().size(); ++j) {
    if (j) os << ", ";
    os << z.z()(j).real() << (z.z()(j).imag() < 0 ? "" : "+") << z.z()(j).imag() << "i";
  }
  os << ")";
  return os.str();
}

CheckResult assemble(const CatalogEntry& e, double tol, const std::vector<Cell>& cells,
                     const std::vector<ConeChartPoint>& points, const OperatorFamily& fam) {
  CheckResult r;
  r.id = e.id;
  r.anchor = e.anchor;
  r.tolerance = tol;
  std::map<std::string, int> errors;
  int skipped = 0, worst = -1;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const Cell& c = cells[k];
    if (!c.error.empty()) ++errors[c.error];
    if (c.skipped) {
      ++skipped;
      r.residuals.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    r.residuals.push_back(c.residual);
    ++r.n_samples;
    if (worst < 0 || c.residual > r.max_residual) {
      r.max_residual = c.residual;
      worst = static_cast<int>(k);
    }
  }
  r.pass = r.max_residual < tol;
  std::vector<std::string> notes;
  if (r.n_samples == 0) notes.push_back("no evaluable samples");
  if (skipped) notes.push_back(std::to_string(skipped) + " samples skipped");
  for (const auto& [k, n] : errors) notes.push_back(k + " x" + std::to_string(n));
  if (e.id == "I4" || e.id == "I5" || e.id == "I6" || e.id == "I7")
    notes.push_back("sign calibration " + std::string(curvature_sign() < 0 ? "-1" : "+1") + " applied");
  if ((e.id == "I4" || e.id == "I5" || e.id == "I6" || e.id == "I7" || e.id == "I16" || e.id == "I21") &&
      r.n_samples > 0 && r.max_residual == 0.0)
    notes.push_back("|R| below floor");
  if (!r.pass && worst >= 0)
    notes.push_back("worst sample " + std::to_string(worst) + " at " + point_string(points[worst]) + ", family " +
                    (fam.spec().name.empty() ? "case " + std::to_string(fam.family_case()) : fam.spec().name));
  for (std::size_t i = 0; i < notes.size(); ++i) r.notes += (i ? "; " : "") + notes[i];
  return r;
}

CheckResult spec_constraints(const CatalogEntry& e, const OperatorFamily& fam, double tol) {
  CheckResult r;
  r.id = e.id;
  r.anchor = e.anchor;
  r.tolerance = tol;
  r.n_samples = 1;
  const HermForm form{fam.mdim()};
  const double comm = fam.commutator_norm();
  const double tr = std::abs(fam.B().trace());
  const double herm = std::max(HermOp(fam.B(), form).hermitian_residual(), HermOp(fam.A(), form).hermitian_residual());
  double res = std::max({comm, tr, herm});
  if (fam.perturbed()) {
    const Eigen::MatrixXcd c = fam.A() * fam.P() - fam.P() * fam.A();
    res = std::max(res, std::abs(fam.spec().perturbation->scale) * c.norm());
  }
  r.max_residual = res;
  r.residuals = {res};
  r.pass = res < tol;
  std::string notes = "|[A,B]| = " + fmt(comm);
  for (const auto& v : fam.violations()) notes += "; " + v;
  r.notes = notes;
  return r;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> c = build_catalog();
  return c;
}

const CatalogEntry& catalog_entry(const std::string& id) {
  for (const auto& e : catalog())
    if (e.id == id) return e;
  throw Error(ErrorKind::UnknownId, "unknown catalog id '" + id + "'");
}

std::string incompatibility(const CatalogEntry& e, const OperatorFamily& fam) {
  if (std::find(e.cases.begin(), e.cases.end(), fam.family_case()) == e.cases.end())
    return e.id + " does not apply to case " + std::to_string(fam.family_case());
  if ((e.id == "I10" || e.id == "I11" || e.id == "I12a" || e.id == "I12b" || e.id == "I12c" || e.id == "I13" ||
       e.id == "I14" || e.id == "I15" || e.id == "I22" || e.id == "I24") &&
      (fam.family_case() == 3 || fam.family_case() == 4) && !fam.case_data())
    return e.id + " needs the parabolic B description";
  if (e.id == "I23") {
    const auto k = case1_kj(fam.spec());
    for (double v : k)
      if (std::abs(v - k.front()) > 1e-12) return "I23 needs equal spacelike eigenvalues of B";
  }
  if (e.id == "I25" && fam.perturbed()) return "I25 needs an unperturbed family";
  return {};
}

double sample_residual(const std::string& id, const OperatorFamily& fam, const ConeChartPoint& z,
                       std::uint64_t sample_seed) {
  const CatalogEntry& e = catalog_entry(id);
  const std::string why = incompatibility(e, fam);
  if (!why.empty()) throw Error(ErrorKind::IncompatibleCase, why);
  if (e.per_family) return spec_constraints(e, fam, e.tolerance).max_residual;
  PointCtx ctx(fam, z);
  return eval_id(id, fam, z, ctx, sample_seed);
}

CheckResult run_identity(const std::string& id, const OperatorFamily& fam, const std::vector<ConeChartPoint>& points,
                         std::optional<double> tolerance, std::uint64_t seed) {
  const CatalogEntry& e = catalog_entry(id);
  const std::string why = incompatibility(e, fam);
  if (!why.empty()) throw Error(ErrorKind::IncompatibleCase, why);
  const double tol = tolerance.value_or(e.tolerance);
  if (e.per_family) return spec_constraints(e, fam, tol);
  std::vector<Cell> cells;
  for (std::size_t k = 0; k < points.size(); ++k) {
    PointCtx ctx(fam, points[k]);
    cells.push_back(evaluate(id, fam, points[k], ctx, mix_seed(seed, k)));
  }
  return assemble(e, tol, cells, points, fam);
}

int default_threads() {
  if (const char* s = std::getenv("BFCONE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end != s && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Report run_suite(const FamilySpec& spec_in, const SuiteOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.spec = spec_in;
  if (opt.samples) rep.spec.samples = *opt.samples;
  if (opt.seed) rep.spec.seed = *opt.seed;
  rep.seed = rep.spec.seed;
  rep.sign_convention = curvature_sign();

  std::vector<std::string> ids;
  if (opt.ids) {
    for (const auto& id : *opt.ids) catalog_entry(id);  // UnknownId
    ids = *opt.ids;
  } else {
    for (const auto& e : catalog()) ids.push_back(e.id);
  }
  auto finish = [&]() {
    for (const auto& c : rep.checks) (c.pass ? rep.n_pass : rep.n_fail)++;
    if (opt.timing) rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  };
  if (ids.empty()) return finish();

  std::optional<OperatorFamily> fam;
  try {
    fam.emplace(rep.spec, false);
  } catch (const Error& e) {
    rep.build_error = e.what();
    return finish();
  }

  std::vector<const CatalogEntry*> per_sample;
  std::vector<CheckResult> fixed;
  std::vector<std::string> order;
  for (const auto& id : ids) {
    const CatalogEntry& e = catalog_entry(id);
    if (!incompatibility(e, *fam).empty()) continue;
    order.push_back(id);
    if (e.per_family) {
      const auto it = rep.spec.tolerances.find(id);
      fixed.push_back(spec_constraints(e, *fam, it != rep.spec.tolerances.end() ? it->second : e.tolerance));
    } else {
      per_sample.push_back(&e);
    }
  }

  std::vector<ConeChartPoint> points;
  if (!per_sample.empty()) {
    try {
      points = sample_domain(*fam, rep.spec.samples, rep.spec.seed);
    } catch (const Error& e) {
      rep.build_error = e.what();
      return finish();
    }
  }

  // cells[k][i]: sample k, check i.  Workers take interleaved samples.
  std::vector<std::vector<Cell>> cells(points.size(), std::vector<Cell>(per_sample.size()));
  const int nthreads = std::max(1, std::min<int>(opt.threads > 0 ? opt.threads : default_threads(),
                                                 static_cast<int>(points.size())));
  auto work = [&](int tid) {
    for (std::size_t k = tid; k < points.size(); k += nthreads) {
      PointCtx ctx(*fam, points[k]);
      for (std::size_t i = 0; i < per_sample.size(); ++i)
        cells[k][i] = evaluate(per_sample[i]->id, *fam, points[k], ctx, mix_seed(rep.spec.seed, k));
    }
  };
  if (nthreads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  std::size_t fi = 0, si = 0;
  for (const auto& id : order) {
    const CatalogEntry& e = catalog_entry(id);
    if (e.per_family) {
      rep.checks.push_back(fixed[fi++]);
      continue;
    }
    std::vector<Cell> col;
    for (std::size_t k = 0; k < points.size(); ++k) col.push_back(cells[k][si]);
    ++si;
    const auto it = rep.spec.tolerances.find(id);
    rep.checks.push_back(assemble(e, it != rep.spec.tolerances.end() ? it->second : e.tolerance, col, points, *fam));
  }
  return finish();
}

json report_json(const Report& r) {
  json j;
  j["spec"] = spec_to_json(r.spec);
  json env;
  env["seed"] = r.seed;
  env["sign_convention"] = r.sign_convention < 0 ? "-1" : "+1";
  json tols = json::object();
  for (const auto& c : r.checks) tols[c.id] = c.tolerance;
  env["tolerances"] = tols;
  j["env"] = env;
  json checks = json::array();
  for (const auto& c : r.checks) {
    json cj;
    cj["id"] = c.id;
    cj["anchor"] = c.anchor;
    cj["n_samples"] = c.n_samples;
    cj["max_residual"] = std::isfinite(c.max_residual) ? json(c.max_residual) : json(nullptr);
    cj["tolerance"] = c.tolerance;
    cj["pass"] = c.pass;
    cj["notes"] = c.notes;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  json summary;
  summary["pass"] = r.n_pass;
  summary["fail"] = r.n_fail;
  summary["seconds"] = r.seconds ? json(*r.seconds) : json(nullptr);
  if (!r.build_error.empty()) summary["error"] = r.build_error;
  j["summary"] = summary;
  return j;
}

std::string report_csv(const Report& r) {
  std::ostringstream os;
  os << "check,anchor,sample,residual,tolerance,pass\n";
  for (const auto& c : r.checks)
    for (std::size_t k = 0; k < c.residuals.size(); ++k) {
      const double x = c.residuals[k];
      os << c.id << ',' << c.anchor << ',' << k << ',' << (std::isnan(x) ? std::string("skipped") : fmt(x)) << ','
         << fmt(c.tolerance) << ',' << (std::isnan(x) ? "" : (x < c.tolerance ? "true" : "false")) << '\n';
    }
  return os.str();
}

}  // namespace bfcone

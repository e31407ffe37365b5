#include "bfcone/conegeom.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bfcone/error.hpp"
#include "bfcone/indefherm.hpp"

namespace bfcone {

namespace {

std::vector<Jet2> jet_point(const ConeChartPoint& z) {
  const Eigen::VectorXd x = z.real();
  const int n = static_cast<int>(x.size());
  if (n > kMaxVars) throw Error(ErrorKind::InvalidInput, "chart dimension exceeds jet capacity");
  std::vector<Jet2> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(Jet2::variable(x(i), i, n));
  return out;
}

LocalGeom<double> geom_at(const OperatorFamily& fam, const ConeChartPoint& z) {
  const Eigen::VectorXd x = z.real();
  if (static_cast<int>(x.size()) != fam.chart_dim())
    throw Error(ErrorKind::InvalidInput, "point dimension does not match the family");
  return local_geom<double>(fam, std::span<const double>(x.data(), x.size()));
}

Eigen::VectorXd real_of(const CVec<double>& v) {
  Eigen::VectorXd x(2 * v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    x(2 * j) = v[j].re;
    x(2 * j + 1) = v[j].im;
  }
  return x;
}

CVec<double> cvec_of(const Eigen::VectorXd& x) {
  CVec<double> v(x.size() / 2);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = Cx<double>(x(2 * j), x(2 * j + 1));
  return v;
}

Eigen::VectorXcd complex_of(const CVec<double>& v) {
  Eigen::VectorXcd c(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) c(j) = {v[j].re, v[j].im};
  return c;
}

void require_domain(const LocalGeom<double>& g) {
  if (!(g.b > 0.0)) throw Error(ErrorKind::OutsideDomain, "(B_r w, w) is not positive");
}

// (A w, w) and (P w, w) at the point; G only needs these and the radial data.
template <class T>
T G_from(const OperatorFamily& fam, const T& r, const T& aA, const T& aP) {
  const RadialCoeffs<T> rc = fam.radial(r);
  T num = rc.dpsiA * aA;
  T den = rc.psiA * aA;
  if (fam.perturbed()) {
    num = num + rc.dchiA * aP;
    den = den + rc.chiA * aP;
  }
  return r * num / (2.0 * den);
}

std::pair<double, double> aw_values(const OperatorFamily& fam, const Eigen::VectorXcd& w) {
  HermForm form{fam.mdim()};
  const double aA = form.pair(fam.A() * w, w).real();
  const double aP = fam.perturbed() ? form.pair(fam.P() * w, w).real() : 0.0;
  return {aA, aP};
}

}  // namespace

FramePoint::Split FramePoint::split(const Eigen::VectorXd& Z) const {
  const Eigen::VectorXcd zc_in = to_complex(Z);
  const std::complex<double> ip = uc.dot(zc_in);  // <Z,u> = sum Z_j conj(u_j)
  Split s;
  s.p = ip.real() / r;
  s.q = ip.imag() / (r * b);
  s.zh = to_real(zc_in - s.p * zc - s.q * tc);
  return s;
}

double contact_theta(const OperatorFamily& fam, const ConeChartPoint& z, const Eigen::VectorXd& Z) {
  const LocalGeom<double> g = geom_at(fam, z);
  require_domain(g);
  const Cx<double> ip = std_pair(cvec_of(Z), g.u);
  return ip.im / (g.r * g.b);
}

FramePoint frame(const OperatorFamily& fam, const ConeChartPoint& z) {
  const LocalGeom<double> g = geom_at(fam, z);
  require_domain(g);
  FramePoint fp;
  fp.r = g.r;
  fp.b = g.b;
  fp.f = g.f;
  fp.V = z.real();
  fp.T = real_of(g.reeb);
  fp.zc = z.z();
  fp.uc = complex_of(g.u);
  fp.tc = complex_of(g.reeb);
  const int n = fam.chart_dim();
  fp.Jmat.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const FramePoint::Split s = fp.split(Eigen::VectorXd::Unit(n, i));
    Eigen::VectorXcd zh = to_complex(s.zh);
    Eigen::VectorXcd jz = std::complex<double>(0.0, 1.0) * zh + s.p * fp.tc - s.q * fp.zc;
    fp.Jmat.col(i) = to_real(jz);
  }
  return fp;
}

Eigen::MatrixXd metric(const OperatorFamily& fam, const ConeChartPoint& z) {
  const Eigen::VectorXd x = z.real();
  const LocalGeom<double> g = geom_at(fam, z);
  require_domain(g);
  const auto comp = metric_components<double>(fam, std::span<const double>(x.data(), x.size()));
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = comp[i * n + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 0.0))
    throw Error(ErrorKind::NotPositiveDefinite, "metric is not positive definite (f = " + std::to_string(g.f) + ")");
  return m;
}

FG f_and_G(const OperatorFamily& fam, const ConeChartPoint& z) {
  const LocalGeom<double> g = geom_at(fam, z);
  require_domain(g);
  auto [aA, aP] = aw_values(fam, z.w());
  return {g.f, G_from(fam, g.r, aA, aP)};
}

Dual2<double> G_along_ray(const OperatorFamily& fam, const ConeChartPoint& z) {
  auto [aA, aP] = aw_values(fam, z.w());
  using D = Dual2<double>;
  return G_from<D>(fam, D::variable(z.r()), D(aA), D(aP));
}

Jet2 f_jet(const OperatorFamily& fam, const ConeChartPoint& z) {
  const auto x = jet_point(z);
  return local_geom<Jet2>(fam, std::span<const Jet2>(x)).f;
}

Jet2 G_jet(const OperatorFamily& fam, const ConeChartPoint& z) {
  const auto x = jet_point(z);
  const LocalGeom<Jet2> g = local_geom<Jet2>(fam, std::span<const Jet2>(x));
  const Jet2 aA = eta_pair(mat_apply(fam.A(), g.w), g.w).re;
  const Jet2 aP = fam.perturbed() ? eta_pair(mat_apply(fam.P(), g.w), g.w).re : Jet2(0.0);
  return G_from<Jet2>(fam, g.r, aA, aP);
}

namespace {

// alpha_j(x) = Im<e_j, z> / (2 (B_r w, w)) as jets.
std::vector<Jet2> alpha_jets(const OperatorFamily& fam, const ConeChartPoint& z) {
  const auto x = jet_point(z);
  const LocalGeom<Jet2> g = local_geom<Jet2>(fam, std::span<const Jet2>(x));
  const int n = static_cast<int>(x.size());
  std::vector<Jet2> out(n);
  for (int j = 0; j < n; ++j) {
    CVec<Jet2> e(n / 2);
    e[j / 2] = (j % 2 == 0) ? Cx<Jet2>(Jet2(1.0), Jet2(0.0)) : Cx<Jet2>(Jet2(0.0), Jet2(1.0));
    out[j] = std_pair(e, g.z).im / (2.0 * g.b);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd omega(const OperatorFamily& fam, const ConeChartPoint& z) {
  const auto al = alpha_jets(fam, z);
  const int n = static_cast<int>(al.size());
  Eigen::MatrixXd w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(i, j) = al[j].grad(i) - al[i].grad(j);
  return w;
}

double d_omega_residual(const OperatorFamily& fam, const ConeChartPoint& z) {
  const auto al = alpha_jets(fam, z);
  const int n = static_cast<int>(al.size());
  // d_i omega_jk = H(alpha_k)_ij - H(alpha_j)_ik
  auto dw = [&](int i, int j, int k) { return al[k].hess(i, j) - al[j].hess(i, k); };
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) res = std::max(res, std::abs(dw(i, j, k) + dw(j, k, i) + dw(k, i, j)));
  return res;
}

Curv4 riemann_coordinate(const OperatorFamily& fam, const ConeChartPoint& z) {
  const LocalGeom<double> g0 = geom_at(fam, z);
  require_domain(g0);
  const auto x = jet_point(z);
  const int n = static_cast<int>(x.size());
  const auto gj = metric_components<Jet2>(fam, std::span<const Jet2>(x));
  // Assembled in long double: near the domain edge g is poorly conditioned.
  using LD = long double;
  using MatL = Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gj[i * n + j].value();
  const MatL gi = g.cast<LD>().inverse();
  auto dg = [&](int k, int i, int j) { return LD(gj[i * n + j].grad(k)); };
  auto ddg = [&](int k, int l, int i, int j) { return LD(gj[i * n + j].hess(k, l)); };
  const int n2 = n * n, n3 = n2 * n;
  // C_jkm = d_j g_km + d_k g_jm - d_m g_jk and its derivative d_i C_jkm
  std::vector<LD> C(n3), dC(n3 * n), Gam(n3), dGam(n3 * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m) {
        C[(j * n + k) * n + m] = dg(j, k, m) + dg(k, j, m) - dg(m, j, k);
        for (int i = 0; i < n; ++i)
          dC[((i * n + j) * n + k) * n + m] = ddg(i, j, k, m) + ddg(i, k, j, m) - ddg(i, m, j, k);
      }
  // d_i g^{lm} = -g^{la} d_i g_ab g^{bm}
  std::vector<MatL> dgi(n);
  for (int i = 0; i < n; ++i) {
    MatL d(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) d(a, b) = dg(i, a, b);
    dgi[i] = -gi * d * gi;
  }
  // Gam[l,j,k], dGam[i,l,j,k]
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        LD s = 0.0;
        for (int m = 0; m < n; ++m) s += gi(l, m) * C[(j * n + k) * n + m];
        Gam[(l * n + j) * n + k] = 0.5 * s;
        for (int i = 0; i < n; ++i) {
          LD t = 0.0;
          for (int m = 0; m < n; ++m)
            t += dgi[i](l, m) * C[(j * n + k) * n + m] + gi(l, m) * dC[((i * n + j) * n + k) * n + m];
          dGam[((i * n + l) * n + j) * n + k] = 0.5 * t;
        }
      }
  auto G3 = [&](int l, int j, int k) { return Gam[(l * n + j) * n + k]; };
  auto dG3 = [&](int i, int l, int j, int k) { return dGam[((i * n + l) * n + j) * n + k]; };
  // R^l_ijk
  std::vector<LD> Rup(n2 * n2);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          LD v = dG3(i, l, j, k) - dG3(j, l, i, k);
          for (int m = 0; m < n; ++m) v += G3(l, i, m) * G3(m, j, k) - G3(l, j, m) * G3(m, i, k);
          Rup[((l * n + i) * n + j) * n + k] = v;
        }
  FramePoint fp = frame(fam, z);
  Curv4 R(n, g, fp.Jmat);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          LD v = 0.0;
          for (int m = 0; m < n; ++m) v += Rup[((m * n + i) * n + j) * n + k] * LD(g(m, l));
          R(i, j, k, l) = static_cast<double>(v);
        }
  return R;
}

int curvature_sign() {
  static const int sign = [] {
    FamilySpec spec = example_spec(ExampleName::Bryant, {0.3, 0.1, 0.5});
    OperatorFamily fam(spec, true);
    const ConeChartPoint z = sample_domain(fam, 1, 11)[0];
    const Curv4 R = riemann_coordinate(fam, z);
    const CurbResiduals plus = curb_residuals(fam, z, R, 3);
    const CurbResiduals minus = curb_residuals(fam, z, -1.0 * R, 3);
    const double sp = plus.a + plus.b + plus.c + plus.d;
    const double sm = minus.a + minus.b + minus.c + minus.d;
    return sm < sp ? -1 : 1;
  }();
  return sign;
}

Curv4 riemann(const OperatorFamily& fam, const ConeChartPoint& z) {
  Curv4 R = riemann_coordinate(fam, z);
  if (curvature_sign() < 0) R *= -1.0;
  return R;
}

bool domain_contains(const OperatorFamily& fam, const ConeChartPoint& z, double margin) {
  const double r = z.r();
  if (!(r > fam.r_min() * (1.0 + margin) && r < fam.r_max() * (1.0 - margin))) return false;
  if (fam.mu() && fam.mu()->distance_to_pole(r * r) < 1e-3) return false;
  try {
    const LocalGeom<double> g = geom_at(fam, z);
    return std::isfinite(g.f) && g.b > margin && g.f > margin;
  } catch (const Error&) {
    return false;
  }
}

bool domain_contains(const OperatorFamily& fam, const Eigen::VectorXcd& z, double margin) {
  if (!(z.norm() > 0.0)) return false;
  return domain_contains(fam, ConeChartPoint(z), margin);
}

namespace {

void gram_schmidt_push(std::vector<Eigen::VectorXd>& out, Eigen::VectorXd v, const Eigen::MatrixXd& g) {
  for (const auto& e : out) v -= e.dot(g * v) * e;
  const double nv = std::sqrt(std::max(0.0, v.dot(g * v)));
  if (nv > 1e-6) out.push_back(v / nv);
}

}  // namespace

std::vector<Eigen::VectorXd> horizontal_basis(const FramePoint& fp, const Eigen::MatrixXd& g) {
  const int n = static_cast<int>(g.rows());
  std::vector<Eigen::VectorXd> out;
  for (int k = 0; k < n && static_cast<int>(out.size()) < n - 2; ++k)
    gram_schmidt_push(out, fp.split(Eigen::VectorXd::Unit(n, k)).zh, g);
  return out;
}

std::vector<Eigen::VectorXd> random_horizontal(const FramePoint& fp, const Eigen::MatrixXd& g, int count,
                                               std::uint64_t seed) {
  const int n = static_cast<int>(g.rows());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<Eigen::VectorXd> out;
  int guard = 0;
  while (static_cast<int>(out.size()) < std::min(count, n - 2) && guard++ < 100) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = nd(rng);
    gram_schmidt_push(out, fp.split(v).zh, g);
  }
  return out;
}

Eigen::VectorXd chart_vector_of(const ConeChartPoint& z, const Eigen::VectorXcd& X) {
  const Eigen::VectorXcd u = z.u();
  const Eigen::VectorXcd tail = X.tail(X.size() - 1);
  return to_real(z.r() * (tail - X(0) * u));
}

CurbResiduals curb_residuals(const OperatorFamily& fam, const ConeChartPoint& z, const Curv4& R,
                             std::uint64_t seed) {
  const FramePoint fp = frame(fam, z);
  const Eigen::MatrixXd& g = R.g();
  const Eigen::MatrixXd& J = fp.Jmat;
  const int n = fam.chart_dim();
  const Jet2 fj = f_jet(fam, z);
  Eigen::VectorXd df(n);
  Eigen::MatrixXd H(n, n);
  for (int i = 0; i < n; ++i) {
    df(i) = fj.grad(i);
    for (int k = 0; k < n; ++k) H(i, k) = fj.hess(i, k);
  }
  const double f = fj.value();
  const double r = fp.r;
  const Eigen::VectorXd& V = fp.V;
  const Eigen::VectorXd& T = fp.T;
  const auto hv = random_horizontal(fp, g, 3, seed);
  if (hv.size() < 3) throw Error(ErrorKind::InvalidInput, "horizontal space too small for the component identities");
  const Eigen::VectorXd &X = hv[0], &Y = hv[1], &Z = hv[2];
  auto G = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(g * b); };
  auto om = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (J * a).dot(g * b); };
  auto d = [&](const Eigen::VectorXd& v) { return df.dot(v); };
  auto nrm = [&](const Eigen::VectorXd& v) { return std::sqrt(G(v, v)); };
  const double normR = std::max(tensor_norm(R), 1e-8);

  CurbResiduals out;
  // (a)
  out.lhs_a = R.eval(X, T, Y, Z);
  out.rhs_a = -d(Y) / 2 * om(X, Z) - d(J * Y) / 2 * G(X, Z) + d(Z) / 2 * om(X, Y) + d(J * Z) / 2 * G(X, Y) -
              d(X) * om(Y, Z);
  out.a = std::abs(out.lhs_a - out.rhs_a) / (normR * nrm(T));
  // (d)
  out.lhs_d = R.eval(X, V, Y, Z);
  out.rhs_d = d(Y) * G(X, Z) / 2 - d(Z) * G(X, Y) / 2 - d(J * Y) * om(X, Z) / 2 + d(J * Z) * om(X, Y) / 2 -
              d(J * X) * om(Y, Z);
  out.d = std::abs(out.lhs_d - out.rhs_d) / (normR * nrm(V));
  // (b): v = r^2 grad_H f
  Eigen::VectorXd grad_h = Eigen::VectorXd::Zero(n);
  for (const auto& e : horizontal_basis(fp, g)) grad_h += d(e) * e;
  const Eigen::VectorXd v = r * r * grad_h;
  const Dual2<double> Gr = G_along_ray(fam, z);
  const double lhs_b = R.eval(T, V, V, T);
  const double rhs_b = G(v, v) + r * r * f * ((Gr.v - 2.0) * (8.0 * f - 2.0) + r * Gr.d + 12.0 * f * f);
  out.b = std::abs(lhs_b - rhs_b) / (normR * std::pow(nrm(T) * nrm(V), 2));
  // (c): fdot = df(V)/r at fixed u
  auto dfdot = [&](const Eigen::VectorXd& y) {
    return (y.dot(df) + y.dot(H * V)) / r - df.dot(V) * (y.dot(V) / r) / (r * r);
  };
  const double lhs_c = R.eval(T, V, V, Z);
  const double rhs_c = -r * r * r / 2.0 * dfdot(J * Z) + r * r * (Gr.v - 1.0) * d(J * Z);
  out.c = std::abs(lhs_c - rhs_c) / (normR * nrm(T) * nrm(V) * nrm(V));
  return out;
}

}  // namespace bfcone

#pragma once

// Geometry of the generalized Kähler cone in the global chart C^(m+1)\{0}.
// Real chart coordinates interleave (Re z_j, Im z_j).  Every quantity is
// assembled algebraically from B_r, A_r; derivatives come from jets.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bfcone/bochner.hpp"
#include "bfcone/chart.hpp"
#include "bfcone/cx.hpp"
#include "bfcone/families.hpp"
#include "bfcone/jets.hpp"

namespace bfcone {

/// Pointwise data shared by every construction; T is double or Jet2.
template <class T>
struct LocalGeom {
  CVec<T> z, u, w;
  T r;
  T b;  // (B_r w, w)
  T a;  // (A_r w, w)
  T f;
  CVec<T> reeb;  // T = r (v - c_0 u), c = i B_r w
};

template <class T>
LocalGeom<T> local_geom(const OperatorFamily& fam, std::span<const T> x) {
  using std::sqrt;
  LocalGeom<T> g;
  const int k = static_cast<int>(x.size()) / 2;
  g.z.resize(k);
  T r2(0.0);
  for (int j = 0; j < k; ++j) {
    g.z[j] = Cx<T>(x[2 * j], x[2 * j + 1]);
    r2 = r2 + g.z[j].norm2();
  }
  g.r = sqrt(r2);
  g.u.resize(k);
  for (int j = 0; j < k; ++j) g.u[j] = g.z[j] / g.r;
  g.w.resize(k + 1);
  g.w[0] = Cx<T>(T(1.0), T(0.0));
  for (int j = 0; j < k; ++j) g.w[j + 1] = g.u[j];

  const RadialCoeffs<T> rc = fam.radial(g.r);
  const CVec<T> Bw = mat_apply(fam.B(), g.w);
  const CVec<T> Aw = mat_apply(fam.A(), g.w);
  CVec<T> Brw(k + 1), Arw(k + 1);
  const bool pert = fam.perturbed();
  CVec<T> Pw;
  if (pert) Pw = mat_apply(fam.P(), g.w);
  for (int i = 0; i <= k; ++i) {
    Brw[i] = Bw[i] * rc.b2 + Aw[i] * rc.psi;
    Arw[i] = Aw[i] * rc.psiA;
    if (pert) {
      Brw[i] += Pw[i] * rc.chi;
      Arw[i] += Pw[i] * rc.chiA;
    }
  }
  g.b = eta_pair(Brw, g.w).re;
  g.a = eta_pair(Arw, g.w).re;
  g.f = g.a / g.b;
  g.reeb.resize(k);
  const Cx<T> c0 = Brw[0].times_i();
  for (int j = 0; j < k; ++j) g.reeb[j] = (Brw[j + 1].times_i() - c0 * g.u[j]) * g.r;
  return g;
}

/// Splitting Z = Z_h + p V + q T of a tangent vector.
template <class T>
struct TangentSplit {
  CVec<T> zh;
  T p, q;
};

template <class T>
TangentSplit<T> split_tangent(const LocalGeom<T>& g, const CVec<T>& Z) {
  TangentSplit<T> s;
  const Cx<T> ip = std_pair(Z, g.u);
  s.p = ip.re / g.r;
  s.q = ip.im / (g.r * g.b);
  s.zh.resize(Z.size());
  for (std::size_t j = 0; j < Z.size(); ++j) s.zh[j] = Z[j] - g.z[j] * s.p - g.reeb[j] * s.q;
  return s;
}

/// g_ij in chart coordinates, assembled algebraically.
template <class T>
std::vector<T> metric_components(const OperatorFamily& fam, std::span<const T> x) {
  const int n = static_cast<int>(x.size());
  const LocalGeom<T> g = local_geom<T>(fam, x);
  std::vector<TangentSplit<T>> sp;
  sp.reserve(n);
  for (int i = 0; i < n; ++i) {
    CVec<T> e(n / 2);
    e[i / 2] = (i % 2 == 0) ? Cx<T>(T(1.0), T(0.0)) : Cx<T>(T(0.0), T(1.0));
    sp.push_back(split_tangent(g, e));
  }
  const T r2f = g.r * g.r * g.f;
  std::vector<T> out(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      T v = std_pair(sp[i].zh, sp[j].zh).re / g.b + r2f * (sp[i].p * sp[j].p + sp[i].q * sp[j].q);
      out[i * n + j] = v;
      out[j * n + i] = v;
    }
  return out;
}

struct FramePoint {
  Eigen::VectorXd V;
  Eigen::VectorXd T;
  Eigen::MatrixXd Jmat;
  double r = 0.0, b = 0.0, f = 0.0;
  struct Split {
    Eigen::VectorXd zh;
    double p = 0.0, q = 0.0;
  };
  Eigen::VectorXcd zc, uc, tc;  // complex z, u, T
  Split split(const Eigen::VectorXd& Z) const;
  Eigen::VectorXd apply_J(const Eigen::VectorXd& Z) const { return Jmat * Z; }
};

/// Im<Z,u> / (r (B_r w, w)).
double contact_theta(const OperatorFamily& fam, const ConeChartPoint& z, const Eigen::VectorXd& Z);
FramePoint frame(const OperatorFamily& fam, const ConeChartPoint& z);
/// Throws NotPositiveDefinite when g is not positive.
Eigen::MatrixXd metric(const OperatorFamily& fam, const ConeChartPoint& z);

struct FG {
  double f = 0.0;
  double G = 0.0;
};
FG f_and_G(const OperatorFamily& fam, const ConeChartPoint& z);
/// G along the ray through z, with its r-derivative.
Dual2<double> G_along_ray(const OperatorFamily& fam, const ConeChartPoint& z);

/// f and G as jets over the chart.
Jet2 f_jet(const OperatorFamily& fam, const ConeChartPoint& z);
Jet2 G_jet(const OperatorFamily& fam, const ConeChartPoint& z);

/// 2-form omega = d alpha with alpha(Z) = Im<Z,z> / (2 (B_r w, w)).
Eigen::MatrixXd omega(const OperatorFamily& fam, const ConeChartPoint& z);
/// Max |d omega| over index triples.
double d_omega_residual(const OperatorFamily& fam, const ConeChartPoint& z);

/// Global sign applied to coordinate curvature, calibrated once on the
/// component identities of a reference family.
int curvature_sign();

/// R_ijkl = g(R(d_i,d_j) d_k, d_l) with R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y].
Curv4 riemann_coordinate(const OperatorFamily& fam, const ConeChartPoint& z);
/// Coordinate curvature times curvature_sign().
Curv4 riemann(const OperatorFamily& fam, const ConeChartPoint& z);

bool domain_contains(const OperatorFamily& fam, const ConeChartPoint& z, double margin);
/// Same for a raw chart vector; false at the apex.
bool domain_contains(const OperatorFamily& fam, const Eigen::VectorXcd& z, double margin);

/// Random horizontal vectors, g-orthonormalized.
std::vector<Eigen::VectorXd> random_horizontal(const FramePoint& fp, const Eigen::MatrixXd& g, int count,
                                               std::uint64_t seed);
/// g-orthonormal basis of H.
std::vector<Eigen::VectorXd> horizontal_basis(const FramePoint& fp, const Eigen::MatrixXd& g);

/// Chart vector of a homomorphism class X mod w (X in W, (X,w) = 0).
Eigen::VectorXd chart_vector_of(const ConeChartPoint& z, const Eigen::VectorXcd& X);

struct CurbResiduals {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;  // scaled residuals
  double lhs_a = 0.0, rhs_a = 0.0, lhs_d = 0.0, rhs_d = 0.0;
};
/// Component identities of the cone curvature for a given tensor.
CurbResiduals curb_residuals(const OperatorFamily& fam, const ConeChartPoint& z, const Curv4& R,
                             std::uint64_t seed);

}  // namespace bfcone

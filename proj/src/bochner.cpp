#include "bfcone/bochner.hpp"

#include <algorithm>
#include <cmath>

#include "bfcone/error.hpp"

namespace bfcone {

Curv4::Curv4(int n, Eigen::MatrixXd g, Eigen::MatrixXd J)
    : n_(n), c_(static_cast<std::size_t>(n) * n * n * n, 0.0), g_(std::move(g)), J_(std::move(J)) {}

double Curv4::eval(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                   const Eigen::VectorXd& d) const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) {
    if (a(i) == 0.0) continue;
    for (int j = 0; j < n_; ++j) {
      if (b(j) == 0.0) continue;
      for (int k = 0; k < n_; ++k) {
        const double abc = a(i) * b(j) * c(k);
        if (abc == 0.0) continue;
        for (int l = 0; l < n_; ++l) s += abc * d(l) * (*this)(i, j, k, l);
      }
    }
  }
  return s;
}

Curv4 Curv4::transformed(const Eigen::MatrixXd& F) const {
  // Four single-slot contractions; slot order rotates so each pass hits slot 0.
  const int n = n_;
  std::vector<double> cur = c_, next(cur.size());
  for (int pass = 0; pass < 4; ++pass) {
    // next[j,k,l,a] = sum_i cur[i,j,k,l] F(i,a)
    for (int i = 0; i < n; ++i)
      for (int rest = 0; rest < n * n * n; ++rest) {
        const double v = cur[i * n * n * n + rest];
        if (v == 0.0) continue;
        for (int a = 0; a < n; ++a) next[rest * n + a] += v * F(i, a);
      }
    std::swap(cur, next);
    std::fill(next.begin(), next.end(), 0.0);
  }
  Curv4 out(n, F.transpose() * g_ * F, F.colPivHouseholderQr().solve(J_ * F));
  out.c_ = std::move(cur);
  return out;
}

Curv4& Curv4::operator+=(const Curv4& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}
Curv4& Curv4::operator-=(const Curv4& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}
Curv4& Curv4::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}
Curv4 operator+(Curv4 a, const Curv4& b) { return a += b; }
Curv4 operator-(Curv4 a, const Curv4& b) { return a -= b; }
Curv4 operator*(double s, Curv4 a) { return a *= s; }

Eigen::MatrixXd standard_J(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; i += 2) {
    j(i + 1, i) = 1.0;
    j(i, i + 1) = -1.0;
  }
  return j;
}

Eigen::MatrixXd adapted_frame(const Eigen::MatrixXd& g, const Eigen::MatrixXd& J) {
  const int n = static_cast<int>(g.rows());
  std::vector<Eigen::VectorXd> vecs;
  auto orth = [&](Eigen::VectorXd v) {
    for (const auto& e : vecs) v -= e.dot(g * v) * e;
    return v;
  };
  int k = 0;
  while (static_cast<int>(vecs.size()) < n) {
    if (k >= n) throw Error(ErrorKind::NotPositiveDefinite, "no J-adapted orthonormal frame");
    Eigen::VectorXd v = orth(Eigen::VectorXd::Unit(n, k++));
    const double nv2 = v.dot(g * v);
    if (!(nv2 > 1e-16)) continue;
    v /= std::sqrt(nv2);
    vecs.push_back(v);
    Eigen::VectorXd jv = orth(J * v);
    const double nj2 = jv.dot(g * jv);
    if (!(nj2 > 0.0)) throw Error(ErrorKind::NotPositiveDefinite, "metric not positive on Jv");
    vecs.push_back(jv / std::sqrt(nj2));
  }
  Eigen::MatrixXd F(n, n);
  for (int i = 0; i < n; ++i) F.col(i) = vecs[i];
  return F;
}

namespace {

// Everything below works on frame components: g = I, J = J0.

using Mat = Eigen::MatrixXd;

Curv4 frame_tensor(int n) { return Curv4(n, Mat::Identity(n, n), standard_J(n)); }

Curv4 to_frame(const Curv4& R, Mat* F_out = nullptr) {
  Mat F = adapted_frame(R.g(), R.J());
  if (F_out) *F_out = F;
  return R.transformed(F);
}

Mat ck_frame(const Curv4& R) {
  const int n = R.dim();
  Mat s = Mat::Zero(n, n);
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w) {
      double acc = 0.0;
      for (int e = 0; e < n; ++e) acc += R(v, e, w, e);
      s(v, w) = acc;
    }
  return s;
}

Curv4 cstar_frame(const Mat& S) {
  const int n = static_cast<int>(S.rows());
  const Mat I = Mat::Identity(n, n);
  const Mat J0 = standard_J(n);
  const Mat JS = J0 * S;
  const Mat om = J0.transpose();
  const Mat beta = (S * J0).transpose();
  Curv4 T = frame_tensor(n);
  auto wedge = [](const Mat& P, const Mat& Q, int v, int w, int a, int b) {
    return P(a, v) * Q(b, w) - P(b, v) * Q(a, w) - P(a, w) * Q(b, v) + P(b, w) * Q(a, v);
  };
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double x = 0.5 * (wedge(S, I, v, w, a, b) + wedge(JS, J0, v, w, a, b));
          x += om(v, w) * beta(a, b) + beta(v, w) * om(a, b);
          T(v, w, a, b) = 0.5 * x;
        }
  return T;
}

Mat sym_to_frame(const Sym11& S, Mat* F_out) {
  Mat F = adapted_frame(S.g, S.J);
  if (F_out) *F_out = F;
  return F.transpose() * S.s * F;
}

Sym11 sym_from_frame(const Mat& Sf, const Mat& F, const Mat& g, const Mat& J) {
  // F^-1 = F^T g
  const Mat Finv = F.transpose() * g;
  return Sym11{Finv.transpose() * Sf * Finv, g, J};
}

double full_dot(const Curv4& a, const Curv4& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

std::vector<Mat> sym11_basis(int n) {
  const Mat J0 = standard_J(n);
  std::vector<Mat> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Mat E = Mat::Zero(n, n);
      E(i, j) = 1.0;
      E(j, i) = 1.0;
      E = 0.5 * (E + J0.transpose() * E * J0);
      for (const auto& b : basis) E -= (E.cwiseProduct(b)).sum() * b;
      const double nn = E.norm();
      if (nn > 1e-8) basis.push_back(E / nn);
    }
  return basis;
}

}  // namespace

Sym11 ricci_contract(const Curv4& R) {
  Mat F;
  Curv4 Rf = to_frame(R, &F);
  Mat s = ck_frame(Rf);
  s = 0.5 * (s + s.transpose()).eval();
  return sym_from_frame(s, F, R.g(), R.J());
}

Curv4 adjoint_ck(const Sym11& S) {
  Mat F;
  Mat Sf = sym_to_frame(S, &F);
  const int n = static_cast<int>(Sf.rows());
  const Mat J0 = standard_J(n);
  const double res = (J0.transpose() * Sf * J0 - Sf).cwiseAbs().maxCoeff();
  if (res > 1e-8 * std::max(1.0, Sf.norm()))
    throw Error(ErrorKind::NotInvariant, "form is not J-invariant");
  if ((Sf - Sf.transpose()).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, Sf.norm()))
    throw Error(ErrorKind::NotInvariant, "form is not symmetric");
  Curv4 Tf = cstar_frame(Sf);
  Curv4 out = Tf.transformed(F.transpose() * S.g);
  return Curv4(out.dim(), S.g, S.J) += out;
}

Decomposition decompose(const Curv4& R) {
  Mat F;
  Curv4 Rf = to_frame(R, &F);
  const int n = R.dim();
  const auto basis = sym11_basis(n);
  const int k = static_cast<int>(basis.size());
  Mat M(k, k);
  Eigen::VectorXd rhs(k);
  const Mat ckR = ck_frame(Rf);
  std::vector<Mat> images(k);
  for (int b = 0; b < k; ++b) images[b] = ck_frame(cstar_frame(basis[b]));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) M(a, b) = basis[a].cwiseProduct(images[b]).sum();
    rhs(a) = basis[a].cwiseProduct(ckR).sum();
  }
  Eigen::LDLT<Mat> ldlt(M);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().minCoeff() <= 1e-12)
    throw Error(ErrorKind::SingularSystem, "c_K c*_K is singular");
  Eigen::VectorXd coef = ldlt.solve(rhs);
  Mat Sf = Mat::Zero(n, n);
  for (int a = 0; a < k; ++a) Sf += coef(a) * basis[a];
  Curv4 Wf = Rf - cstar_frame(Sf);
  const Mat Finv = F.transpose() * R.g();
  Curv4 W = Wf.transformed(Finv);
  Decomposition d;
  d.S = sym_from_frame(Sf, F, R.g(), R.J());
  d.W = Curv4(n, R.g(), R.J());
  d.W += W;
  return d;
}

Sym11 theta_from_S(const Sym11& S, int dimC) {
  const double tr = S.g.ldlt().solve(S.s).trace();
  Sym11 out = S;
  out.s = 0.25 * (S.s - tr / (2.0 * (dimC + 2)) * S.g);
  return out;
}

Sym11 theta_op(const Curv4& R, int dimC) { return theta_from_S(decompose(R).S, dimC); }

std::vector<double> sym_eigenvalues(const Sym11& S) {
  Mat Sf = sym_to_frame(S, nullptr);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (Sf + Sf.transpose()));
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<double> complex_eigenvalues(const Sym11& S) {
  auto ev = sym_eigenvalues(S);
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < ev.size(); i += 2) out.push_back(0.5 * (ev[i] + ev[i + 1]));
  return out;
}

double tensor_norm(const Curv4& R) {
  Curv4 Rf = to_frame(R);
  return std::sqrt(full_dot(Rf, Rf));
}

double inner(const Curv4& a, const Curv4& b) {
  Mat F = adapted_frame(a.g(), a.J());
  return 0.25 * full_dot(a.transformed(F), b.transformed(F));
}

double inner(const Sym11& a, const Sym11& b) {
  Mat F = adapted_frame(a.g, a.J);
  return (F.transpose() * a.s * F).cwiseProduct(F.transpose() * b.s * F).sum();
}

double form_norm(const Sym11& a) { return std::sqrt(inner(a, a)); }

KahlerResiduals kahler_residuals(const Curv4& R) {
  const int n = R.dim();
  const Mat& J = R.J();
  KahlerResiduals out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = R(i, j, k, l);
          out.antisym = std::max({out.antisym, std::abs(v + R(j, i, k, l)), std::abs(v + R(i, j, l, k))});
          out.pair = std::max(out.pair, std::abs(v - R(k, l, i, j)));
          out.bianchi = std::max(out.bianchi, std::abs(v + R(j, k, i, l) + R(k, i, j, l)));
          double jj = 0.0;
          for (int a = 0; a < n; ++a) {
            if (J(a, i) == 0.0) continue;
            for (int b = 0; b < n; ++b) jj += J(a, i) * J(b, j) * R(a, b, k, l);
          }
          out.j_invariance = std::max(out.j_invariance, std::abs(jj - v));
        }
  return out;
}

Curv4 project_kahler(const Curv4& R, int iterations) {
  Mat F;
  Curv4 T = to_frame(R, &F);
  const int n = R.dim();
  const Mat J0 = standard_J(n);
  Curv4 tmp = T;
  for (int it = 0; it < iterations; ++it) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            tmp(i, j, k, l) = 0.25 * (T(i, j, k, l) - T(j, i, k, l) - T(i, j, l, k) + T(j, i, l, k));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) T(i, j, k, l) = 0.5 * (tmp(i, j, k, l) + tmp(k, l, i, j));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            tmp(i, j, k, l) = T(i, j, k, l) - (T(i, j, k, l) + T(j, k, i, l) + T(k, i, j, l)) / 3.0;
    // J acts on the first pair; J0 has one nonzero per column.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int a = i ^ 1, b = j ^ 1;
        const double s = J0(a, i) * J0(b, j);
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) T(i, j, k, l) = 0.5 * (tmp(i, j, k, l) + s * tmp(a, b, k, l));
      }
  }
  // J-averaging on the first pair plus pair symmetry gives J on the second.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) tmp(i, j, k, l) = 0.5 * (T(i, j, k, l) + T(k, l, i, j));
  const Mat Finv = F.transpose() * R.g();
  Curv4 out(n, R.g(), R.J());
  out += tmp.transformed(Finv);
  return out;
}

}  // namespace bfcone

#include "bfcone/indefherm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bfcone/error.hpp"

namespace bfcone {

Eigen::MatrixXd HermForm::eta() const {
  Eigen::MatrixXd e = Eigen::MatrixXd::Identity(dim(), dim());
  e(0, 0) = -1.0;
  return e;
}

std::complex<double> HermForm::pair(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const {
  std::complex<double> s = -a(0) * std::conj(b(0));
  for (int j = 1; j < a.size(); ++j) s += a(j) * std::conj(b(j));
  return s;
}

HermOp::HermOp(Eigen::MatrixXcd m, HermForm form) : m_(std::move(m)), form_(form) {
  if (m_.rows() != form_.dim() || m_.cols() != form_.dim())
    throw Error(ErrorKind::InvalidInput, "operator size does not match mdim+2");
}

double HermOp::hermitian_residual() const {
  const Eigen::MatrixXcd eta = form_.eta().cast<std::complex<double>>();
  return (m_.adjoint() - eta * m_ * eta).cwiseAbs().maxCoeff();
}

void HermOp::require_hermitian(double tol) const {
  double res = hermitian_residual();
  if (res > tol * std::max(1.0, m_.norm()))
    throw Error(ErrorKind::NotHermitian, "eta-hermitian residual " + std::to_string(res));
}

NullPoint::NullPoint(const Eigen::VectorXcd& u) {
  double n = u.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::DomainError, "null point from zero vector");
  u_ = u / n;
}

Eigen::VectorXcd NullPoint::w() const {
  Eigen::VectorXcd w(u_.size() + 1);
  w(0) = 1.0;
  w.tail(u_.size()) = u_;
  return w;
}

std::string to_string(OpKind k) {
  switch (k) {
    case OpKind::Elliptic: return "elliptic";
    case OpKind::Hyperbolic: return "hyperbolic";
    case OpKind::Parabolic1: return "parabolic1";
    case OpKind::Parabolic2: return "parabolic2";
  }
  return "unknown";
}

ClassLabel classify(const HermOp& a, double tol) {
  a.require_hermitian(tol);
  ClassLabel out;
  out.spectrum = cluster_spectrum(a.matrix(), tol);
  const double radius = std::sqrt(tol) * std::max(1.0, a.matrix().norm());
  int twos = 0;
  bool three = false;
  bool nonreal = false;
  for (const auto& c : out.spectrum) {
    if (std::abs(c.value.imag()) > radius) nonreal = true;
    if (c.block >= 3) three = true;
    if (c.block == 2) ++twos;
  }
  if (three)
    out.kind = OpKind::Parabolic2;
  else if (twos == 1)
    out.kind = OpKind::Parabolic1;
  else if (twos > 1)
    throw Error(ErrorKind::AmbiguousSpectrum, "more than one Jordan block of size 2");
  else if (nonreal)
    out.kind = OpKind::Hyperbolic;
  else
    out.kind = OpKind::Elliptic;
  return out;
}

MatrixPoly reduced_adjoint_with(const Eigen::MatrixXcd& a, const RealPoly& q) {
  const int L = q.degree();
  if (L < 1) throw Error(ErrorKind::DegenerateMinimalPoly, "annihilating polynomial of degree < 1");
  const auto n = a.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  std::vector<Eigen::MatrixXcd> ak(L);
  ak[0] = id;
  for (int k = 1; k < L; ++k) {
    double s = elementary_symmetric(q, k);
    ak[k] = a * ak[k - 1] + ((k % 2 == 0) ? s : -s) * id;
  }
  std::vector<Eigen::MatrixXcd> coeffs(L);
  for (int j = 0; j < L; ++j) coeffs[j] = ak[L - 1 - j];
  return MatrixPoly(std::move(coeffs));
}

MatrixPoly reduced_adjoint(const HermOp& a, double tol) {
  RealPoly q;
  try {
    q = minimal_polynomial(a.matrix(), tol);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::AmbiguousSpectrum) throw Error(ErrorKind::DegenerateMinimalPoly, e.what());
    throw;
  }
  return reduced_adjoint_with(a.matrix(), q);
}

RealPoly pA_poly_with(const Eigen::MatrixXcd& a, const RealPoly& q, const HermForm& form,
                      const Eigen::VectorXcd& w) {
  const std::complex<double> aww = form.pair(a * w, w);
  if (std::abs(aww) <= 1e-9 * std::max(1.0, a.norm()))
    throw Error(ErrorKind::OnDomainBoundary, "(Aw,w) vanishes at this null point");
  MatrixPoly at = reduced_adjoint_with(a, q);
  std::vector<double> c(at.coeffs().size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    std::complex<double> v = form.pair(at.coeffs()[j] * w, w) / aww;
    if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v)))
      throw Error(ErrorKind::NotHermitian, "pA_poly coefficient has imaginary part");
    c[j] = v.real();
  }
  return RealPoly(std::move(c));
}

RealPoly pA_poly(const HermOp& a, const NullPoint& x, double tol) {
  RealPoly q;
  try {
    q = minimal_polynomial(a.matrix(), tol);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::AmbiguousSpectrum) throw Error(ErrorKind::DegenerateMinimalPoly, e.what());
    throw;
  }
  return pA_poly_with(a.matrix(), q, a.form(), x.w());
}

double sphere_metric_H(const HermOp& a, const NullPoint& x, const Eigen::VectorXcd& X,
                       const Eigen::VectorXcd& Y) {
  const HermForm& form = a.form();
  const Eigen::VectorXcd w = x.w();
  for (const auto* v : {&X, &Y}) {
    if (std::abs(form.pair(*v, w)) > 1e-9 * std::max(1.0, v->norm()))
      throw Error(ErrorKind::NotOrthogonal, "representative not orthogonal to the null line");
  }
  const std::complex<double> aww = form.pair(a.matrix() * w, w);
  return form.pair(X, Y).real() / aww.real();
}

int identitate_nullspace(int n_samples, std::uint64_t seed, const HermForm& form, bool trace_free) {
  const int N = form.dim();
  std::mt19937_64 rng(seed);
  const int rows = n_samples + (trace_free ? 1 : 0);
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(rows, N * N);
  // Parameters of hermitian H (A = eta H): diagonal, then Re/Im of upper entries.
  auto off_index = [N](int i, int j) {
    int k = N;
    for (int a = 0; a < N; ++a)
      for (int b = a + 1; b < N; ++b) {
        if (a == i && b == j) return k;
        k += 2;
      }
    return -1;
  };
  for (int s = 0; s < n_samples; ++s) {
    NullPoint x(random_unit(N - 1, rng));
    const Eigen::VectorXcd w = x.w();
    for (int i = 0; i < N; ++i) sys(s, i) = std::norm(w(i));
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) {
        std::complex<double> c = std::conj(w(i)) * w(j);
        int k = off_index(i, j);
        sys(s, k) = 2.0 * c.real();
        sys(s, k + 1) = -2.0 * c.imag();
      }
  }
  if (trace_free) {
    sys(n_samples, 0) = -1.0;
    for (int i = 1; i < N; ++i) sys(n_samples, i) = 1.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys);
  const auto& sv = svd.singularValues();
  const double thr = 1e-9 * std::max(1.0, sv(0));
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++rank;
  return N * N - rank;
}

}  // namespace bfcone

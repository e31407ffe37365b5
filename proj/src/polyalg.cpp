#include "bfcone/polyalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bfcone/error.hpp"

namespace bfcone {

RealPoly::RealPoly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

RealPoly RealPoly::monomial(int degree, double c) {
  std::vector<double> v(degree + 1, 0.0);
  v[degree] = c;
  return RealPoly(std::move(v));
}

RealPoly RealPoly::from_roots(const std::vector<std::complex<double>>& roots) {
  std::vector<std::complex<double>> c{1.0};
  for (const auto& r : roots) {
    std::vector<std::complex<double>> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  std::vector<double> re(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) re[k] = c[k].real();
  return RealPoly(std::move(re));
}

void RealPoly::trim() {
  double mx = 0.0;
  for (double v : c_) mx = std::max(mx, std::abs(v));
  if (mx == 0.0) {
    c_.clear();
    return;
  }
  while (!c_.empty() && std::abs(c_.back()) <= 1e-12 * mx) c_.pop_back();
}

double RealPoly::max_abs_coeff() const {
  double mx = 0.0;
  for (double v : c_) mx = std::max(mx, std::abs(v));
  return mx;
}

RealPoly RealPoly::derivative() const {
  if (c_.size() <= 1) return RealPoly();
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return RealPoly(std::move(d));
}

RealPoly RealPoly::shifted(double s) const {
  // Horner in polynomial arithmetic: p(t+s).
  RealPoly acc;
  const RealPoly lin({s, 1.0});
  for (int k = degree(); k >= 0; --k) acc = acc * lin + RealPoly::constant(c_[k]);
  return acc;
}

RealPoly RealPoly::scaled_arg(double a) const {
  std::vector<double> v(c_);
  double p = 1.0;
  for (double& x : v) {
    x *= p;
    p *= a;
  }
  return RealPoly(std::move(v));
}

RealPoly RealPoly::monic() const {
  if (c_.empty()) throw Error(ErrorKind::ZeroPolynomial, "monic of zero polynomial");
  RealPoly r = *this;
  r *= 1.0 / leading();
  return r;
}

std::pair<RealPoly, RealPoly> RealPoly::divmod(const RealPoly& divisor) const {
  if (divisor.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "division by zero polynomial");
  std::vector<double> rem(c_);
  const int dd = divisor.degree();
  const int nd = degree();
  if (nd < dd) return {RealPoly(), *this};
  std::vector<double> q(nd - dd + 1, 0.0);
  for (int k = nd - dd; k >= 0; --k) {
    double coef = rem[k + dd] / divisor.leading();
    q[k] = coef;
    for (int j = 0; j <= dd; ++j) rem[k + j] -= coef * divisor.c_[j];
  }
  rem.resize(dd);
  RealPoly rp;
  rp.c_ = std::move(rem);
  // Remainder is trimmed against the dividend's scale, not its own.
  double mx = std::max(max_abs_coeff(), 1e-300);
  while (!rp.c_.empty() && std::abs(rp.c_.back()) <= 1e-14 * mx) rp.c_.pop_back();
  return {RealPoly(std::move(q)), rp};
}

RealPoly& RealPoly::operator+=(const RealPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

RealPoly& RealPoly::operator-=(const RealPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

RealPoly& RealPoly::operator*=(double s) {
  for (double& v : c_) v *= s;
  trim();
  return *this;
}

std::string RealPoly::to_string(int precision) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  os.precision(precision);
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    double v = c_[k];
    if (v == 0.0) continue;
    double a = std::abs(v);
    if (first) {
      if (v < 0) os << "-";
    } else {
      os << (v < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0 || a != 1.0) os << a;
    if (k > 0) {
      if (a != 1.0) os << "*";
      os << "t";
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

RealPoly operator+(RealPoly a, const RealPoly& b) { return a += b; }
RealPoly operator-(RealPoly a, const RealPoly& b) { return a -= b; }
RealPoly operator*(RealPoly a, double s) { return a *= s; }
RealPoly operator*(double s, RealPoly a) { return a *= s; }

RealPoly operator*(const RealPoly& a, const RealPoly& b) {
  if (a.is_zero() || b.is_zero()) return RealPoly();
  std::vector<double> c(a.coeffs().size() + b.coeffs().size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] += a.coeffs()[i] * b.coeffs()[j];
  return RealPoly(std::move(c));
}

double coeff_distance(const RealPoly& a, const RealPoly& b) {
  int n = std::max(a.degree(), b.degree());
  double d = 0.0;
  for (int k = 0; k <= n; ++k) d = std::max(d, std::abs(a.coeff(k) - b.coeff(k)));
  return d;
}

double elementary_symmetric(const RealPoly& monic_poly, int k) {
  const int n = monic_poly.degree();
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  double c = monic_poly.coeff(n - k) / monic_poly.leading();
  return (k % 2 == 0) ? c : -c;
}

Eigen::MatrixXcd MatrixPoly::eval(std::complex<double> t) const {
  if (c_.empty()) return {};
  Eigen::MatrixXcd acc = c_.back();
  for (int k = static_cast<int>(c_.size()) - 2; k >= 0; --k) acc = (acc * t + c_[k]).eval();
  return acc;
}

MatrixPoly MatrixPoly::operator*(const RealPoly& p) const {
  if (c_.empty() || p.is_zero()) return MatrixPoly();
  const auto n = c_[0].rows();
  std::vector<Eigen::MatrixXcd> out(c_.size() + p.coeffs().size() - 1, Eigen::MatrixXcd::Zero(n, n));
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < p.coeffs().size(); ++j) out[i + j] += c_[i] * p.coeffs()[j];
  return MatrixPoly(std::move(out));
}

std::vector<std::complex<double>> roots(const RealPoly& p) {
  if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "roots of the zero polynomial");
  const int n = p.degree();
  if (n < 1) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.coeff(i) / p.leading();
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  const RealPoly dp = p.derivative();
  std::vector<std::complex<double>> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::complex<double> z = es.eigenvalues()(i);
    double best = std::abs(p(z));
    std::complex<double> zz = z;
    for (int it = 0; it < 10; ++it) {
      std::complex<double> d = dp(zz);
      if (std::abs(d) == 0.0) break;
      zz -= p(zz) / d;
      double res = std::abs(p(zz));
      if (!std::isfinite(res)) break;
      if (res < best) {
        best = res;
        z = zz;
      }
    }
    out.push_back(z);
  }
  std::sort(out.begin(), out.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

std::vector<double> real_roots(const RealPoly& p, double imag_tol) {
  std::vector<double> out;
  for (auto z : roots(p)) {
    if (std::abs(z.imag()) <= imag_tol * std::max(1.0, std::abs(z))) out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

int nullity(const Eigen::MatrixXcd& m, double thr) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  int k = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) <= thr) ++k;
  return k;
}

}  // namespace

std::vector<SpectralCluster> cluster_spectrum(const Eigen::MatrixXcd& a, double tol) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return {};
  const double scale = std::max(1.0, a.norm());
  // Defective eigenvalues split by about eps^(1/k); merge on sqrt(tol).
  const double radius = std::sqrt(tol) * scale;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
  std::vector<std::complex<double>> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = es.eigenvalues()(i);

  // single linkage
  std::vector<int> label(n);
  for (int i = 0; i < n; ++i) label[i] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (label[i] != label[j] && std::abs(ev[i] - ev[j]) < radius) {
          int lo = std::min(label[i], label[j]);
          int hi = std::max(label[i], label[j]);
          for (int& l : label)
            if (l == hi) l = lo;
          changed = true;
        }
  }
  std::vector<SpectralCluster> out;
  for (int l = 0; l < n; ++l) {
    std::complex<double> sum = 0.0;
    int cnt = 0;
    for (int i = 0; i < n; ++i)
      if (label[i] == l) {
        sum += ev[i];
        ++cnt;
      }
    if (cnt == 0) continue;
    SpectralCluster c;
    c.value = sum / static_cast<double>(cnt);
    c.alg_mult = cnt;
    out.push_back(c);
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (std::abs(out[i].value - out[j].value) < 10.0 * radius)
        throw Error(ErrorKind::AmbiguousSpectrum, "eigenvalue clusters closer than the ambiguity gap");

  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  for (auto& c : out) {
    const Eigen::MatrixXcd shifted = a - c.value * id;
    const double sn = std::max(1.0, shifted.norm());
    Eigen::MatrixXcd pw = id;
    c.block = 0;
    for (int k = 1; k <= c.alg_mult; ++k) {
      pw = (pw * shifted).eval();
      const double thr = tol * std::pow(sn, k);
      if (nullity(pw, thr) >= c.alg_mult) {
        c.block = k;
        break;
      }
    }
    if (c.block == 0)
      throw Error(ErrorKind::AmbiguousSpectrum, "cluster multiplicity not confirmed by rank test");
  }
  std::sort(out.begin(), out.end(), [](const SpectralCluster& x, const SpectralCluster& y) {
    return x.value.real() != y.value.real() ? x.value.real() < y.value.real()
                                            : x.value.imag() < y.value.imag();
  });
  return out;
}

namespace {

RealPoly poly_from_clusters(const std::vector<SpectralCluster>& cl, bool minimal) {
  std::vector<std::complex<double>> rts;
  for (const auto& c : cl) {
    int k = minimal ? c.block : c.alg_mult;
    for (int i = 0; i < k; ++i) rts.push_back(c.value);
  }
  return RealPoly::from_roots(rts);
}

}  // namespace

RealPoly minimal_polynomial(const Eigen::MatrixXcd& a, double tol) {
  return poly_from_clusters(cluster_spectrum(a, tol), true);
}

RealPoly characteristic_polynomial(const Eigen::MatrixXcd& a, double tol) {
  return poly_from_clusters(cluster_spectrum(a, tol), false);
}

Eigen::MatrixXcd eval_matrix(const RealPoly& p, const Eigen::MatrixXcd& a) {
  const auto n = a.rows();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  for (int k = p.degree(); k >= 0; --k) {
    acc = (acc * a).eval();
    acc += p.coeff(k) * Eigen::MatrixXcd::Identity(n, n);
  }
  return acc;
}

}  // namespace bfcone

#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bfcone {

/// Real polynomial, coefficients in ascending degree.
class RealPoly {
 public:
  RealPoly() = default;
  explicit RealPoly(std::vector<double> coeffs);

  static RealPoly constant(double c) { return RealPoly({c}); }
  static RealPoly monomial(int degree, double c = 1.0);
  /// Linear factor t - a.
  static RealPoly linear(double a) { return RealPoly({-a, 1.0}); }
  /// Product of (t - root); imaginary parts of the result are dropped.
  static RealPoly from_roots(const std::vector<std::complex<double>>& roots);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  double coeff(int k) const { return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : 0.0; }
  double leading() const { return c_.empty() ? 0.0 : c_.back(); }
  const std::vector<double>& coeffs() const { return c_; }
  double max_abs_coeff() const;

  double operator()(double t) const { return eval(t); }
  std::complex<double> operator()(std::complex<double> t) const { return eval(t); }

  template <class T>
  T eval(const T& t) const {
    if (c_.empty()) return T(0.0);
    T acc = T(c_.back());
    for (int k = static_cast<int>(c_.size()) - 2; k >= 0; --k) acc = acc * t + c_[k];
    return acc;
  }

  RealPoly derivative() const;
  /// t -> p(t + s).
  RealPoly shifted(double s) const;
  /// t -> p(a t) .
  RealPoly scaled_arg(double a) const;
  RealPoly monic() const;

  /// Quotient and remainder by a nonzero divisor.
  std::pair<RealPoly, RealPoly> divmod(const RealPoly& divisor) const;

  RealPoly& operator+=(const RealPoly& o);
  RealPoly& operator-=(const RealPoly& o);
  RealPoly& operator*=(double s);

  std::string to_string(int precision = 10) const;

 private:
  void trim();
  std::vector<double> c_;
};

RealPoly operator+(RealPoly a, const RealPoly& b);
RealPoly operator-(RealPoly a, const RealPoly& b);
RealPoly operator*(const RealPoly& a, const RealPoly& b);
RealPoly operator*(RealPoly a, double s);
RealPoly operator*(double s, RealPoly a);

/// Largest coefficientwise difference.
double coeff_distance(const RealPoly& a, const RealPoly& b);

/// Elementary symmetric function sigma_k of the roots of a monic polynomial.
double elementary_symmetric(const RealPoly& monic_poly, int k);

/// Polynomial with matrix coefficients, ascending degree.
class MatrixPoly {
 public:
  MatrixPoly() = default;
  explicit MatrixPoly(std::vector<Eigen::MatrixXcd> coeffs) : c_(std::move(coeffs)) {}

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Eigen::MatrixXcd>& coeffs() const { return c_; }
  Eigen::MatrixXcd eval(std::complex<double> t) const;
  MatrixPoly operator*(const RealPoly& p) const;

 private:
  std::vector<Eigen::MatrixXcd> c_;
};

/// All complex roots, companion eigenvalues polished by Newton.
std::vector<std::complex<double>> roots(const RealPoly& p);

/// Real roots sorted ascending (imaginary parts below imag_tol, relative).
std::vector<double> real_roots(const RealPoly& p, double imag_tol = 1e-7);

struct SpectralCluster {
  std::complex<double> value;
  int alg_mult = 0;
  int block = 0;  // largest Jordan block
};

/// Eigenvalue clusters with multiplicities and Jordan block sizes.
std::vector<SpectralCluster> cluster_spectrum(const Eigen::MatrixXcd& a, double tol = 1e-8);

RealPoly minimal_polynomial(const Eigen::MatrixXcd& a, double tol = 1e-8);
RealPoly characteristic_polynomial(const Eigen::MatrixXcd& a, double tol = 1e-8);

/// p(A) by Horner.
Eigen::MatrixXcd eval_matrix(const RealPoly& p, const Eigen::MatrixXcd& a);

}  // namespace bfcone

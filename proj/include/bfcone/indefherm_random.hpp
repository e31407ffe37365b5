#pragma once

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

namespace bfcone {

template <class Rng>
Eigen::VectorXcd random_unit(int k, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXcd v(k);
  for (int i = 0; i < k; ++i) {
    double re = nd(rng);
    double im = nd(rng);
    v(i) = {re, im};
  }
  return v / v.norm();
}

template <class Rng>
Eigen::MatrixXcd random_eta_hermitian(const HermForm& form, Rng& rng, double scale, bool trace_free) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const int n = form.dim();
  Eigen::MatrixXcd h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double re = nd(rng);
      double im = nd(rng);
      h(i, j) = {re, im};
    }
  h = (0.5 * scale) * (h + h.adjoint()).eval();
  // A = eta H is eta-hermitian exactly when H is hermitian.
  Eigen::MatrixXcd a = form.eta().cast<std::complex<double>>() * h;
  if (trace_free) a -= (a.trace() / static_cast<double>(n)) * Eigen::MatrixXcd::Identity(n, n);
  return a;
}

template <class Rng>
Eigen::MatrixXcd random_eta_unitary(const HermForm& form, Rng& rng, double scale) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const int n = form.dim();
  Eigen::MatrixXcd k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double re = nd(rng);
      double im = nd(rng);
      k(i, j) = {re, im};
    }
  k = (0.5 * scale) * (k - k.adjoint()).eval();
  Eigen::MatrixXcd x = form.eta().cast<std::complex<double>>() * k;
  return x.exp();
}

}  // namespace bfcone

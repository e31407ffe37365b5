#pragma once

// Linear algebra on W = C^(m+2) with the signature (m+1,1) pairing
// (a,b) = -a0 conj(b0) + sum_{j>=1} a_j conj(b_j).

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bfcone/polyalg.hpp"

namespace bfcone {

struct HermForm {
  int mdim = 2;
  int dim() const { return mdim + 2; }
  Eigen::MatrixXd eta() const;
  std::complex<double> pair(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const;
};

class HermOp {
 public:
  HermOp(Eigen::MatrixXcd m, HermForm form);

  const Eigen::MatrixXcd& matrix() const { return m_; }
  const HermForm& form() const { return form_; }
  /// max |A^H - eta A eta|
  double hermitian_residual() const;
  std::complex<double> trace() const { return m_.trace(); }
  /// Throws NotHermitian if the residual exceeds tol.
  void require_hermitian(double tol) const;

 private:
  Eigen::MatrixXcd m_;
  HermForm form_;
};

class NullPoint {
 public:
  /// u is normalized; throws DomainError for u = 0.
  explicit NullPoint(const Eigen::VectorXcd& u);

  const Eigen::VectorXcd& u() const { return u_; }
  /// e_0 + u
  Eigen::VectorXcd w() const;

 private:
  Eigen::VectorXcd u_;
};

enum class OpKind { Elliptic, Hyperbolic, Parabolic1, Parabolic2 };
std::string to_string(OpKind k);

struct ClassLabel {
  OpKind kind = OpKind::Elliptic;
  std::vector<SpectralCluster> spectrum;
};

ClassLabel classify(const HermOp& a, double tol = 1e-8);

/// Operator polynomial with (tI - A) a~(t) = q_A(t) I, q_A minimal.
MatrixPoly reduced_adjoint(const HermOp& a, double tol = 1e-8);
/// Same, with a known monic annihilating polynomial q.
MatrixPoly reduced_adjoint_with(const Eigen::MatrixXcd& a, const RealPoly& q);

/// t -> (a~(t) w, w) / (A w, w).
RealPoly pA_poly(const HermOp& a, const NullPoint& x, double tol = 1e-8);
RealPoly pA_poly_with(const Eigen::MatrixXcd& a, const RealPoly& q, const HermForm& form,
                      const Eigen::VectorXcd& w);

/// Re(X,Y) / (Aw,w) for X, Y in x-perp.
double sphere_metric_H(const HermOp& a, const NullPoint& x, const Eigen::VectorXcd& X,
                       const Eigen::VectorXcd& Y);

/// Dimension of the space of (trace-free if requested) eta-hermitian A with
/// (Aw,w) = 0 on n_samples random null vectors.
int identitate_nullspace(int n_samples, std::uint64_t seed, const HermForm& form,
                         bool trace_free = true);

/// Uniform unit vector in C^k.
template <class Rng>
Eigen::VectorXcd random_unit(int k, Rng& rng);

/// Random eta-hermitian matrix with entries of order `scale`.
template <class Rng>
Eigen::MatrixXcd random_eta_hermitian(const HermForm& form, Rng& rng, double scale = 1.0,
                                      bool trace_free = true);

/// exp of a random eta-antihermitian matrix (preserves the pairing).
template <class Rng>
Eigen::MatrixXcd random_eta_unitary(const HermForm& form, Rng& rng, double scale = 0.5);

}  // namespace bfcone

#include "bfcone/indefherm_random.hpp"

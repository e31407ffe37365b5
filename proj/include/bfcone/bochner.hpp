#pragma once

// Kähler curvature algebra at a point: Ricci contraction, its adjoint,
// the Bochner decomposition and Bryant's operator Theta.
//
// Every inner product is taken in a g-orthonormal frame adapted to J
// (J e_{2i} = e_{2i+1}).  The curvature inner product is 1/4 of the full
// component sum, i.e. the natural one on pairs of bivectors.

#include <vector>

#include <Eigen/Dense>

namespace bfcone {

/// (0,4) tensor R_ijkl with the metric and complex structure of its point.
class Curv4 {
 public:
  Curv4() = default;
  Curv4(int n, Eigen::MatrixXd g, Eigen::MatrixXd J);

  int dim() const { return n_; }
  double& operator()(int i, int j, int k, int l) { return c_[((i * n_ + j) * n_ + k) * n_ + l]; }
  double operator()(int i, int j, int k, int l) const { return c_[((i * n_ + j) * n_ + k) * n_ + l]; }
  const Eigen::MatrixXd& g() const { return g_; }
  const Eigen::MatrixXd& J() const { return J_; }
  const std::vector<double>& data() const { return c_; }
  std::vector<double>& data() { return c_; }

  /// R(a,b,c,d) for chart vectors.
  double eval(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
              const Eigen::VectorXd& d) const;
  /// Components in the basis given by the columns of F.
  Curv4 transformed(const Eigen::MatrixXd& F) const;

  Curv4& operator+=(const Curv4& o);
  Curv4& operator-=(const Curv4& o);
  Curv4& operator*=(double s);

 private:
  int n_ = 0;
  std::vector<double> c_;
  Eigen::MatrixXd g_, J_;
};

Curv4 operator+(Curv4 a, const Curv4& b);
Curv4 operator-(Curv4 a, const Curv4& b);
Curv4 operator*(double s, Curv4 a);

/// Symmetric bilinear form with its point data.
struct Sym11 {
  Eigen::MatrixXd s;
  Eigen::MatrixXd g, J;
};

/// J-adapted g-orthonormal frame (columns); F^T g F = I and F^-1 J F = J0.
Eigen::MatrixXd adapted_frame(const Eigen::MatrixXd& g, const Eigen::MatrixXd& J);
/// Standard complex structure J0 e_{2i} = e_{2i+1}.
Eigen::MatrixXd standard_J(int n);

Sym11 ricci_contract(const Curv4& R);
Curv4 adjoint_ck(const Sym11& S);

struct Decomposition {
  Sym11 S;
  Curv4 W;
};
Decomposition decompose(const Curv4& R);

/// 1/4 (S - tr_g S / (2 (dimC + 2)) g).
Sym11 theta_op(const Curv4& R, int dimC);
Sym11 theta_from_S(const Sym11& S, int dimC);

/// Eigenvalues of the g-raised form, ascending (real pairs for J-invariant forms).
std::vector<double> sym_eigenvalues(const Sym11& S);
/// Complex eigenvalues: one per J-pair.
std::vector<double> complex_eigenvalues(const Sym11& S);

/// Frobenius norm in a g-orthonormal frame.
double tensor_norm(const Curv4& R);
/// 1/4 of the full contraction, in a g-orthonormal frame.
double inner(const Curv4& a, const Curv4& b);
/// Full contraction of two forms, g-raised.
double inner(const Sym11& a, const Sym11& b);
double form_norm(const Sym11& a);

struct KahlerResiduals {
  double antisym = 0.0;    // R_ijkl + R_jikl and R_ijkl + R_ijlk
  double pair = 0.0;       // R_ijkl - R_klij
  double bianchi = 0.0;    // cyclic sum over ijk
  double j_invariance = 0.0;  // R(J.,J.,.,.) - R
};
/// Absolute residuals (max component).
KahlerResiduals kahler_residuals(const Curv4& R);

/// Projection of an arbitrary 4-tensor onto Kähler curvature tensors
/// (alternating projections, a test-data generator).
Curv4 project_kahler(const Curv4& R, int iterations = 200);

}  // namespace bfcone

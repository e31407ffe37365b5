#pragma once

#include <vector>

#include <Eigen/Dense>

namespace bfcone {

/// Point z of C^(m+1) \ {0}; real coordinates interleave (Re z_j, Im z_j).
class ConeChartPoint {
 public:
  explicit ConeChartPoint(const Eigen::VectorXcd& z);
  static ConeChartPoint from_real(const Eigen::VectorXd& x);

  const Eigen::VectorXcd& z() const { return z_; }
  double r() const { return r_; }
  Eigen::VectorXcd u() const { return z_ / r_; }
  /// e_0 + u in W.
  Eigen::VectorXcd w() const;
  Eigen::VectorXd real() const;
  int complex_dim() const { return static_cast<int>(z_.size()); }

 private:
  Eigen::VectorXcd z_;
  double r_ = 0.0;
};

Eigen::VectorXd to_real(const Eigen::VectorXcd& z);
Eigen::VectorXcd to_complex(const Eigen::VectorXd& x);

}  // namespace bfcone

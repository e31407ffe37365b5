#include "bfcone/chart.hpp"

#include "bfcone/error.hpp"

namespace bfcone {

ConeChartPoint::ConeChartPoint(const Eigen::VectorXcd& z) : z_(z), r_(z.norm()) {
  if (!(r_ > 0.0)) throw Error(ErrorKind::OutsideDomain, "the apex z = 0 is not in the chart");
}

ConeChartPoint ConeChartPoint::from_real(const Eigen::VectorXd& x) { return ConeChartPoint(to_complex(x)); }

Eigen::VectorXcd ConeChartPoint::w() const {
  Eigen::VectorXcd w(z_.size() + 1);
  w(0) = 1.0;
  w.tail(z_.size()) = u();
  return w;
}

Eigen::VectorXd ConeChartPoint::real() const { return to_real(z_); }

Eigen::VectorXd to_real(const Eigen::VectorXcd& z) {
  Eigen::VectorXd x(2 * z.size());
  for (int j = 0; j < z.size(); ++j) {
    x(2 * j) = z(j).real();
    x(2 * j + 1) = z(j).imag();
  }
  return x;
}

Eigen::VectorXcd to_complex(const Eigen::VectorXd& x) {
  if (x.size() % 2 != 0) throw Error(ErrorKind::InvalidInput, "real chart vector has odd length");
  Eigen::VectorXcd z(x.size() / 2);
  for (int j = 0; j < z.size(); ++j) z(j) = {x(2 * j), x(2 * j + 1)};
  return z;
}

}  // namespace bfcone

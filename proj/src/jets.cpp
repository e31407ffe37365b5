#include "bfcone/jets.hpp"

namespace bfcone {

HessianResult hessian(const JetField& fn, std::span<const double> point) {
  const int n = static_cast<int>(point.size());
  if (n > kMaxVars) throw Error(ErrorKind::InvalidInput, "too many jet variables");
  std::vector<Jet2> x;
  x.reserve(n);
  for (int i = 0; i < n; ++i) x.push_back(Jet2::variable(point[i], i, n));
  Jet2 y = fn(x);
  HessianResult out;
  out.value = y.value();
  out.grad.resize(n);
  out.hess.assign(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    out.grad[i] = y.grad(i);
    for (int k = 0; k < n; ++k) out.hess[i][k] = y.hess(i, k);
  }
  return out;
}

Jet1r deriv_r(const std::function<Dual2<double>(const Dual2<double>&)>& fn, double r0) {
  Dual2<double> y = fn(Dual2<double>::variable(r0));
  return {y.v, y.d, y.dd};
}

}  // namespace bfcone

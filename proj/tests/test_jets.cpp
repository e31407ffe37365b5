#include <doctest.h>

#include <cmath>

#include "bfcone/jets.hpp"

using bfcone::Dual2;
using bfcone::Jet2;

namespace {

// f(x, y) = exp(x) sin(y) / (1 + x^2), derivatives written out by hand.
struct Oracle {
  double x, y;
  double f() const { return std::exp(x) * std::sin(y) / (1 + x * x); }
  double fx() const {
    const double d = 1 + x * x;
    return std::exp(x) * std::sin(y) * (d - 2 * x) / (d * d);
  }
  double fy() const { return std::exp(x) * std::cos(y) / (1 + x * x); }
  double fyy() const { return -f(); }
  double fxy() const {
    const double d = 1 + x * x;
    return std::exp(x) * std::cos(y) * (d - 2 * x) / (d * d);
  }
  double fxx() const {
    // h(x) = e^x (1 - 2x + x^2) / (1 + x^2)^2 = e^x (x-1)^2 / d^2
    const double d = 1 + x * x;
    const double h1 = std::exp(x) * ((x - 1) * (x - 1) + 2 * (x - 1)) / (d * d) -
                      std::exp(x) * (x - 1) * (x - 1) * 4 * x / (d * d * d);
    return std::sin(y) * h1;
  }
};

}  // namespace

TEST_CASE("jet gradient and hessian against hand derivatives") {
  for (double x : {-0.7, 0.2, 1.3})
    for (double y : {-1.1, 0.4}) {
      const Jet2 X = Jet2::variable(x, 0, 2), Y = Jet2::variable(y, 1, 2);
      const Jet2 F = exp(X) * sin(Y) / (1.0 + X * X);
      const Oracle o{x, y};
      CHECK(F.value() == doctest::Approx(o.f()).epsilon(1e-14));
      CHECK(F.grad(0) == doctest::Approx(o.fx()).epsilon(1e-13));
      CHECK(F.grad(1) == doctest::Approx(o.fy()).epsilon(1e-13));
      CHECK(F.hess(0, 0) == doctest::Approx(o.fxx()).epsilon(1e-12));
      CHECK(F.hess(0, 1) == doctest::Approx(o.fxy()).epsilon(1e-12));
      CHECK(F.hess(1, 0) == doctest::Approx(o.fxy()).epsilon(1e-12));
      CHECK(F.hess(1, 1) == doctest::Approx(o.fyy()).epsilon(1e-12));
    }
}

TEST_CASE("jet hessian matches central differences of the gradient") {
  auto grad = [](double a, double b, double c) {
    const Jet2 A = Jet2::variable(a, 0, 3), B = Jet2::variable(b, 1, 3), C = Jet2::variable(c, 2, 3);
    return sqrt(A * A + B * B + 1.0) * log(2.0 + C * C) + tanh(A * B) - cos(C) / (1.0 + B * B);
  };
  const double p[3] = {0.3, -0.8, 0.5};
  const Jet2 F = grad(p[0], p[1], p[2]);
  const double h = 1e-5;
  for (int i = 0; i < 3; ++i) {
    double pp[3] = {p[0], p[1], p[2]}, pm[3] = {p[0], p[1], p[2]};
    pp[i] += h;
    pm[i] -= h;
    const Jet2 Fp = grad(pp[0], pp[1], pp[2]), Fm = grad(pm[0], pm[1], pm[2]);
    CHECK(F.grad(i) == doctest::Approx((Fp.value() - Fm.value()) / (2 * h)).epsilon(1e-8));
    for (int k = 0; k < 3; ++k)
      CHECK(F.hess(i, k) == doctest::Approx((Fp.grad(k) - Fm.grad(k)) / (2 * h)).epsilon(1e-7));
  }
}

TEST_CASE("jet of a constant has no derivatives") {
  const Jet2 c(3.5, 4);
  const Jet2 x = Jet2::variable(1.0, 2, 4);
  const Jet2 s = c * x;
  CHECK(s.grad(2) == doctest::Approx(3.5));
  CHECK(s.grad(0) == 0.0);
  CHECK(s.hess(2, 2) == 0.0);
}

TEST_CASE("division by a zero jet throws") {
  const Jet2 z(0.0, 1);
  CHECK_THROWS_AS(1.0 / z, bfcone::Error);
}

TEST_CASE("dual2 first and second derivatives") {
  using D = Dual2<double>;
  const double t = 0.6;
  const D x = D::variable(t);
  const D f = exp(2.0 * x) / (1.0 + x * x);
  const double d = 1 + t * t;
  const double e = std::exp(2 * t);
  const double f1 = e * (2 * d - 2 * t) / (d * d);
  CHECK(f.v == doctest::Approx(e / d).epsilon(1e-14));
  CHECK(f.d == doctest::Approx(f1).epsilon(1e-13));
  // central difference of the first derivative
  const double h = 1e-5;
  const D fp = exp(2.0 * D::variable(t + h)) / (1.0 + D::variable(t + h) * D::variable(t + h));
  const D fm = exp(2.0 * D::variable(t - h)) / (1.0 + D::variable(t - h) * D::variable(t - h));
  CHECK(f.dd == doctest::Approx((fp.d - fm.d) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("nested dual over jet gives mixed radial derivatives") {
  // F(r, x) = r^3 x^2: d/dr d/dx = 6 r^2 x
  using D = Dual2<Jet2>;
  const double r0 = 1.2, x0 = -0.4;
  const D r = D::variable(Jet2(r0, 1));
  const Jet2 x = Jet2::variable(x0, 0, 1);
  const D F = r * r * r * D(x * x);
  CHECK(F.v.value() == doctest::Approx(r0 * r0 * r0 * x0 * x0));
  CHECK(F.d.value() == doctest::Approx(3 * r0 * r0 * x0 * x0));
  CHECK(F.d.grad(0) == doctest::Approx(6 * r0 * r0 * x0));
  CHECK(F.dd.value() == doctest::Approx(6 * r0 * x0 * x0));
}

#include <doctest.h>

#include <algorithm>
#include <random>

#include <Eigen/Dense>

#include "bfcone/polyalg.hpp"

using namespace bfcone;
using cd = std::complex<double>;

namespace {

// Jordan matrix conjugated by a fixed well-conditioned matrix.
Eigen::MatrixXcd jordan_conj(const std::vector<std::pair<cd, int>>& blocks, std::uint64_t seed) {
  int n = 0;
  for (const auto& b : blocks) n += b.second;
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n, n);
  int at = 0;
  for (const auto& [v, k] : blocks) {
    for (int i = 0; i < k; ++i) {
      J(at + i, at + i) = v;
      if (i + 1 < k) J(at + i, at + i + 1) = 1.0;
    }
    at += k;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) S(i, k) += cd(u(rng), u(rng));
  return S * J * S.inverse();
}

}  // namespace

TEST_CASE("from_roots and roots round trip") {
  const std::vector<cd> rs{cd(-2.0), cd(0.5), cd(1.0, 2.0), cd(1.0, -2.0), cd(3.0)};
  const RealPoly p = RealPoly::from_roots(rs);
  CHECK(p.degree() == 5);
  CHECK(p.leading() == doctest::Approx(1.0));
  auto got = roots(p);
  REQUIRE(got.size() == rs.size());
  for (const auto& r : rs) {
    double best = 1e300;
    for (const auto& g : got) best = std::min(best, std::abs(g - r));
    CHECK(best < 1e-12);
  }
  const auto real = real_roots(p);
  REQUIRE(real.size() == 3);
  CHECK(real[0] == doctest::Approx(-2.0));
  CHECK(real[1] == doctest::Approx(0.5));
  CHECK(real[2] == doctest::Approx(3.0));
}

TEST_CASE("polynomial arithmetic") {
  const RealPoly a({1.0, -3.0, 0.0, 2.0});  // 2t^3 - 3t + 1
  const RealPoly b({-1.0, 1.0});            // t - 1
  const auto [q, r] = a.divmod(b);
  CHECK(r.max_abs_coeff() < 1e-14);  // t = 1 is a root
  CHECK(coeff_distance(q * b, a) < 1e-14);
  for (double t : {-1.3, 0.2, 2.7}) {
    CHECK(a.shifted(0.4)(t) == doctest::Approx(a(t + 0.4)));
    CHECK(a.scaled_arg(-1.5)(t) == doctest::Approx(a(-1.5 * t)));
    const double h = 1e-6;
    CHECK(a.derivative()(t) == doctest::Approx((a(t + h) - a(t - h)) / (2 * h)).epsilon(1e-8));
  }
  CHECK(a.monic().leading() == 1.0);
  CHECK((a - a).is_zero());
  CHECK(RealPoly::monomial(3, 2.0).coeff(3) == 2.0);
}

TEST_CASE("elementary symmetric functions") {
  const RealPoly p = RealPoly::from_roots({cd(1.0), cd(2.0), cd(4.0)});
  CHECK(elementary_symmetric(p, 1) == doctest::Approx(7.0));
  CHECK(elementary_symmetric(p, 2) == doctest::Approx(2.0 + 4.0 + 8.0));
  CHECK(elementary_symmetric(p, 3) == doctest::Approx(8.0));
}

TEST_CASE("characteristic polynomial agrees with det(tI - A)") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd A(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) A(i, k) = nd(rng);
  const RealPoly Q = characteristic_polynomial(A);
  for (double t : {-2.0, 0.3, 1.7}) {
    const cd det = (t * Eigen::MatrixXcd::Identity(4, 4) - A).determinant();
    CHECK(std::abs(Q(cd(t)) - det) < 1e-10 * std::max(1.0, std::abs(det)));
  }
}

TEST_CASE("minimal polynomial follows the Jordan structure") {
  // blocks: 2 of size 2 and 1 at eigenvalue 1, size 3 at -0.5 -> q = (t-1)^2 (t+0.5)^3
  const Eigen::MatrixXcd A = jordan_conj({{cd(1.0), 2}, {cd(1.0), 1}, {cd(-0.5), 3}}, 11);
  const RealPoly q = minimal_polynomial(A);
  const RealPoly want = RealPoly::from_roots({cd(1.0), cd(1.0), cd(-0.5), cd(-0.5), cd(-0.5)});
  CHECK(coeff_distance(q, want) < 1e-6);
  CHECK(eval_matrix(q, A).norm() < 1e-6);
  const RealPoly Q = characteristic_polynomial(A);
  CHECK(Q.degree() == 6);

  const auto cl = cluster_spectrum(A);
  REQUIRE(cl.size() == 2);
  const auto& one = std::abs(cl[0].value - 1.0) < 1e-4 ? cl[0] : cl[1];
  const auto& half = std::abs(cl[0].value - 1.0) < 1e-4 ? cl[1] : cl[0];
  CHECK(one.alg_mult == 3);
  CHECK(one.block == 2);
  CHECK(half.alg_mult == 3);
  CHECK(half.block == 3);
}

TEST_CASE("diagonalizable matrix with a complex pair") {
  const Eigen::MatrixXcd A = jordan_conj({{cd(0.0, 1.0), 1}, {cd(0.0, -1.0), 1}, {cd(2.0), 1}}, 3);
  const RealPoly q = minimal_polynomial(A);
  CHECK(q.degree() == 3);
  CHECK(coeff_distance(q, RealPoly({-2.0, 1.0, -2.0, 1.0})) < 1e-8);  // (t^2 + 1)(t - 2)
}

TEST_CASE("matrix polynomial evaluation and product") {
  Eigen::MatrixXcd c0 = Eigen::MatrixXcd::Identity(2, 2), c1(2, 2);
  c1 << 0.0, 1.0, 2.0, 0.0;
  const MatrixPoly M({c0, c1});
  const RealPoly p({1.0, 1.0});
  const MatrixPoly P = M * p;
  const cd t(0.7);
  CHECK((P.eval(t) - M.eval(t) * p(t)).norm() < 1e-14);
}

#include <doctest.h>

#include <random>

#include "bfcone/error.hpp"
#include "bfcone/indefherm.hpp"

using namespace bfcone;
using cd = std::complex<double>;

namespace {

Eigen::VectorXcd null_vector(int mdim, std::mt19937_64& rng) {
  return NullPoint(random_unit(mdim + 1, rng)).w();
}

// Rank-one nilpotent N x = (x, v) v with v null.
Eigen::MatrixXcd null_nilpotent(const HermForm& form, const Eigen::VectorXcd& v) {
  return v * v.adjoint() * form.eta();
}

}  // namespace

TEST_CASE("pairing has signature (m+1, 1)") {
  const HermForm h{2};
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(4), e1 = Eigen::VectorXcd::Zero(4);
  e0(0) = 1.0;
  e1(1) = 1.0;
  CHECK(h.pair(e0, e0).real() == doctest::Approx(-1.0));
  CHECK(h.pair(e1, e1).real() == doctest::Approx(1.0));
  std::mt19937_64 rng(1);
  const Eigen::VectorXcd w = null_vector(2, rng);
  CHECK(std::abs(h.pair(w, w)) < 1e-14);
  // sesquilinear: linear in the first slot
  const cd a(0.3, -1.2);
  CHECK(std::abs(h.pair(a * e1, e1) - a) < 1e-15);
}

TEST_CASE("random generators respect the form") {
  std::mt19937_64 rng(7);
  for (int mdim : {1, 2, 3}) {
    const HermForm h{mdim};
    const HermOp A(random_eta_hermitian(h, rng), h);
    CHECK(A.hermitian_residual() < 1e-13);
    CHECK(std::abs(A.trace()) < 1e-13);
    const Eigen::MatrixXcd U = random_eta_unitary(h, rng);
    const Eigen::VectorXcd x = random_unit(mdim + 2, rng), y = random_unit(mdim + 2, rng);
    CHECK(std::abs(h.pair(U * x, U * y) - h.pair(x, y)) < 1e-12);
  }
}

TEST_CASE("non-hermitian input is rejected") {
  const HermForm h{1};
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
  m(0, 1) = 1.0;
  const HermOp A(m, h);
  CHECK_THROWS_AS(A.require_hermitian(1e-8), Error);
}

TEST_CASE("classification of the four types, stable under eta-unitary conjugation") {
  std::mt19937_64 rng(3);
  const HermForm h{2};
  Eigen::MatrixXcd ell = Eigen::MatrixXcd::Zero(4, 4);
  ell.diagonal() << -3.0, 1.0, 0.5, 1.5;
  Eigen::MatrixXcd hyp = Eigen::MatrixXcd::Zero(4, 4);
  hyp(0, 1) = 1.0;
  hyp(1, 0) = -1.0;  // eigenvalues +- i on span(e0, e1)
  hyp(2, 2) = 0.5;
  hyp(3, 3) = -0.5;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(0) = 1.0;
  v(1) = 1.0;
  const Eigen::MatrixXcd par1 = null_nilpotent(h, v) + 0.25 * Eigen::MatrixXcd::Identity(4, 4);
  // 3-step nilpotent on span(e0, e1, e2): N e2 ~ v, N v = 0 twisted by a spacelike vector
  Eigen::MatrixXcd par2 = Eigen::MatrixXcd::Zero(4, 4);
  {
    Eigen::VectorXcd s = Eigen::VectorXcd::Zero(4);
    s(2) = 1.0;
    // N = v (.,s) + s (.,v): hermitian, N^2 = v (.,v)... (v,v) = 0 so N^3 = 0
    par2 = v * s.adjoint() * h.eta() + s * v.adjoint() * h.eta();
  }
  struct Case {
    Eigen::MatrixXcd m;
    OpKind kind;
  };
  const std::vector<Case> cases{{ell, OpKind::Elliptic}, {hyp, OpKind::Hyperbolic}, {par1, OpKind::Parabolic1},
                                {par2, OpKind::Parabolic2}};
  for (const auto& c : cases) {
    REQUIRE(HermOp(c.m, h).hermitian_residual() < 1e-14);
    CHECK(classify(HermOp(c.m, h)).kind == c.kind);
    const Eigen::MatrixXcd U = random_eta_unitary(h, rng, 0.3);
    const Eigen::MatrixXcd conj = U * c.m * U.inverse();
    CHECK(classify(HermOp(conj, h), 1e-6).kind == c.kind);
  }
  const ClassLabel p2 = classify(HermOp(par2, h));
  int maxblock = 0;
  for (const auto& cl : p2.spectrum) maxblock = std::max(maxblock, cl.block);
  CHECK(maxblock == 3);
}

TEST_CASE("reduced adjoint satisfies (tI - A) a(t) = q(t) I") {
  std::mt19937_64 rng(9);
  const HermForm h{2};
  for (int trial = 0; trial < 5; ++trial) {
    const HermOp A(random_eta_hermitian(h, rng), h);
    const RealPoly q = minimal_polynomial(A.matrix());
    const MatrixPoly a = reduced_adjoint(A);
    CHECK(a.degree() == q.degree() - 1);
    for (double t : {-0.9, 0.4, 2.2}) {
      const Eigen::MatrixXcd lhs = (t * Eigen::MatrixXcd::Identity(4, 4) - A.matrix()) * a.eval(t);
      const Eigen::MatrixXcd rhs = q(t) * Eigen::MatrixXcd::Identity(4, 4);
      CHECK((lhs - rhs).norm() < 1e-9 * std::max(1.0, rhs.norm()));
    }
  }
}

TEST_CASE("p_A at a null point is monic of degree deg q - 2") {
  std::mt19937_64 rng(21);
  const HermForm h{2};
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m.diagonal() << -1.5, -0.5, 0.5, 1.5;
  const HermOp A(m, h);
  const NullPoint x(random_unit(3, rng));
  const RealPoly p = pA_poly(A, x);
  CHECK(p.degree() == 2);
  CHECK(p.leading() == doctest::Approx(1.0));
  // independent evaluation of (a(t) w, w) / (A w, w) with a(t) = q(t) (tI - A)^-1
  const RealPoly q = minimal_polynomial(m);
  const Eigen::VectorXcd w = x.w();
  for (double t : {0.1, 0.9, 3.0}) {
    const Eigen::MatrixXcd R = (t * Eigen::MatrixXcd::Identity(4, 4) - m).inverse() * q(t);
    const cd want = h.pair(R * w, w) / h.pair(m * w, w);
    CHECK(std::abs(p(t) - want.real()) < 1e-10 * std::max(1.0, std::abs(want)));
    CHECK(std::abs(want.imag()) < 1e-10);
  }
}

TEST_CASE("identitate: only multiples of the identity vanish on the null cone") {
  for (int mdim : {1, 2}) {
    const HermForm h{mdim};
    CHECK(identitate_nullspace(100, 4, h, true) == 0);
    CHECK(identitate_nullspace(100, 4, h, false) == 1);
  }
}

TEST_CASE("null point rejects zero direction") {
  CHECK_THROWS_AS(NullPoint(Eigen::VectorXcd::Zero(3)), Error);
}

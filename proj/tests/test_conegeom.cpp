#include <doctest.h>

#include "bfcone/bochner.hpp"
#include "bfcone/conegeom.hpp"
#include "bfcone/families.hpp"

using namespace bfcone;

namespace {

// Coordinate curvature from central differences of the metric alone:
// R_abcd = 1/2 (g_ad,bc + g_bc,ad - g_ac,bd - g_bd,ac) + g_ef (G^e_bc G^f_ad - G^e_bd G^f_ac)
std::vector<double> fd_curvature(const OperatorFamily& fam, const ConeChartPoint& z, double h) {
  const Eigen::VectorXd x0 = z.real();
  const int n = static_cast<int>(x0.size());
  auto g_at = [&](const Eigen::VectorXd& x) { return metric(fam, ConeChartPoint::from_real(x)); };
  const Eigen::MatrixXd g0 = g_at(x0);
  std::vector<Eigen::MatrixXd> dg(n);
  std::vector<std::vector<Eigen::MatrixXd>> ddg(n, std::vector<Eigen::MatrixXd>(n));
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(n, i) * h;
    dg[i] = (g_at(x0 + e) - g_at(x0 - e)) / (2 * h);
    ddg[i][i] = (g_at(x0 + e) - 2 * g0 + g_at(x0 - e)) / (h * h);
    for (int k = 0; k < i; ++k) {
      Eigen::VectorXd f = Eigen::VectorXd::Unit(n, k) * h;
      ddg[i][k] = (g_at(x0 + e + f) - g_at(x0 + e - f) - g_at(x0 - e + f) + g_at(x0 - e - f)) / (4 * h * h);
      ddg[k][i] = ddg[i][k];
    }
  }
  // first-kind symbols G_{e,bc} = 1/2 (g_eb,c + g_ec,b - g_bc,e), raised by g^-1
  const Eigen::MatrixXd gi = g0.inverse();
  std::vector<double> G1(n * n * n), G2(n * n * n);
  for (int e = 0; e < n; ++e)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) G1[(e * n + b) * n + c] = 0.5 * (dg[c](e, b) + dg[b](e, c) - dg[e](b, c));
  for (int e = 0; e < n; ++e)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int f = 0; f < n; ++f) s += gi(e, f) * G1[(f * n + b) * n + c];
        G2[(e * n + b) * n + c] = s;
      }
  std::vector<double> R(n * n * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = 0.5 * (ddg[b][c](a, d) + ddg[a][d](b, c) - ddg[b][d](a, c) - ddg[a][c](b, d));
          for (int e = 0; e < n; ++e)
            v += G1[(e * n + a) * n + d] * G2[(e * n + b) * n + c] - G1[(e * n + a) * n + c] * G2[(e * n + b) * n + d];
          R[((a * n + b) * n + c) * n + d] = v;
        }
  return R;
}

}  // namespace

TEST_CASE("flat family: identity metric, vanishing curvature") {
  const OperatorFamily fam(example_spec(ExampleName::Flat, {}), true);
  for (const auto& z : sample_domain(fam, 20, 3)) {
    const Eigen::MatrixXd g = metric(fam, z);
    CHECK((g - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(tensor_norm(riemann(fam, z)) < 1e-8);
    const FG fg = f_and_G(fam, z);
    CHECK(fg.f == doctest::Approx(1.0));
  }
}

TEST_CASE("coordinate curvature agrees with finite differences of the metric") {
  const std::vector<FamilySpec> specs{example_spec(ExampleName::Einstein, {1.0, 1.0}),
                                      example_spec(ExampleName::Bryant, {1.0, 2.0, 3.0})};
  for (const auto& s : specs) {
    CAPTURE(s.name);
    const OperatorFamily fam(s, true);
    const ConeChartPoint z = sample_domain(fam, 1, 17)[0];
    const Curv4 R = riemann_coordinate(fam, z);
    const std::vector<double> F = fd_curvature(fam, z, 2e-4);
    double scale = 0.0, dplus = 0.0, dminus = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
      scale = std::max(scale, std::abs(F[i]));
      dplus = std::max(dplus, std::abs(R.data()[i] - F[i]));
      dminus = std::max(dminus, std::abs(R.data()[i] + F[i]));
    }
    REQUIRE(scale > 1e-3);
    // same tensor up to the index convention's overall sign
    CHECK(std::min(dplus, dminus) / scale < 1e-5);
  }
}

TEST_CASE("Kahler structure at sample points") {
  const std::vector<FamilySpec> specs{example_spec(ExampleName::WProj, {1.0, 2.0, 3.0, 4.0}),
                                      example_spec(ExampleName::Einstein, {1.0, 2.0})};
  for (const auto& s : specs) {
    CAPTURE(s.name);
    const OperatorFamily fam(s, true);
    for (const auto& z : sample_domain(fam, 5, 9)) {
      const FramePoint fp = frame(fam, z);
      const Eigen::MatrixXd g = metric(fam, z);
      const Eigen::MatrixXd w = omega(fam, z);
      const Eigen::MatrixXd& J = fp.Jmat;
      const double gs = g.cwiseAbs().maxCoeff();
      CHECK((J * J + Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((J.transpose() * g * J - g).cwiseAbs().maxCoeff() < 1e-10 * gs);
      CHECK((g - w * J).cwiseAbs().maxCoeff() < 1e-10 * gs);
      CHECK(d_omega_residual(fam, z) < 1e-8 * w.cwiseAbs().maxCoeff());
      // JV = T; V and T span the vertical plane with |V|^2 = |T|^2 = r^2 f
      CHECK((J * fp.V - fp.T).norm() < 1e-10 * fp.T.norm());
      CHECK(fp.V.dot(g * fp.V) == doctest::Approx(z.r() * z.r() * fp.f).epsilon(1e-10));
      CHECK(fp.T.dot(g * fp.T) == doctest::Approx(z.r() * z.r() * fp.f).epsilon(1e-10));
      const std::complex<double> tu = fp.uc.dot(fp.tc);  // <T, u> = sum T_j conj(u_j)
      CHECK(std::abs(tu.real()) < 1e-10 * fp.T.norm());
      CHECK(tu.imag() == doctest::Approx(z.r() * fp.b).epsilon(1e-10));
    }
  }
}

TEST_CASE("curvature has the Kahler symmetries") {
  const OperatorFamily fam(example_spec(ExampleName::Tachibana, {0.25}), true);
  for (const auto& z : sample_domain(fam, 3, 5)) {
    const Curv4 R = riemann(fam, z);
    const KahlerResiduals k = kahler_residuals(R);
    const double n = tensor_norm(R);
    CHECK(k.antisym < 1e-9 * n);
    CHECK(k.pair < 1e-9 * n);
    CHECK(k.bianchi < 1e-9 * n);
    CHECK(k.j_invariance < 1e-9 * n);
  }
}

TEST_CASE("the calibrated sign is -1 and stable") {
  CHECK(curvature_sign() == -1);
  CHECK(curvature_sign() == -1);
}

TEST_CASE("domain membership") {
  const OperatorFamily fam(example_spec(ExampleName::Flat, {}), true);
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(3);
  CHECK(!domain_contains(fam, z, 1e-3));
  z(0) = 1.0;
  CHECK(domain_contains(fam, z, 1e-3));
  z(0) = 0.5;  // on the lower end of J
  CHECK(!domain_contains(fam, z, 1e-3));
  z(0) = 3.0;
  CHECK(!domain_contains(fam, z, 1e-3));
}

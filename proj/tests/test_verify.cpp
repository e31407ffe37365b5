#include <doctest.h>

#include <set>

#include "bfcone/error.hpp"
#include "bfcone/specio.hpp"
#include "bfcone/tls.hpp"
#include "bfcone/verify.hpp"

using namespace bfcone;

namespace {

const CheckResult* find(const Report& r, const std::string& id) {
  for (const auto& c : r.checks)
    if (c.id == id) return &c;
  return nullptr;
}

json noncommuting_spec() {
  // case-1 diagonal B plus an eta-hermitian piece mixing e_0 and e_1; |[A,B]| = 0.1
  return json::parse(R"({
    "name": "noncommuting", "mdim": 2, "case": 1,
    "B": {"type": "matrix", "matrix": [[-1.5, 0.1414213562373095, 0.0, 0.0],
                                       [-0.1414213562373095, -0.5, 0.0, 0.0],
                                       [0.0, 0.0, 0.5, 0.0],
                                       [0.0, 0.0, 0.0, 1.5]]}
  })");
}

}  // namespace

TEST_CASE("catalog lists every identity once with its tolerance") {
  const auto& cat = catalog();
  std::set<std::string> ids;
  for (const auto& e : cat) {
    CHECK(ids.insert(e.id).second);
    CHECK(!e.anchor.empty());
    CHECK(e.tolerance > 0.0);
  }
  for (const char* id : {"I1", "I2", "I3", "I4", "I5", "I6", "I7", "I8", "I9", "I10", "I11", "I12a", "I12b", "I12c",
                         "I13", "I14", "I15", "I16", "I17", "I18", "I19", "I20", "I21", "I22", "I23", "I24", "I25"})
    CHECK(ids.count(id) == 1);
  CHECK(catalog_entry("I1").tolerance == 1e-10);
  CHECK(catalog_entry("I21").tolerance == 1e-6);
  CHECK(catalog_entry("I13").tolerance == 1e-4);
  CHECK(catalog_entry("I19").per_family);
  CHECK_THROWS_AS(catalog_entry("I99"), Error);
}

TEST_CASE("spec JSON round trip and strict schema") {
  const json j = json::parse(R"({"name": "x", "mdim": 2, "case": 3, "J": [1.0, 1.5],
      "B": {"type": "parabolic", "alpha": 3, "mu": [[0.4, 0.2]], "betas": [{"value": 1.5, "mult": 1}]},
      "samples": 7, "seed": 9, "tolerances": {"I21": 1e-5}})");
  const FamilySpec s = spec_from_json(j);
  CHECK(s.family_case == 3);
  CHECK(s.samples == 7);
  CHECK(s.seed == 9);
  REQUIRE(s.interval);
  CHECK(s.interval->second == 1.5);
  CHECK(s.tolerances.at("I21") == 1e-5);
  const auto& p = std::get<ParabolicB>(s.b);
  CHECK(p.mu.at(0) == std::complex<double>(0.4, 0.2));
  const FamilySpec back = spec_from_json(spec_to_json(s));
  CHECK(spec_to_json(back).dump() == spec_to_json(s).dump());

  json bad = j;
  bad["colour"] = "red";
  CHECK_THROWS_AS(spec_from_json(bad), Error);
  bad = j;
  bad["case"] = 7;
  CHECK_THROWS_AS(spec_from_json(bad), Error);
  bad = j;
  bad["B"]["type"] = "weird";
  CHECK_THROWS_AS(spec_from_json(bad), Error);
  CHECK_THROWS_AS(read_json_file("/nonexistent/spec.json"), Error);
}

TEST_CASE("operator files") {
  const OperatorFile f = operator_from_json(json::parse(R"({"mdim": 1, "matrix": [[-1, 1, 0], [-1, 1, 0], [0, 0, [0, 0]]]})"));
  CHECK(f.mdim == 1);
  CHECK(f.matrix.rows() == 3);
  CHECK_THROWS_AS(operator_from_json(json::parse(R"({"mdim": 2, "matrix": [[1, 0], [0, 1]]})")), Error);
  const json m = matrix_to_json(f.matrix);
  CHECK(m[0][1][0] == 1.0);
}

TEST_CASE("Tachibana-Liu constants for kbar = 1/4") {
  const FamilySpec s = example_spec(ExampleName::Tachibana, {0.25});
  const TlsCoefficients c = tls_coefficients(s);
  CHECK(c.a == doctest::Approx(1.0));
  CHECK(c.l1 == doctest::Approx(1.0));
  CHECK(c.l2 == doctest::Approx(-2.0));
  for (double x0 : {0.4, 1.0, 2.5}) {
    const TlsResidual r = tls_residual(s, x0);
    CHECK(r.newton < 1e-10);
    CHECK(r.ode < 1e-8);
    CHECK(r.x == doctest::Approx(x0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(tls_coefficients(example_spec(ExampleName::Bryant, {1.0, 2.0, 3.0})), Error);
}

TEST_CASE("suite on an Einstein family passes everything applicable") {
  SuiteOptions opt;
  opt.samples = 6;
  opt.threads = 2;
  const Report r = run_suite(example_spec(ExampleName::Einstein, {1.0, 1.0}), opt);
  CHECK(r.build_error.empty());
  CHECK(r.n_fail == 0);
  CHECK(r.n_pass == static_cast<int>(r.checks.size()));
  CHECK(r.all_pass());
  CHECK(find(r, "I10") == nullptr);  // case 3/4 only
  REQUIRE(find(r, "I21") != nullptr);
  CHECK(find(r, "I21")->n_samples == 6);
  CHECK(!r.seconds);
}

TEST_CASE("report is independent of the thread count") {
  const FamilySpec s = spec_from_json(json::parse(
      R"({"mdim": 2, "case": 4, "lambda": -0.5, "B": {"type": "parabolic", "alpha": 1, "mu": [0, 0]}, "samples": 5})"));
  SuiteOptions a, b;
  a.threads = 1;
  b.threads = 3;
  const Report ra = run_suite(s, a), rb = run_suite(s, b);
  CHECK(report_json(ra).dump(2) == report_json(rb).dump(2));
  CHECK(report_csv(ra) == report_csv(rb));
  CHECK(ra.all_pass());
}

TEST_CASE("report layout") {
  SuiteOptions opt;
  opt.ids = std::vector<std::string>{"I1", "I19"};
  opt.samples = 3;
  opt.timing = true;
  const Report r = run_suite(example_spec(ExampleName::Flat, {}), opt);
  const json j = report_json(r);
  CHECK(j.contains("spec"));
  CHECK(j["env"]["seed"] == 1);
  CHECK(j["env"]["sign_convention"] == "-1");
  REQUIRE(j["checks"].size() == 2);
  CHECK(j["checks"][0]["id"] == "I1");
  for (const char* k : {"id", "n_samples", "max_residual", "tolerance", "pass", "notes"})
    CHECK(j["checks"][0].contains(k));
  CHECK(j["summary"]["pass"] == 2);
  CHECK(j["summary"]["seconds"].is_number());
  const std::string csv = report_csv(r);
  CHECK(csv.rfind("check,anchor,sample,residual,tolerance,pass\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 + 1);
}

TEST_CASE("empty selection and unknown ids") {
  SuiteOptions opt;
  opt.ids = std::vector<std::string>{};
  const Report r = run_suite(example_spec(ExampleName::Flat, {}), opt);
  CHECK(r.checks.empty());
  CHECK(r.all_pass());
  opt.ids = std::vector<std::string>{"I1", "nope"};
  CHECK_THROWS_AS(run_suite(example_spec(ExampleName::Flat, {}), opt), Error);
}

TEST_CASE("incompatible identities are refused by run_identity") {
  const OperatorFamily fam(example_spec(ExampleName::Bryant, {1.0, 2.0, 3.0}), true);
  const auto pts = sample_domain(fam, 2, 1);
  CHECK_THROWS_AS(run_identity("I10", fam, pts), Error);
  CHECK_THROWS_AS(run_identity("I23", fam, pts), Error);  // unequal spacelike eigenvalues
  const CheckResult c = run_identity("I1", fam, pts);
  CHECK(c.pass);
  CHECK(c.residuals.size() == 2);
}

TEST_CASE("flat family passes curvature checks vacuously with a note") {
  const OperatorFamily fam(example_spec(ExampleName::Flat, {}), true);
  const CheckResult c = run_identity("I21", fam, sample_domain(fam, 3, 1));
  CHECK(c.pass);
  CHECK(c.notes.find("below floor") != std::string::npos);
}

TEST_CASE("negative control: a non-commuting B breaks I19, I20 and I21") {
  const FamilySpec s = spec_from_json(noncommuting_spec());
  SuiteOptions opt;
  opt.ids = std::vector<std::string>{"I19", "I20", "I21", "I1"};
  const Report r = run_suite(s, opt);
  CHECK(r.build_error.empty());
  REQUIRE(find(r, "I19") != nullptr);
  CHECK(!find(r, "I19")->pass);
  CHECK(find(r, "I19")->notes.find("[A,B]") != std::string::npos);
  CHECK(OperatorFamily(s, false).commutator_norm() == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(!find(r, "I21")->pass);
  CHECK(find(r, "I1")->pass);
  CHECK(!r.all_pass());
}

TEST_CASE("perturbed family fails the radial condition") {
  json j = json::parse(R"({"mdim": 2, "case": 1, "B": {"type": "diagonal", "eigenvalues": [-1.5, -0.5, 0.5, 1.5]},
      "perturbation": {"scale": 0.1, "matrix": [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}})");
  SuiteOptions opt;
  opt.ids = std::vector<std::string>{"I19", "I20", "I21"};
  opt.samples = 8;
  const Report r = run_suite(spec_from_json(j), opt);
  CHECK(!find(r, "I19")->pass);
  CHECK(!find(r, "I20")->pass);
  CHECK(!find(r, "I21")->pass);
}

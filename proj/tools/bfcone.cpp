// Command-line front end: classify, verify, polys, example, scan.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bfcone/error.hpp"
#include "bfcone/families.hpp"
#include "bfcone/indefherm.hpp"
#include "bfcone/specio.hpp"
#include "bfcone/verify.hpp"

using namespace bfcone;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  out << text;
}

std::string cx_string(std::complex<double> c) {
  std::ostringstream os;
  os.precision(12);
  os << c.real();
  if (c.imag() != 0.0) os << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
  return os.str();
}

int cmd_classify(const std::string& path, double tol, bool as_json) {
  const OperatorFile f = operator_from_json(read_json_file(path));
  const HermOp op(f.matrix, HermForm{f.mdim});
  const ClassLabel label = classify(op, tol);
  const RealPoly q = minimal_polynomial(f.matrix, tol);
  const RealPoly Q = characteristic_polynomial(f.matrix, tol);
  if (as_json) {
    json j;
    j["kind"] = to_string(label.kind);
    j["spectrum"] = json::array();
    for (const auto& c : label.spectrum)
      j["spectrum"].push_back({{"value", json::array({c.value.real(), c.value.imag()})},
                               {"alg_mult", c.alg_mult},
                               {"block", c.block}});
    j["q"] = q.coeffs();
    j["Q"] = Q.coeffs();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "kind: " << to_string(label.kind) << "\n";
    for (const auto& c : label.spectrum)
      std::cout << "eigenvalue " << cx_string(c.value) << " mult " << c.alg_mult << " block " << c.block << "\n";
    std::cout << "q = " << q.to_string() << "\n";
    std::cout << "Q = " << Q.to_string() << "\n";
  }
  return kExitPass;
}

std::optional<std::vector<std::string>> id_selection(const std::vector<std::string>& raw, bool given) {
  if (!given) return std::nullopt;
  std::vector<std::string> ids;
  for (const auto& s : raw)
    if (!s.empty() && s != "none") ids.push_back(s == "all" ? std::string() : s);
  if (std::find(ids.begin(), ids.end(), std::string()) != ids.end()) return std::nullopt;
  return ids;
}

void print_summary(const Report& r, std::ostream& os) {
  for (const auto& c : r.checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.id << " (" << c.anchor << ") n=" << c.n_samples
       << " max=" << c.max_residual << " tol=" << c.tolerance;
    if (!c.notes.empty()) os << "  [" << c.notes << "]";
    os << "\n";
  }
  if (!r.build_error.empty()) os << "ERROR " << r.build_error << "\n";
  os << "pass " << r.n_pass << " fail " << r.n_fail << "\n";
}

struct VerifyArgs {
  std::string spec_path;
  std::vector<std::string> ids;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::string out, csv;
  int threads = 0;
  bool timing = false;
};

int cmd_verify(const VerifyArgs& a, bool ids_given) {
  const FamilySpec spec = spec_from_json(read_json_file(a.spec_path));
  SuiteOptions opt;
  opt.ids = id_selection(a.ids, ids_given);
  opt.samples = a.samples;
  opt.seed = a.seed;
  opt.threads = a.threads;
  opt.timing = a.timing;
  const Report r = run_suite(spec, opt);
  const std::string text = report_json(r).dump(2) + "\n";
  if (!a.out.empty()) {
    write_file(a.out, text);
    print_summary(r, std::cout);
  } else {
    std::cout << text;
    print_summary(r, std::cerr);
  }
  if (!a.csv.empty()) write_file(a.csv, report_csv(r));
  if (opt.ids && r.build_error.empty()) {
    for (const auto& id : *opt.ids) {
      const bool ran = std::any_of(r.checks.begin(), r.checks.end(), [&](const CheckResult& c) { return c.id == id; });
      if (!ran) std::cerr << "skipped " << id << ": " << incompatibility(catalog_entry(id), OperatorFamily(spec, false)) << "\n";
    }
  }
  if (!r.build_error.empty()) return kExitInvalid;
  return r.all_pass() ? kExitPass : kExitFail;
}

int cmd_polys(const std::string& path) {
  const FamilySpec spec = spec_from_json(read_json_file(path));
  const PredictedPolys p = predicted_polys(spec);
  std::cout << "p_m = " << p.p_m.to_string() << "\n";
  std::cout << "p_c = " << p.p_c.to_string() << "\n";
  if (!p.note.empty()) std::cout << "note: " << p.note << "\n";
  return kExitPass;
}

int cmd_example(const std::string& name, const std::vector<double>& params, int mdim, bool negative_d,
                std::optional<int> samples, std::optional<std::uint64_t> seed) {
  FamilySpec s = example_spec(parse_example_name(name), params, mdim, negative_d);
  if (samples) s.samples = *samples;
  if (seed) s.seed = *seed;
  std::cout << spec_to_json(s).dump(2) << "\n";
  return kExitPass;
}

// grid: {"base": spec, "vary": {"key": [values...]}, "ids": [...], "samples": n}
int cmd_scan(const std::string& path, const std::string& out_path) {
  const json grid = read_json_file(path);
  if (!grid.is_object() || !grid.contains("base")) throw Error(ErrorKind::InvalidInput, "grid needs a base spec");
  const json vary = grid.value("vary", json::object());
  if (!vary.is_object()) throw Error(ErrorKind::InvalidInput, "vary must be an object of arrays");
  std::vector<std::pair<std::string, json>> axes;
  for (const auto& [k, v] : vary.items()) {
    if (!v.is_array() || v.empty()) throw Error(ErrorKind::InvalidInput, "vary." + k + " must be a non-empty array");
    axes.emplace_back(k, v);
  }
  SuiteOptions opt;
  if (grid.contains("ids")) opt.ids = grid["ids"].get<std::vector<std::string>>();
  if (grid.contains("samples")) opt.samples = grid["samples"].get<int>();

  std::vector<std::size_t> idx(axes.size(), 0);
  json results = json::array();
  bool any_fail = false;
  for (;;) {
    json spec_j = grid["base"];
    json params = json::object();
    for (std::size_t a = 0; a < axes.size(); ++a) {
      spec_j[axes[a].first] = axes[a].second[idx[a]];
      params[axes[a].first] = axes[a].second[idx[a]];
    }
    json row;
    row["params"] = params;
    try {
      const Report r = run_suite(spec_from_json(spec_j), opt);
      row["pass"] = r.n_pass;
      row["fail"] = r.n_fail;
      if (!r.build_error.empty()) row["error"] = r.build_error;
      json failed = json::array();
      for (const auto& c : r.checks)
        if (!c.pass) failed.push_back(c.id);
      row["failed"] = failed;
      any_fail = any_fail || !r.all_pass();
    } catch (const Error& e) {
      row["error"] = e.what();
      any_fail = true;
    }
    std::cout << row.dump() << "\n";
    results.push_back(row);
    std::size_t a = 0;
    while (a < axes.size() && ++idx[a] == axes[a].second.size()) idx[a++] = 0;
    if (a == axes.size()) break;
  }
  if (!out_path.empty()) write_file(out_path, results.dump(2) + "\n");
  return any_fail ? kExitFail : kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bochner-flat generalized Kähler cone verifier"};
  app.require_subcommand(1);

  std::string operator_path;
  double tol = 1e-8;
  bool as_json = false;
  auto* classify_cmd = app.add_subcommand("classify", "classify an eta-hermitian operator");
  classify_cmd->add_option("operator", operator_path, "operator JSON file")->required();
  classify_cmd->add_option("--tol", tol, "spectral clustering tolerance");
  classify_cmd->add_flag("--json", as_json, "JSON output");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "run the identity catalog on a family spec");
  verify_cmd->add_option("spec", va.spec_path, "family spec JSON")->required();
  auto* ids_opt = verify_cmd->add_option("--ids", va.ids, "catalog ids (comma separated; 'all' or 'none')")
                      ->delimiter(',')
                      ->expected(0, -1);
  verify_cmd->add_option("--samples", va.samples, "sample points");
  verify_cmd->add_option("--seed", va.seed, "sampling seed");
  verify_cmd->add_option("--out", va.out, "report JSON path");
  verify_cmd->add_option("--csv", va.csv, "per-sample CSV path");
  verify_cmd->add_option("--threads", va.threads, "worker threads (default BFCONE_THREADS)");
  verify_cmd->add_flag("--timing", va.timing, "record wall time in the report");

  std::string polys_path;
  auto* polys_cmd = app.add_subcommand("polys", "predicted p_m and p_c");
  polys_cmd->add_option("spec", polys_path, "family spec JSON")->required();

  std::string ex_name;
  std::vector<double> ex_params;
  int ex_mdim = 2;
  bool ex_negd = false;
  std::optional<int> ex_samples;
  std::optional<std::uint64_t> ex_seed;
  auto* example_cmd = app.add_subcommand("example", "emit a named example spec");
  example_cmd->add_option("name", ex_name, "flat | bryant | wproj | einstein | tachibana")->required();
  example_cmd->add_option("params", ex_params, "numeric parameters");
  example_cmd->add_option("--mdim", ex_mdim, "mdim where the name does not fix it");
  example_cmd->add_flag("--negative-d", ex_negd, "wproj: use d < 0");
  example_cmd->add_option("--samples", ex_samples, "samples field");
  example_cmd->add_option("--seed", ex_seed, "seed field");

  std::string grid_path, scan_out;
  auto* scan_cmd = app.add_subcommand("scan", "verify over a parameter grid");
  scan_cmd->add_option("grid", grid_path, "grid JSON")->required();
  scan_cmd->add_option("--out", scan_out, "results JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*classify_cmd) return cmd_classify(operator_path, tol, as_json);
    if (*verify_cmd) return cmd_verify(va, ids_opt->count() > 0 || !va.ids.empty());
    if (*polys_cmd) return cmd_polys(polys_path);
    if (*example_cmd) return cmd_example(ex_name, ex_params, ex_mdim, ex_negd, ex_samples, ex_seed);
    if (*scan_cmd) return cmd_scan(grid_path, scan_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

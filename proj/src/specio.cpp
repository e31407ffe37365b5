#include "bfcone/specio.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "bfcone/error.hpp"

namespace bfcone {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) bad(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) bad("unknown key '" + k + "' in " + where);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) bad(what + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& what) {
  if (!j.is_number_integer()) bad(what + " must be an integer");
  return j.get<int>();
}

std::complex<double> complex_entry(const json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  bad(what + " must be a number or [re, im]");
}

Eigen::MatrixXcd complex_matrix(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) bad(what + " must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) bad(what + " must be square");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = complex_entry(row[k], what);
  }
  return m;
}

json complex_to_json(std::complex<double> c) { return json::array({c.real(), c.imag()}); }

BDesc b_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) bad("B must be an object with a type");
  const std::string type = j["type"].get<std::string>();
  if (type == "diagonal") {
    only_keys(j, {"type", "eigenvalues"}, "B");
    if (!j.contains("eigenvalues") || !j["eigenvalues"].is_array()) bad("diagonal B needs eigenvalues");
    DiagonalB d;
    for (const auto& v : j["eigenvalues"]) d.eigenvalues.push_back(number(v, "eigenvalue"));
    return d;
  }
  if (type == "parabolic") {
    only_keys(j, {"type", "gamma", "alpha", "mu", "betas"}, "B");
    ParabolicB p;
    if (j.contains("gamma") && !j["gamma"].is_null()) p.gamma = number(j["gamma"], "gamma");
    if (j.contains("alpha")) p.alpha = number(j["alpha"], "alpha");
    if (j.contains("mu")) {
      if (!j["mu"].is_array()) bad("mu must be an array");
      for (const auto& v : j["mu"]) p.mu.push_back(complex_entry(v, "mu"));
    }
    if (j.contains("betas")) {
      if (!j["betas"].is_array()) bad("betas must be an array");
      for (const auto& b : j["betas"]) {
        only_keys(b, {"value", "mult"}, "betas entry");
        BetaBlock bb;
        if (!b.contains("value")) bad("betas entry needs a value");
        bb.value = number(b["value"], "beta value");
        if (b.contains("mult")) bb.mult = integer(b["mult"], "beta mult");
        p.betas.push_back(bb);
      }
    }
    return p;
  }
  if (type == "matrix") {
    only_keys(j, {"type", "matrix"}, "B");
    if (!j.contains("matrix")) bad("matrix B needs a matrix");
    return MatrixB{complex_matrix(j["matrix"], "B matrix")};
  }
  bad("unknown B type '" + type + "'");
}

json b_to_json(const BDesc& b) {
  json j;
  if (const auto* d = std::get_if<DiagonalB>(&b)) {
    j["type"] = "diagonal";
    j["eigenvalues"] = d->eigenvalues;
  } else if (const auto* p = std::get_if<ParabolicB>(&b)) {
    j["type"] = "parabolic";
    j["gamma"] = p->gamma ? json(*p->gamma) : json(nullptr);
    j["alpha"] = p->alpha;
    j["mu"] = json::array();
    for (auto m : p->mu) j["mu"].push_back(complex_to_json(m));
    j["betas"] = json::array();
    for (const auto& bb : p->betas) j["betas"].push_back(json{{"value", bb.value}, {"mult", bb.mult}});
  } else {
    j["type"] = "matrix";
    j["matrix"] = matrix_to_json(std::get<MatrixB>(b).m);
  }
  return j;
}

}  // namespace

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

FamilySpec spec_from_json(const json& j) {
  only_keys(j, {"name", "mdim", "case", "d", "lambda", "const", "B", "J", "samples", "seed", "tolerances",
                "perturbation"},
            "spec");
  FamilySpec s;
  try {
    if (j.contains("name")) s.name = j["name"].get<std::string>();
    if (!j.contains("mdim") || !j.contains("case")) bad("spec needs mdim and case");
    s.mdim = integer(j["mdim"], "mdim");
    s.family_case = integer(j["case"], "case");
    if (s.family_case < 1 || s.family_case > 4) bad("case must be 1, 2, 3 or 4");
    if (j.contains("d")) s.d = number(j["d"], "d");
    if (j.contains("lambda")) s.lambda = number(j["lambda"], "lambda");
    if (j.contains("const")) s.constant = number(j["const"], "const");
    if (!j.contains("B")) bad("spec needs B");
    s.b = b_from_json(j["B"]);
    if (j.contains("J") && !j["J"].is_null()) {
      const json& iv = j["J"];
      if (!iv.is_array() || iv.size() != 2) bad("J must be [r_min, r_max]");
      const double lo = number(iv[0], "J"), hi = number(iv[1], "J");
      if (!(0.0 < lo && lo < hi)) bad("J must satisfy 0 < r_min < r_max");
      s.interval = std::make_pair(lo, hi);
    }
    if (j.contains("samples")) s.samples = integer(j["samples"], "samples");
    if (s.samples < 0) bad("samples must be non-negative");
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
        bad("seed must be a non-negative integer");
      s.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("tolerances")) {
      if (!j["tolerances"].is_object()) bad("tolerances must be an object");
      for (const auto& [k, v] : j["tolerances"].items()) s.tolerances[k] = number(v, "tolerance " + k);
    }
    if (j.contains("perturbation") && !j["perturbation"].is_null()) {
      const json& p = j["perturbation"];
      only_keys(p, {"scale", "matrix"}, "perturbation");
      Perturbation pt;
      if (!p.contains("matrix")) bad("perturbation needs a matrix");
      pt.matrix = complex_matrix(p["matrix"], "perturbation matrix");
      if (p.contains("scale")) pt.scale = number(p["scale"], "perturbation scale");
      s.perturbation = pt;
    }
  } catch (const json::exception& e) {
    bad(std::string("malformed spec: ") + e.what());
  }
  return s;
}

json spec_to_json(const FamilySpec& s) {
  json j;
  if (!s.name.empty()) j["name"] = s.name;
  j["mdim"] = s.mdim;
  j["case"] = s.family_case;
  j["d"] = s.d;
  j["lambda"] = s.lambda;
  j["const"] = s.constant;
  j["B"] = b_to_json(s.b);
  j["J"] = s.interval ? json::array({s.interval->first, s.interval->second}) : json(nullptr);
  j["samples"] = s.samples;
  j["seed"] = s.seed;
  j["tolerances"] = json::object();
  for (const auto& [k, v] : s.tolerances) j["tolerances"][k] = v;
  if (s.perturbation)
    j["perturbation"] = json{{"scale", s.perturbation->scale}, {"matrix", matrix_to_json(s.perturbation->matrix)}};
  return j;
}

OperatorFile operator_from_json(const json& j) {
  only_keys(j, {"mdim", "matrix"}, "operator file");
  OperatorFile op;
  try {
    if (!j.contains("mdim") || !j.contains("matrix")) bad("operator file needs mdim and matrix");
    op.mdim = integer(j["mdim"], "mdim");
    if (op.mdim < 1) bad("mdim must be positive");
    op.matrix = complex_matrix(j["matrix"], "matrix");
  } catch (const json::exception& e) {
    bad(std::string("malformed operator file: ") + e.what());
  }
  if (op.matrix.rows() != op.mdim + 2) bad("matrix must be (mdim+2) square");
  return op;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    bad("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace bfcone

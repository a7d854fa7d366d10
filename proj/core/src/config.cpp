#include "hopfkit/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "hopfkit/errors.hpp"

namespace hopfkit {

using json = nlohmann::ordered_json;

void RunConfig::validate() const {
  if (problem != "example1" && problem != "example2")
    throw ConfigError("config: problem must be 'example1' or 'example2'");
  ex1.validate();
  ex2.validate();
  if (nt < 2 || nt > 64) throw ConfigError("config: nt must be in [2, 64]");
  if (k_max < 2) throw ConfigError("config: k_max must be >= 2");
  if (n_max <= 2) throw ConfigError("config: n_max must be > 2");
  if (!(tol_newton > 0 && tol_branch > 0 && tol_match > 0))
    throw ConfigError("config: tolerances must be positive");
}

std::unique_ptr<EvolutionProblem> RunConfig::build_problem() const {
  validate();
  std::unique_ptr<EvolutionProblem> P;
  if (problem == "example1")
    P = ex1_build(ex1);
  else
    P = ex2_build(ex2);
  prepare_bordering(*P);
  return P;
}

namespace {

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw ConfigError("config: unknown key '" + item.key() + "' in " + where);
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  require_keys(j, {"problem", "example1", "example2", "nt", "tolerances", "sweep", "output"},
               "top level");

  RunConfig c;
  if (j.contains("problem")) c.problem = j["problem"].get<std::string>();
  if (j.contains("example1")) {
    const auto& e = j["example1"];
    require_keys(e, {"L", "nx"}, "example1");
    if (e.contains("L")) c.ex1.L = e["L"].get<double>();
    if (e.contains("nx")) c.ex1.nx = e["nx"].get<int>();
  }
  if (j.contains("example2")) {
    const auto& e = j["example2"];
    require_keys(e, {"nx"}, "example2");
    if (e.contains("nx")) c.ex2.nx = e["nx"].get<int>();
  }
  if (j.contains("nt")) c.nt = j["nt"].get<int>();
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    require_keys(t, {"newton", "branch", "match"}, "tolerances");
    if (t.contains("newton")) c.tol_newton = t["newton"].get<double>();
    if (t.contains("branch")) c.tol_branch = t["branch"].get<double>();
    if (t.contains("match")) c.tol_match = t["match"].get<double>();
  }
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    require_keys(s, {"k_max", "n_max"}, "sweep");
    if (s.contains("k_max")) c.k_max = s["k_max"].get<int>();
    if (s.contains("n_max")) c.n_max = s["n_max"].get<int>();
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    require_keys(o, {"report", "branch_csv", "checkpoint"}, "output");
    if (o.contains("report")) c.out_report = o["report"].get<std::string>();
    if (o.contains("branch_csv")) c.out_branch_csv = o["branch_csv"].get<std::string>();
    if (o.contains("checkpoint")) c.out_checkpoint = o["checkpoint"].get<std::string>();
  }
  c.validate();
  return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_text(text);
}

std::string RunConfig::to_json_text() const {
  json j;
  j["problem"] = problem;
  j["example1"] = {{"L", ex1.L}, {"nx", ex1.nx}};
  j["example2"] = {{"nx", ex2.nx}};
  j["nt"] = nt;
  j["tolerances"] = {{"newton", tol_newton}, {"branch", tol_branch}, {"match", tol_match}};
  j["sweep"] = {{"k_max", k_max}, {"n_max", n_max}};
  return j.dump();
}

}  // namespace hopfkit

#include "hopfkit/serialization.hpp"

#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "hopfkit/errors.hpp"

namespace hopfkit {

using json = nlohmann::ordered_json;

std::string field_to_json(const SpaceTimeField& u) {
  json j;
  j["ncomp"] = SpaceTimeField::kComponents;
  j["nt"] = u.nt();
  j["nx"] = u.nx();
  std::vector<double> a, b;
  a.reserve((u.nt() + 1) * u.dim());
  b.reserve(u.nt() * u.dim());
  for (int n = 0; n <= u.nt(); ++n)
    for (int i = 0; i < u.dim(); ++i) a.push_back(u.cos_coeff(n)[i]);
  for (int n = 1; n <= u.nt(); ++n)
    for (int i = 0; i < u.dim(); ++i) b.push_back(u.sin_coeff(n)[i]);
  j["a"] = a;
  j["b"] = b;
  return j.dump();
}

SpaceTimeField field_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("field: malformed JSON: ") + e.what());
  }
  const int ncomp = j.at("ncomp").get<int>();
  if (ncomp != SpaceTimeField::kComponents)
    throw ConfigError("field: component count must be 2");
  const int nt = j.at("nt").get<int>();
  const int nx = j.at("nx").get<int>();
  SpaceTimeField u(nt, nx);
  const auto& a = j.at("a");
  const auto& b = j.at("b");
  if (static_cast<int>(a.size()) != (nt + 1) * u.dim() ||
      static_cast<int>(b.size()) != nt * u.dim())
    throw ConfigError("field: coefficient array size mismatch");
  size_t k = 0;
  for (int n = 0; n <= nt; ++n)
    for (int i = 0; i < u.dim(); ++i) u.cos_coeff(n)[i] = a[k++].get<double>();
  k = 0;
  for (int n = 1; n <= nt; ++n)
    for (int i = 0; i < u.dim(); ++i) u.sin_coeff(n)[i] = b[k++].get<double>();
  if (!u.all_finite()) throw ConfigError("field: non-finite coefficients");
  return u;
}

std::string checkpoint_to_json(double lambda, double sigma, const SpaceTimeField& u) {
  json j;
  j["lambda"] = lambda;
  j["sigma"] = sigma;
  j["field"] = json::parse(field_to_json(u));
  return j.dump();
}

Checkpoint checkpoint_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("checkpoint: malformed JSON: ") + e.what());
  }
  Checkpoint c;
  c.lambda = j.at("lambda").get<double>();
  c.sigma = j.at("sigma").get<double>();
  c.field = field_from_json(j.at("field").dump());
  return c;
}

std::string report_to_json(const ConditionReport& rep, const std::string& config_snapshot) {
  json j;
  j["problem"] = rep.problem;
  j["config"] = json::parse(config_snapshot);
  j["b1"] = {{"eigenvalue", {rep.b1_eigenvalue.real(), rep.b1_eigenvalue.imag()}},
             {"simplicity_gap", rep.b1_simplicity_gap},
             {"nondegeneracy", rep.b1_nondegeneracy}};
  j["b2"] = {{"mu_prime", {rep.b2_mu_prime.real(), rep.b2_mu_prime.imag()}}};
  json margins = json::array();
  for (const auto& [k, m] : rep.b3_margins) margins.push_back({k, m});
  j["b3"] = margins;
  j["k1"] = {{"M", rep.k1_constant},
             {"n_at_max", rep.k1_n_at_max},
             {"M_certified_range", rep.k1_certified},
             {"cap", rep.k1_cap},
             {"cap_n_min", rep.k1_cap_n_min}};
  j["pass"] = {{"b1", rep.pass_b1}, {"b2", rep.pass_b2}, {"b3", rep.pass_b3},
               {"k1", rep.pass_k1}, {"all", rep.pass_all()}};
  return j.dump(2) + "\n";
}

void branch_to_csv(const Branch& branch, std::ostream& os, bool partial) {
  os << "alpha,lambda,sigma,eta_norm,g_residual,newton_iters\n";
  char buf[512];
  for (const auto& p : branch.points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", p.alpha, p.lambda,
                  p.sigma, p.eta_norm, p.g_residual, p.newton_iters);
    os << buf;
  }
  if (partial) os << "# partial: corrector failed before alpha_max\n";
}

}  // namespace hopfkit

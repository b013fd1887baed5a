#pragma once
// JSON views of verification reports and grid configs, plus the small
// formatting helpers shared by the CLI output writers.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "rcm/dd.hpp"
#include "rcm/errors.hpp"
#include "rcm/identities.hpp"
#include "rcm/verify.hpp"

namespace rcm {

inline std::string format_17g(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void to_json(nlohmann::json& j, const CheckRecord& r) {
  j = nlohmann::json{{"family", r.family},
                     {"detail", r.detail},
                     {"n", r.n},
                     {"kappa", r.kappa},
                     {"mu", r.mu},
                     {"beta", r.beta},
                     {"nu", r.nu},
                     {"p", r.p},
                     {"residual", r.residual},
                     {"tolerance", r.tolerance},
                     {"verdict", verdict_name(r.verdict)}};
}

inline void to_json(nlohmann::json& j, const FamilySummary& f) {
  j = nlohmann::json{{"name", f.name},
                     {"pass", f.pass},
                     {"fail", f.fail},
                     {"skip", f.skip},
                     {"max_residual", f.max_residual}};
}

inline void to_json(nlohmann::json& j, const Summary& s) {
  j = nlohmann::json{{"pass", s.pass},
                     {"fail", s.fail},
                     {"skip", s.skip},
                     {"max_residual", s.max_residual},
                     {"families", s.families}};
}

inline void to_json(nlohmann::json& j, const Environment& e) {
  j = nlohmann::json{{"precision", e.precision},
                     {"mode", e.mode},
                     {"generator", e.generator},
                     {"seed", e.seed},
                     {"draws", e.draws},
                     {"tolerances", e.tolerances}};
}

inline nlohmann::json report_to_json(const Report& rep) {
  nlohmann::json j;
  j["schema_version"] = "1";
  j["environment"] = rep.environment;
  j["records"] = rep.records;
  j["summary"] = rep.summary;
  return j;
}

inline Precision precision_from_string(const std::string& s) {
  if (s == "double") return Precision::double_prec;
  if (s == "high") return Precision::high;
  fail(Errc::bad_argument, "precision must be 'double' or 'high'");
}

// Strict config reader: unknown keys are rejected so a typo cannot silently
// fall back to a default.
inline GridConfig grid_config_from_json(const nlohmann::json& j) {
  if (!j.is_object())
    fail(Errc::bad_argument, "grid config must be a JSON object");
  static const char* const known[] = {
      "kappas", "ns",        "fractions",           "p_min", "p_max",
      "beta",   "precision", "tolerance_overrides", "seed",  "draws"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
          return it.key() == k;
        }) == std::end(known))
      fail(Errc::bad_argument, "unknown grid config key: " + it.key());
  }
  GridConfig cfg;
  try {
    if (j.contains("kappas")) cfg.kappas = j.at("kappas").get<std::vector<int>>();
    if (j.contains("ns")) cfg.ns = j.at("ns").get<std::vector<int>>();
    if (j.contains("fractions"))
      cfg.fractions = j.at("fractions").get<std::vector<double>>();
    if (j.contains("p_min")) cfg.p_min = j.at("p_min").get<int>();
    if (j.contains("p_max")) cfg.p_max = j.at("p_max").get<int>();
    if (j.contains("beta")) cfg.beta = j.at("beta").get<double>();
    if (j.contains("precision"))
      cfg.precision = precision_from_string(j.at("precision").get<std::string>());
    if (j.contains("tolerance_overrides"))
      cfg.tolerance_overrides =
          j.at("tolerance_overrides").get<std::map<std::string, double>>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("draws")) cfg.draws = j.at("draws").get<int>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::bad_argument, std::string("malformed grid config: ") + e.what());
  }
  return cfg;
}

template <class Real>
nlohmann::json identity_to_json(const IdentityCheck<Real>& c) {
  return nlohmann::json{{"name", c.name},           {"n", c.n},
                        {"nu", c.nu},               {"p", c.p},
                        {"lhs", to_double(c.lhs)},  {"rhs", to_double(c.rhs)},
                        {"residual", c.residual}};
}

}  // namespace rcm

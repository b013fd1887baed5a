#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "rcm/report_json.hpp"
#include "rcm/verify.hpp"

namespace {

rcm::GridConfig small_grid() {
  rcm::GridConfig cfg;
  cfg.kappas = {-1, -2};
  cfg.ns = {0, 1, 2};
  cfg.fractions = {0.5};
  cfg.p_min = -2;
  cfg.p_max = 4;
  cfg.draws = 5;
  return cfg;
}

rcm::Errc code_of(const rcm::GridConfig& cfg) {
  try {
    rcm::run_verification(cfg);
  } catch (const rcm::DomainError& e) {
    return e.code();
  }
  return static_cast<rcm::Errc>(-1);
}

}  // namespace

TEST_CASE("grid validation rejects bad configurations") {
  using rcm::Errc;
  auto cfg = small_grid();
  cfg.kappas.clear();
  CHECK(code_of(cfg) == Errc::bad_argument);

  cfg = small_grid();
  cfg.kappas.push_back(0);
  CHECK(code_of(cfg) == Errc::kappa_zero);

  cfg = small_grid();
  cfg.ns = {-1};
  CHECK(code_of(cfg) == Errc::bad_argument);

  cfg = small_grid();
  cfg.fractions = {1.0};
  CHECK(code_of(cfg) == Errc::bad_argument);

  cfg = small_grid();
  cfg.beta = 0.0;
  CHECK(code_of(cfg) == Errc::bad_argument);

  cfg = small_grid();
  cfg.p_min = -65;
  CHECK(code_of(cfg) == Errc::bad_argument);

  cfg = small_grid();
  cfg.draws = 0;
  CHECK(code_of(cfg) == Errc::bad_argument);

  cfg = small_grid();
  cfg.fault.enabled = true;
  cfg.fault.entry = 5;
  CHECK(code_of(cfg) == Errc::bad_argument);

  cfg = small_grid();
  cfg.tolerance_overrides["no_such_family"] = 1e-9;
  CHECK(code_of(cfg) == Errc::bad_argument);

  cfg = small_grid();
  cfg.tolerance_overrides["det_s"] = -1.0;
  CHECK(code_of(cfg) == Errc::bad_argument);
}

TEST_CASE("an empty power range yields an empty passing report") {
  auto cfg = small_grid();
  cfg.p_min = 2;
  cfg.p_max = 1;
  auto rep = rcm::run_verification(cfg);
  CHECK(rep.records.empty());
  CHECK(rep.all_pass());
  CHECK(rep.summary.pass == 0);
  CHECK(rep.environment.mode == std::string("serial"));
  CHECK(rep.environment.seed == cfg.seed);
}

TEST_CASE("a clean small grid passes every family") {
  auto rep = rcm::run_verification(small_grid());
  CHECK(rep.all_pass());
  CHECK(rep.summary.fail == 0);
  CHECK(rep.summary.pass > 500);
  CHECK(rep.summary.max_residual < 1e-9);

  std::size_t total = 0;
  std::set<std::string> names;
  for (const auto& f : rep.summary.families) {
    total += f.pass + f.fail + f.skip;
    names.insert(f.name);
  }
  CHECK(total == rep.records.size());
  CHECK(rep.summary.pass + rep.summary.fail + rep.summary.skip ==
        rep.records.size());
  for (const char* want :
       {"normalization", "linear_relation", "representation_agreement",
        "chain_consistency", "det_s", "det_t", "det_stilde",
        "similarity_product", "reflection", "hahn_three_way", "hahn_rr05",
        "identity_grid", "appendix_matrix", "appendix_matrix_physical",
        "hahn_y_constant", "three_term_equiv", "three_term_matrix",
        "family_agreement", "admissibility"}) {
    CAPTURE(want);
    CHECK(names.count(want) == 1);
  }

  for (std::size_t i = 1; i < rep.records.size(); ++i)
    CHECK(rep.records[i - 1].family <= rep.records[i].family);
}

TEST_CASE("serial and parallel runs produce identical reports") {
  auto cfg = small_grid();
  auto rs = rcm::run_verification(cfg, rcm::RunMode::serial);
  auto rp = rcm::run_verification(cfg, rcm::RunMode::parallel);
  CHECK(rp.environment.mode == std::string("parallel"));
  auto js = rcm::report_to_json(rs);
  auto jp = rcm::report_to_json(rp);
  js.erase("environment");
  jp.erase("environment");
  CHECK(js == jp);
}

TEST_CASE("a perturbed transfer entry is caught, whichever entry it is") {
  for (int entry = 0; entry <= 3; ++entry) {
    auto cfg = small_grid();
    cfg.fault.enabled = true;
    cfg.fault.entry = entry;
    cfg.fault.delta = 1e-6;
    auto rep = rcm::run_verification(cfg);
    CAPTURE(entry);
    CHECK(rep.summary.fail > 0);
    for (const auto& f : rep.summary.families) {
      if (f.fail == 0) continue;
      bool matrix_driven =
          f.name == "det_s" || f.name == "family_agreement";
      CAPTURE(f.name);
      CHECK(matrix_driven);
    }
  }
}

TEST_CASE("tolerance overrides take effect") {
  auto cfg = small_grid();
  cfg.tolerance_overrides["det_s"] = 1e-30;
  auto rep = rcm::run_verification(cfg);
  CHECK(rep.summary.fail > 0);
  for (const auto& f : rep.summary.families) {
    if (f.name == "det_s") {
      CHECK(f.fail > 0);
    } else {
      CHECK(f.fail == 0);
    }
  }
  CHECK(rep.environment.tolerances.at("det_s") == 1e-30);
}

TEST_CASE("high precision tightens the identity grid and still passes") {
  rcm::GridConfig cfg;
  cfg.kappas = {-1};
  cfg.ns = {1};
  cfg.fractions = {0.5};
  cfg.p_min = 0;
  cfg.p_max = 3;
  cfg.draws = 2;
  cfg.precision = rcm::Precision::high;
  auto tols = rcm::resolve_tolerances(cfg);
  CHECK(tols.at("identity_grid") == 1e-25);
  auto rep = rcm::run_verification(cfg);
  CHECK(rep.all_pass());
  CHECK(rep.environment.precision == std::string("high"));
  CHECK(rep.environment.tolerances.at("identity_grid") == 1e-25);
}

TEST_CASE("grid config JSON reader") {
  nlohmann::json j = {{"kappas", {-1, 2}},
                      {"ns", {0, 1}},
                      {"fractions", {0.5}},
                      {"p_min", -2},
                      {"p_max", 3},
                      {"beta", 2.0},
                      {"precision", "high"},
                      {"tolerance_overrides", {{"det_s", 1e-11}}},
                      {"seed", 7},
                      {"draws", 9}};
  auto cfg = rcm::grid_config_from_json(j);
  CHECK(cfg.kappas == std::vector<int>{-1, 2});
  CHECK(cfg.ns == std::vector<int>{0, 1});
  CHECK(cfg.fractions == std::vector<double>{0.5});
  CHECK(cfg.p_min == -2);
  CHECK(cfg.p_max == 3);
  CHECK(cfg.beta == 2.0);
  CHECK(cfg.precision == rcm::Precision::high);
  CHECK(cfg.tolerance_overrides.at("det_s") == 1e-11);
  CHECK(cfg.seed == 7);
  CHECK(cfg.draws == 9);

  CHECK_THROWS_AS(rcm::grid_config_from_json(nlohmann::json::array()),
                  rcm::DomainError);
  CHECK_THROWS_AS(rcm::grid_config_from_json({{"typo_key", 1}}),
                  rcm::DomainError);
  CHECK_THROWS_AS(rcm::grid_config_from_json({{"kappas", "x"}}),
                  rcm::DomainError);
  CHECK_THROWS_AS(rcm::grid_config_from_json({{"precision", "quad"}}),
                  rcm::DomainError);
}

TEST_CASE("report JSON shape") {
  auto cfg = small_grid();
  cfg.p_max = 1;
  auto rep = rcm::run_verification(cfg);
  auto j = rcm::report_to_json(rep);
  CHECK(j.at("schema_version") == "1");
  CHECK(j.at("environment").at("generator") == "mt19937_64");
  CHECK(j.at("records").size() == rep.records.size());
  CHECK(j.at("summary").at("pass") == rep.summary.pass);
  const auto& r0 = j.at("records").at(0);
  for (const char* key : {"family", "detail", "n", "kappa", "mu", "beta",
                          "nu", "p", "residual", "tolerance", "verdict"})
    CHECK(r0.contains(key));
}

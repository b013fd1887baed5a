// Command-line front end: compute moments for one state, run the
// cross-verification harness, or check the series identities.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rcm/closedform.hpp"
#include "rcm/dd.hpp"
#include "rcm/errors.hpp"
#include "rcm/params.hpp"
#include "rcm/report_json.hpp"
#include "rcm/verify.hpp"

namespace {

enum class Repr { traditional, nu, both };

constexpr const char* kUndeterminedReason =
    "p = -1: not determined by the implemented relations";
constexpr const char* kInadmissibleReason =
    "2 nu + p + 1 <= 0: moments diverge";

rcm::Precision env_precision() {
  if (const char* e = std::getenv("RCM_PRECISION"))
    return rcm::precision_from_string(e);
  return rcm::Precision::double_prec;
}

struct ComputeOptions {
  rcm::QuantumNumbers qn;
  int p_min = 0;
  int p_max = 0;
  Repr repr = Repr::traditional;
  std::string format = "json";
  bool strict = false;
  rcm::Precision precision = rcm::Precision::double_prec;
};

template <class Real>
int run_compute(const ComputeOptions& o) {
  const rcm::DerivedParams<Real> dp = rcm::derive_params<Real>(o.qn);
  struct Row {
    int p;
    const char* repr;
    double A, B, C;
  };
  struct Skip {
    int p;
    const char* reason;
  };
  std::vector<Row> rows;
  std::vector<Skip> skips;
  for (int p = o.p_min; p <= o.p_max; ++p) {
    if (p == -1) {
      skips.push_back({p, kUndeterminedReason});
      continue;
    }
    if (!rcm::is_direct(p, dp)) {
      skips.push_back({p, kInadmissibleReason});
      continue;
    }
    if (o.repr != Repr::nu) {
      rcm::MomentTriple<Real> t = rcm::moments_traditional(dp, p);
      rows.push_back({p, "traditional", rcm::to_double(t.A),
                      rcm::to_double(t.B), rcm::to_double(t.C)});
    }
    if (o.repr != Repr::traditional) {
      rcm::MomentTriple<Real> t = rcm::moments_nu(dp, p);
      rows.push_back({p, "nu", rcm::to_double(t.A), rcm::to_double(t.B),
                      rcm::to_double(t.C)});
    }
  }

  if (o.format == "csv") {
    std::cout << "n,kappa,mu,beta,p,repr,A,B,C\n";
    for (const Row& r : rows)
      std::cout << o.qn.n << ',' << o.qn.kappa << ','
                << rcm::format_17g(o.qn.mu) << ','
                << rcm::format_17g(o.qn.beta) << ',' << r.p << ',' << r.repr
                << ',' << rcm::format_17g(r.A) << ',' << rcm::format_17g(r.B)
                << ',' << rcm::format_17g(r.C) << '\n';
    for (const Skip& s : skips)
      std::cerr << "skip p = " << s.p << ": " << s.reason << '\n';
  } else {
    nlohmann::json j;
    j["schema_version"] = "1";
    j["precision"] = rcm::precision_name(o.precision);
    j["state"] = {{"n", o.qn.n},
                  {"kappa", o.qn.kappa},
                  {"mu", o.qn.mu},
                  {"beta", o.qn.beta},
                  {"nu", rcm::to_double(dp.nu)},
                  {"eps", rcm::to_double(dp.eps)},
                  {"a", rcm::to_double(dp.a)}};
    j["moments"] = nlohmann::json::array();
    for (const Row& r : rows)
      j["moments"].push_back(
          {{"p", r.p}, {"repr", r.repr}, {"A", r.A}, {"B", r.B}, {"C", r.C}});
    j["skipped"] = nlohmann::json::array();
    for (const Skip& s : skips)
      j["skipped"].push_back({{"p", s.p}, {"reason", s.reason}});
    std::cout << j.dump(2) << '\n';
  }
  return o.strict && !skips.empty() ? 3 : 0;
}

template <class Real>
int run_identities(int n_max, int p_max, const std::vector<double>& nus,
                   const std::string& format, rcm::Precision prec) {
  const std::vector<rcm::IdentityCheck<Real>> checks =
      rcm::run_identity_grid<Real>(n_max, p_max, nus);
  const double tol = prec == rcm::Precision::high ? 1e-25 : 1e-10;
  std::size_t passc = 0, failc = 0;
  double maxr = 0.0;
  for (const rcm::IdentityCheck<Real>& c : checks) {
    if (c.residual <= tol)
      ++passc;
    else
      ++failc;
    maxr = std::max(maxr, c.residual);
  }
  if (format == "csv") {
    std::cout << "name,n,nu,p,lhs,rhs,residual\n";
    for (const rcm::IdentityCheck<Real>& c : checks)
      std::cout << c.name << ',' << c.n << ',' << rcm::format_17g(c.nu) << ','
                << c.p << ',' << rcm::format_17g(rcm::to_double(c.lhs)) << ','
                << rcm::format_17g(rcm::to_double(c.rhs)) << ','
                << rcm::format_17g(c.residual) << '\n';
  } else {
    nlohmann::json j;
    j["schema_version"] = "1";
    j["precision"] = rcm::precision_name(prec);
    j["tolerance"] = tol;
    j["checks"] = nlohmann::json::array();
    for (const rcm::IdentityCheck<Real>& c : checks)
      j["checks"].push_back(rcm::identity_to_json(c));
    j["summary"] = {{"pass", passc}, {"fail", failc}, {"max_residual", maxr}};
    std::cout << j.dump(2) << '\n';
  }
  std::cerr << "identities: " << passc << " pass, " << failc
            << " fail, max residual " << rcm::format_17g(maxr) << '\n';
  return failc == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bound-state moments of the Dirac-Coulomb problem"};
  app.require_subcommand(1);

  auto* compute = app.add_subcommand(
      "compute", "evaluate A_p, B_p, C_p for one state over a power range");
  int c_n = 0, c_kappa = 0;
  double c_mu = 0.0, c_z = 0.0, c_alpha = rcm::kDefaultFineStructure;
  double c_beta = 1.0;
  int c_pmin = 0, c_pmax = 0;
  std::string c_repr = "traditional", c_format = "json", c_prec;
  bool c_strict = false;
  compute->add_option("--n", c_n, "radial quantum number")->required();
  compute->add_option("--kappa", c_kappa, "spin-orbit quantum number")
      ->required();
  auto* omu = compute->add_option("--mu", c_mu, "coupling alpha * Z");
  auto* oz = compute->add_option("--z", c_z, "nuclear charge");
  auto* oal =
      compute->add_option("--alpha", c_alpha, "fine-structure constant");
  oal->needs(oz);
  omu->excludes(oz);
  oz->excludes(omu);
  compute->add_option("--beta", c_beta, "inverse length scale");
  compute->add_option("--p-min", c_pmin, "lowest power")->required();
  compute->add_option("--p-max", c_pmax, "highest power")->required();
  compute->add_option("--repr", c_repr, "closed form to use")
      ->check(CLI::IsMember({"traditional", "nu", "both"}));
  compute->add_option("--format", c_format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  auto* ocp = compute->add_option("--precision", c_prec, "working precision")
                  ->check(CLI::IsMember({"double", "high"}));
  compute->add_flag("--strict", c_strict,
                    "exit 3 if any requested power was skipped");

  auto* verify =
      app.add_subcommand("verify", "run the cross-verification harness");
  std::string v_grid = "default";
  std::uint64_t v_seed = 42;
  int v_draws = 100;
  std::string v_mode = "parallel", v_format = "json", v_prec;
  verify->add_option("--grid", v_grid, "'default' or a JSON config path");
  auto* osd = verify->add_option("--seed", v_seed, "seed for the drawn checks");
  auto* odr = verify->add_option("--draws", v_draws,
                                 "number of drawn parameter checks");
  verify->add_option("--mode", v_mode, "scheduling of the state grid")
      ->check(CLI::IsMember({"serial", "parallel"}));
  verify->add_option("--format", v_format, "output format")
      ->check(CLI::IsMember({"json"}));
  auto* ovp = verify->add_option("--precision", v_prec, "working precision")
                  ->check(CLI::IsMember({"double", "high"}));

  auto* identities = app.add_subcommand(
      "identities", "check the contiguous-series identities on a grid");
  int i_nmax = 8, i_pmax = 8;
  std::vector<double> i_nus{0.6, 1.0, 1.732, 2.5, 4.9};
  std::string i_format = "json", i_prec;
  identities->add_option("--n-max", i_nmax, "largest degree");
  identities->add_option("--p-max", i_pmax, "largest power");
  identities->add_option("--nu", i_nus, "nu values to sample")
      ->delimiter(',');
  identities->add_option("--format", i_format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  auto* oip =
      identities->add_option("--precision", i_prec, "working precision")
          ->check(CLI::IsMember({"double", "high"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (compute->parsed()) {
      if (omu->count() == 0 && oz->count() == 0)
        rcm::fail(rcm::Errc::bad_argument, "one of --mu or --z is required");
      if (std::abs(c_pmin) > 64 || std::abs(c_pmax) > 64)
        rcm::fail(rcm::Errc::bad_argument, "|p| must not exceed 64");
      ComputeOptions o;
      o.qn.n = c_n;
      o.qn.kappa = c_kappa;
      o.qn.mu = omu->count() ? c_mu : c_alpha * c_z;
      o.qn.beta = c_beta;
      o.p_min = c_pmin;
      o.p_max = c_pmax;
      o.repr = c_repr == "traditional" ? Repr::traditional
               : c_repr == "nu"        ? Repr::nu
                                       : Repr::both;
      o.format = c_format;
      o.strict = c_strict;
      o.precision = ocp->count() ? rcm::precision_from_string(c_prec)
                                 : env_precision();
      return o.precision == rcm::Precision::high ? run_compute<rcm::DDouble>(o)
                                                 : run_compute<double>(o);
    }

    if (verify->parsed()) {
      rcm::GridConfig cfg;
      bool file_precision = false;
      if (v_grid != "default") {
        std::ifstream in(v_grid);
        if (!in) {
          std::cerr << "error: cannot open grid config: " << v_grid << '\n';
          return 2;
        }
        nlohmann::json j;
        try {
          in >> j;
        } catch (const nlohmann::json::exception& e) {
          std::cerr << "error: malformed grid config: " << e.what() << '\n';
          return 2;
        }
        file_precision = j.is_object() && j.contains("precision");
        cfg = rcm::grid_config_from_json(j);
      }
      if (osd->count()) cfg.seed = v_seed;
      if (odr->count()) cfg.draws = v_draws;
      if (ovp->count())
        cfg.precision = rcm::precision_from_string(v_prec);
      else if (!file_precision)
        cfg.precision = env_precision();
      rcm::Report rep = rcm::run_verification(
          cfg, v_mode == "serial" ? rcm::RunMode::serial
                                  : rcm::RunMode::parallel);
      std::cout << rcm::report_to_json(rep).dump(2) << '\n';
      std::cerr << "verification: " << rep.summary.pass << " pass, "
                << rep.summary.fail << " fail, " << rep.summary.skip
                << " skip, max residual "
                << rcm::format_17g(rep.summary.max_residual) << '\n';
      return rep.all_pass() ? 0 : 1;
    }

    if (identities->parsed()) {
      rcm::Precision prec = oip->count()
                                ? rcm::precision_from_string(i_prec)
                                : env_precision();
      return prec == rcm::Precision::high
                 ? run_identities<rcm::DDouble>(i_nmax, i_pmax, i_nus,
                                                i_format, prec)
                 : run_identities<double>(i_nmax, i_pmax, i_nus, i_format,
                                          prec);
    }
  } catch (const rcm::DomainError& e) {
    std::cerr << "error: " << e.what() << " [" << rcm::errc_name(e.code())
              << "]\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

#pragma once

#include <stdexcept>
#include <string>

namespace rcm {

// Every rejected input class carries its own code so callers can branch
// without parsing messages.
enum class Errc {
  kappa_zero,            // kappa = 0 labels no state
  mu_nonpositive,        // coupling must be positive
  mu_too_large,          // mu >= |kappa| makes nu imaginary
  no_bound_state,        // n = 0 with kappa > 0
  bad_argument,          // malformed input outside the classes above
  inadmissible_power,    // 2 nu + p + 1 <= 0
  moment_undetermined,   // p = -1: no implemented relation fixes A or C
  singular_step,         // division by p, p + 1, or p + 2 in a step formula
  resonant_denominator,  // |4 nu^2 - p^2| below the guard
  chain_breakdown,       // a separated recurrence divides by a vanishing entry
  transform_singular,    // mu^2 = a^2 kappa^2: the X/Y change of basis fails
  non_terminating,       // series has no nonpositive-integer upper parameter
  series_pole,           // lower parameter hits zero before termination
  internal_mismatch,     // two routes to the same quantity disagree
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::kappa_zero: return "kappa_zero";
    case Errc::mu_nonpositive: return "mu_nonpositive";
    case Errc::mu_too_large: return "mu_too_large";
    case Errc::no_bound_state: return "no_bound_state";
    case Errc::bad_argument: return "bad_argument";
    case Errc::inadmissible_power: return "inadmissible_power";
    case Errc::moment_undetermined: return "moment_undetermined";
    case Errc::singular_step: return "singular_step";
    case Errc::resonant_denominator: return "resonant_denominator";
    case Errc::chain_breakdown: return "chain_breakdown";
    case Errc::transform_singular: return "transform_singular";
    case Errc::non_terminating: return "non_terminating";
    case Errc::series_pole: return "series_pole";
    case Errc::internal_mismatch: return "internal_mismatch";
  }
  return "unknown";
}

class DomainError : public std::runtime_error {
 public:
  DomainError(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw DomainError(code, what);
}

}  // namespace rcm

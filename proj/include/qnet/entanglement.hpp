#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qnet/topology.hpp"

namespace qnet {

// Per-link timing of the geometric retrial process.
//   t_fail    = tau_p + tau_d               (attempt, then cooling/reset)
//   t_success = tau_p + classical_delay     (attempt, then heralding)
//   expected  = ((1 - p) * t_fail + p * t_success) / p
//   rate      = 1 / expected inside the coherence window, else 0
struct LinkTiming {
  double t_success_s;
  double t_fail_s;
  double expected_time_s;
  double rate_hz;
};

double success_time(const LinkParams& link);
double failure_time(const LinkParams& link);

// Closed form on raw durations. Throws ZeroProbability when p == 0.
double expected_generation_time(double p_success, double t_fail_s,
                                double t_success_s);
double expected_generation_time(const LinkParams& link);

// 1 / expected_generation_time while elapsed_s <= coherence_time_s
// (inclusive), 0 afterwards.
double entanglement_rate(const LinkParams& link, double elapsed_s);

LinkTiming link_timing(const LinkParams& link, double elapsed_s = 0.0);

struct MonteCarloEstimate {
  double mean_s;
  double std_error_s;
};

// Simulates `trials` independent retrial processes: one uniform draw per
// attempt, success iff u < p, accumulating t_fail per failure and t_success
// once. Returns the sample mean and its standard error (sample standard
// deviation / sqrt(trials); 0 when trials == 1).
MonteCarloEstimate monte_carlo_generation_time(double p_success,
                                               double t_fail_s,
                                               double t_success_s,
                                               std::uint64_t trials,
                                               std::uint64_t seed);
MonteCarloEstimate monte_carlo_generation_time(const LinkParams& link,
                                               std::uint64_t trials,
                                               std::uint64_t seed);

struct RateCheckRow {
  double p;
  double tf_s;
  double ts_s;
  double closed_form_s;
  double mc_mean_s;
  double mc_stderr_s;
  double abs_diff;

  // |closed form - Monte-Carlo mean| <= 4 standard errors.
  bool agrees() const;
};

// Samples `cases` links from `ranges` (case i uses seed derive(seed, 0, i)
// for its parameters and derive(seed, 1, i) for its simulation) and compares
// the closed form against Monte-Carlo.
std::vector<RateCheckRow> rate_check(std::uint64_t cases, std::uint64_t trials,
                                     std::uint64_t seed,
                                     const ParamRanges& ranges = {});

// CSV with header p,tf_s,ts_s,closed_form_s,mc_mean_s,mc_stderr_s,abs_diff.
void write_rate_check_csv(std::ostream& out,
                          const std::vector<RateCheckRow>& rows);

}  // namespace qnet

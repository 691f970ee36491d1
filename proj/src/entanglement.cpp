#include "qnet/entanglement.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "qnet/errors.hpp"
#include "qnet/rng.hpp"

namespace qnet {

double success_time(const LinkParams& link) {
  return link.tau_p_s + classical_delay(link);
}

double failure_time(const LinkParams& link) {
  return link.tau_p_s + link.tau_d_s;
}

double expected_generation_time(double p_success, double t_fail_s,
                                double t_success_s) {
  if (!(p_success > 0.0)) throw ZeroProbability();
  return ((1.0 - p_success) * t_fail_s + p_success * t_success_s) / p_success;
}

double expected_generation_time(const LinkParams& link) {
  return expected_generation_time(link.p_success, failure_time(link),
                                  success_time(link));
}

double entanglement_rate(const LinkParams& link, double elapsed_s) {
  const double expected = expected_generation_time(link);
  if (elapsed_s > link.coherence_time_s) return 0.0;
  return 1.0 / expected;
}

LinkTiming link_timing(const LinkParams& link, double elapsed_s) {
  return {success_time(link), failure_time(link),
          expected_generation_time(link), entanglement_rate(link, elapsed_s)};
}

MonteCarloEstimate monte_carlo_generation_time(double p_success,
                                               double t_fail_s,
                                               double t_success_s,
                                               std::uint64_t trials,
                                               std::uint64_t seed) {
  if (!(p_success > 0.0)) throw ZeroProbability();
  if (trials == 0) throw InvalidConfig("trials: must be >= 1");
  Rng rng(seed);
  // Welford accumulation over the per-trial totals.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    std::uint64_t failures = 0;
    while (!(rng.uniform() < p_success)) ++failures;
    const double total = static_cast<double>(failures) * t_fail_s + t_success_s;
    const double delta = total - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (total - mean);
  }
  double std_error = 0.0;
  if (trials > 1) {
    const double n = static_cast<double>(trials);
    std_error = std::sqrt(m2 / (n - 1.0)) / std::sqrt(n);
  }
  return {mean, std_error};
}

MonteCarloEstimate monte_carlo_generation_time(const LinkParams& link,
                                               std::uint64_t trials,
                                               std::uint64_t seed) {
  return monte_carlo_generation_time(link.p_success, failure_time(link),
                                     success_time(link), trials, seed);
}

bool RateCheckRow::agrees() const { return abs_diff <= 4.0 * mc_stderr_s; }

std::vector<RateCheckRow> rate_check(std::uint64_t cases, std::uint64_t trials,
                                     std::uint64_t seed,
                                     const ParamRanges& ranges) {
  std::vector<RateCheckRow> rows;
  rows.reserve(cases);
  for (std::uint64_t i = 0; i < cases; ++i) {
    Rng rng(derive_seed(seed, {0, i}));
    LinkParams link;
    link.p_success = rng.uniform(ranges.p_success.min, ranges.p_success.max);
    link.tau_p_s = rng.uniform(ranges.tau_p_s.min, ranges.tau_p_s.max);
    link.tau_d_s = rng.uniform(ranges.tau_d_s.min, ranges.tau_d_s.max);
    link.length_km = rng.uniform(ranges.length_km.min, ranges.length_km.max);
    const auto mc = monte_carlo_generation_time(link, trials,
                                                derive_seed(seed, {1, i}));
    const double closed = expected_generation_time(link);
    rows.push_back({link.p_success, failure_time(link), success_time(link),
                    closed, mc.mean_s, mc.std_error_s,
                    std::abs(closed - mc.mean_s)});
  }
  return rows;
}

void write_rate_check_csv(std::ostream& out,
                          const std::vector<RateCheckRow>& rows) {
  out << "p,tf_s,ts_s,closed_form_s,mc_mean_s,mc_stderr_s,abs_diff\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", r.p,
                  r.tf_s, r.ts_s, r.closed_form_s, r.mc_mean_s, r.mc_stderr_s,
                  r.abs_diff);
    out << buf;
  }
}

}  // namespace qnet

#pragma once

#include <cstdint>

namespace hopdim::analytic {

// Failure model: a frame fails when every one of the target's n repetitions
// sees more than ncmax interferers on its resource unit. Each interferer
// covers a given unit with probability n / n_ru, independently across
// repetitions. All probabilities are evaluated in the log domain.

/// (1 - (1 - n/n_ru)^d)^n. Requires 1 <= n <= n_ru, d >= 0; d = 0 gives 0.
double failure_prob_no_resolution(std::int64_t n, std::int64_t d, std::int64_t n_ru);

/// Binomial(d, n/n_ru) mass at c.
double collision_pmf(std::int64_t c, std::int64_t d, std::int64_t n, std::int64_t n_ru);

/// (1 - P(N_c <= ncmax))^n. For ncmax = 0 this is bit-identical to
/// failure_prob_no_resolution.
double failure_prob_resolvable(std::int64_t n, std::int64_t d, std::int64_t n_ru,
                               std::int64_t ncmax);

/// log P(Binomial(d, x) > ncmax), accurate for tails near 0 and near 1.
double log_collision_tail(std::int64_t ncmax, std::int64_t d, double x);

/// ceil(n / (1 - (1 - pf^(1/n))^(1/d))). d = 0 gives n.
std::int64_t required_ru_no_resolution(std::int64_t n, std::int64_t d, double pf_target);

/// Continuous repetition optimum without collision resolution, -ln(pf)/ln 2.
double optimal_reps_no_resolution(double pf_target);

/// ceil(ln(pf) / (((1/2)^(1/d) - 1) ln 2)).
std::int64_t min_ru_no_resolution(std::int64_t d, double pf_target);

/// Large-d form ceil(d ln(1/pf) / ln^2 2).
std::int64_t min_ru_no_resolution_linear(std::int64_t d, double pf_target);

/// ceil(-n d / (W-1((pf^(1/n) - 1)/e) + 1)), the large-d closed form for a
/// receiver that resolves one collision. d = 0 gives n.
std::int64_t required_ru_single_resolution(std::int64_t n, std::int64_t d, double pf_target);

/// Continuous repetition optimum for one resolvable collision.
double optimal_reps_single_resolution(double pf_target);

/// ceil(d ln(1/pf) / g(z*)).
std::int64_t min_ru_single_resolution(std::int64_t d, double pf_target);

/// 1 / ln^2 2, the slope of the no-resolution minimum in d ln(1/pf).
double no_resolution_ru_factor() noexcept;

/// Constants that follow from the maximizer z* of g(z) = ln(1+ez)(W-1(z)+1).
struct SingleResolutionConstants {
  double z_star;
  double g_star;
  double reps_factor;  // -1 / ln(1 + e z*): n_opt = reps_factor * ln(1/pf)
  double ru_factor;    // 1 / g(z*):         N_min = ru_factor * d * ln(1/pf)
};

/// Computed on first use and cached.
const SingleResolutionConstants& single_resolution_constants();

/// Ceiling that snaps values within 1e-10 (relative) of an integer, so that
/// exactly integral continuous solutions survive floating-point rounding.
/// Throws RangeError for non-finite or out-of-range values.
std::int64_t ceil_count(double x);

}  // namespace hopdim::analytic

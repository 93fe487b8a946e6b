#pragma once

#include <cstdint>
#include <functional>

namespace hopdim::numerics {

/// Principal branch W0 of the Lambert W function, x >= -1/e.
double lambert_w0(double x);

/// Lower branch W-1 of the Lambert W function, -1/e <= x < 0. Returns w <= -1.
double lambert_wm1(double x);

/// Inclusive integer bracket over a monotone predicate (false ... false true ... true).
struct BracketedSearchSpec {
  std::int64_t lo;
  std::int64_t hi;
  std::function<bool(std::int64_t)> predicate;
};

/// Smallest x in (lo, hi] with predicate(x) true. Requires predicate(lo) false
/// and predicate(hi) true; throws InternalError otherwise.
std::int64_t bisect_first_true(const BracketedSearchSpec& spec);

/// Doubles hi from start until predicate(hi) holds. Returns the last failing
/// value and the first passing one. Throws RangeError past limit.
BracketedSearchSpec expand_bracket(std::int64_t start, std::function<bool(std::int64_t)> predicate,
                                   std::int64_t limit);

/// Smallest n_ru >= n with failure_prob_resolvable(n, d, n_ru, ncmax) <= pf_target.
std::int64_t invert_required_ru_numeric(std::int64_t n, std::int64_t d, double pf_target,
                                        std::int64_t ncmax);

struct GMaximum {
  double z_star;
  double g_star;
};

/// g(z) = ln(1 + e z) (W-1(z) + 1) on (-1/e, 0).
double g_function(double z);

/// Maximizer of g_function. Golden-section search brackets the peak, then
/// bisection on the sign of g'(z) pins it down to double precision (the
/// function is too flat near its peak for value comparisons to resolve 1e-9).
GMaximum maximize_g();

struct OptimalReps {
  std::int64_t n_star;
  std::int64_t n_ru_min;
};

/// Integer scan n = 1 .. max(2 ceil(-ln pf / ln 2), 30) of the numeric
/// inversion; ties go to the smaller n.
OptimalReps optimal_reps_numeric(std::int64_t d, double pf_target, std::int64_t ncmax);

/// Upper end of the n range scanned by optimal_reps_numeric.
std::int64_t optimal_reps_scan_limit(double pf_target);

}  // namespace hopdim::numerics

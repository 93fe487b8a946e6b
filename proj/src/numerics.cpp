#include "hopdim/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hopdim/analytic.hpp"
#include "hopdim/errors.hpp"

namespace hopdim::numerics {

namespace {

constexpr double kE = std::numbers::e;
// e = kEHi + kELo to ~32 digits, for evaluating e*x + 1 near x = -1/e.
constexpr double kEHi = 2.718281828459045;
constexpr double kELo = 1.4456468917292502e-16;
// Nearest double to 1/e (slightly above the true value).
constexpr double kInvE = 0.36787944117144233;
constexpr int kMaxIterations = 50;

// sqrt(2 (e x + 1)) with the cancellation at x ~ -1/e handled by fma.
double branch_distance(double x) {
  const double t = std::fma(kEHi, x, 1.0) + kELo * x;
  return std::sqrt(2.0 * std::fmax(t, 0.0));
}

// Series of W about the branch point in p = +-sqrt(2(ex+1)); + for W0, - for W-1.
double branch_series(double p) {
  static constexpr double c[] = {-1.0,
                                 1.0,
                                 -1.0 / 3.0,
                                 11.0 / 72.0,
                                 -43.0 / 540.0,
                                 769.0 / 17280.0,
                                 -221.0 / 8505.0,
                                 680863.0 / 43545600.0,
                                 -1963.0 / 204120.0,
                                 226287557.0 / 37623398400.0};
  double acc = 0.0;
  for (int i = 9; i >= 0; --i) acc = acc * p + c[i];
  return acc;
}

// Halley on f(w) = w e^w - x. Used where |w + 1| is bounded away from 0.
double halley_direct(double x, double w) {
  for (int i = 0; i < kMaxIterations; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (f == 0.0) return w;
    const double wp1 = w + 1.0;
    const double dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= dw;
    if (std::fabs(dw) <= 1e-12 * (1.0 + std::fabs(w))) return w;
  }
  throw ConvergenceError("Lambert W Halley iteration did not converge for x=" + std::to_string(x));
}

// Halley on h(w) = w + ln|w| - ln|x|, the log form of w e^w = x; avoids
// overflow for large x (W0) and underflow for tiny |x| (W-1).
double halley_log(double x, double w) {
  const double target = std::log(std::fabs(x));
  for (int i = 0; i < kMaxIterations; ++i) {
    const double h = w + std::log(std::fabs(w)) - target;
    if (h == 0.0) return w;
    const double h1 = 1.0 + 1.0 / w;
    const double h2 = -1.0 / (w * w);
    const double dw = h / (h1 - h * h2 / (2.0 * h1));
    w -= dw;
    if (std::fabs(dw) <= 1e-12 * (1.0 + std::fabs(w))) return w;
  }
  throw ConvergenceError("Lambert W Halley iteration did not converge for x=" + std::to_string(x));
}

double g_derivative(double z) {
  const double w = lambert_wm1(z);
  const double l = std::log1p(kE * z);
  return kE / (1.0 + kE * z) * (w + 1.0) + l * w / (z * (1.0 + w));
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x) || x < -kInvE) {
    throw DomainError("lambert_w0 requires x >= -1/e, got " + std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (x < -0.25) {
    const double p = branch_distance(x);
    if (p < 0.05) return branch_series(p);
    return halley_direct(x, -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p);
  }
  if (x <= 3.0) {
    const double l = std::log1p(x);
    return halley_direct(x, l * (1.0 - std::log1p(l) / (2.0 + l)));
  }
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return halley_log(x, l1 - l2 + l2 / l1);
}

double lambert_wm1(double x) {
  if (std::isnan(x) || x < -kInvE || x >= 0.0) {
    throw DomainError("lambert_wm1 requires -1/e <= x < 0, got " + std::to_string(x));
  }
  if (x < -0.25) {
    const double p = -branch_distance(x);
    if (p > -0.05) return branch_series(p);
    return halley_direct(x, -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p);
  }
  const double l1 = std::log(-x);
  const double l2 = std::log(-l1);
  return halley_log(x, l1 - l2 + l2 / l1);
}

std::int64_t bisect_first_true(const BracketedSearchSpec& spec) {
  std::int64_t lo = spec.lo;
  std::int64_t hi = spec.hi;
  if (lo >= hi || spec.predicate(lo) || !spec.predicate(hi)) {
    throw InternalError("search bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                        "] is not monotone false->true");
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (spec.predicate(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

BracketedSearchSpec expand_bracket(std::int64_t start, std::function<bool(std::int64_t)> predicate,
                                   std::int64_t limit) {
  std::int64_t lo = start;
  std::int64_t hi = std::max<std::int64_t>(2 * start, start + 1);
  while (!predicate(hi)) {
    if (hi > limit / 2) {
      throw RangeError("bracket expansion exceeded " + std::to_string(limit));
    }
    lo = hi;
    hi *= 2;
  }
  return {lo, hi, std::move(predicate)};
}

std::int64_t invert_required_ru_numeric(std::int64_t n, std::int64_t d, double pf_target,
                                        std::int64_t ncmax) {
  if (n < 1) throw PreconditionError("n must be >= 1, got " + std::to_string(n));
  if (d < 0) throw PreconditionError("d must be >= 0, got " + std::to_string(d));
  if (ncmax < 0) throw PreconditionError("ncmax must be >= 0, got " + std::to_string(ncmax));
  if (!(pf_target > 0.0 && pf_target < 1.0)) {
    throw PreconditionError("pf_target must lie in (0, 1), got " + std::to_string(pf_target));
  }
  auto meets_target = [=](std::int64_t n_ru) {
    return analytic::failure_prob_resolvable(n, d, n_ru, ncmax) <= pf_target;
  };
  if (meets_target(n)) return n;
  return bisect_first_true(expand_bracket(n, meets_target, std::int64_t{1} << 62));
}

double g_function(double z) {
  return std::log1p(kE * z) * (lambert_wm1(z) + 1.0);
}

GMaximum maximize_g() {
  // Golden section on the open interval; g vanishes at both ends.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = -kInvE + 1e-9;
  double b = -1e-9;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g_function(c);
  double gd = g_function(d);
  while (b - a > 1e-6) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g_function(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g_function(d);
    }
  }
  // g' > 0 left of the peak and < 0 right of it.
  double lo = a;
  double hi = b;
  if (!(g_derivative(lo) > 0.0 && g_derivative(hi) < 0.0)) {
    throw InternalError("g'(z) does not change sign across the golden-section bracket");
  }
  for (int i = 0; i < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(lo);
       ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g_derivative(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double z = 0.5 * (lo + hi);
  return {z, g_function(z)};
}

std::int64_t optimal_reps_scan_limit(double pf_target) {
  const auto twice_cont =
      2 * static_cast<std::int64_t>(std::ceil(-std::log(pf_target) / std::numbers::ln2));
  return std::max<std::int64_t>(twice_cont, 30);
}

OptimalReps optimal_reps_numeric(std::int64_t d, double pf_target, std::int64_t ncmax) {
  if (d < 1) throw PreconditionError("d must be >= 1, got " + std::to_string(d));
  if (!(pf_target > 0.0 && pf_target < 1.0)) {
    throw PreconditionError("pf_target must lie in (0, 1), got " + std::to_string(pf_target));
  }
  OptimalReps best{1, invert_required_ru_numeric(1, d, pf_target, ncmax)};
  const std::int64_t limit = optimal_reps_scan_limit(pf_target);
  for (std::int64_t n = 2; n <= limit; ++n) {
    const std::int64_t n_ru = invert_required_ru_numeric(n, d, pf_target, ncmax);
    if (n_ru < best.n_ru_min) best = {n, n_ru};
  }
  return best;
}

}  // namespace hopdim::numerics

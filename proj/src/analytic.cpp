#include "hopdim/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hopdim/errors.hpp"
#include "hopdim/numerics.hpp"

namespace hopdim::analytic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = std::numbers::ln2;

void require_grid(std::int64_t n, std::int64_t d, std::int64_t n_ru) {
  if (n < 1) throw PreconditionError("n must be >= 1, got " + std::to_string(n));
  if (d < 0) throw PreconditionError("d must be >= 0, got " + std::to_string(d));
  if (n > n_ru) {
    throw PreconditionError("n must not exceed n_ru (n=" + std::to_string(n) +
                            ", n_ru=" + std::to_string(n_ru) + ")");
  }
}

void require_pf(double pf) {
  if (!(pf > 0.0 && pf < 1.0)) {
    throw PreconditionError("pf_target must lie in (0, 1), got " + std::to_string(pf));
  }
}

void require_d_positive(std::int64_t d) {
  if (d < 1) throw PreconditionError("d must be >= 1, got " + std::to_string(d));
}

double lchoose(std::int64_t d, std::int64_t c) {
  const auto dd = static_cast<double>(d);
  const auto cc = static_cast<double>(c);
  return std::lgamma(dd + 1.0) - std::lgamma(cc + 1.0) - std::lgamma(dd - cc + 1.0);
}

}  // namespace

std::int64_t ceil_count(double x) {
  if (!std::isfinite(x) || std::fabs(x) > 9.0e18) {
    throw RangeError("resource count out of range: " + std::to_string(x));
  }
  const double r = std::nearbyint(x);
  if (std::fabs(x - r) <= 1e-10 * std::fmax(1.0, std::fabs(x))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(x));
}

double log_collision_tail(std::int64_t ncmax, std::int64_t d, double x) {
  if (ncmax >= d) return -kInf;
  if (x >= 1.0) return 0.0;
  if (x <= 0.0) return -kInf;
  const double l1mx = std::log1p(-x);
  const auto dd = static_cast<double>(d);
  if (ncmax == 0) return std::log(-std::expm1(dd * l1mx));

  const double lx = std::log(x);
  auto log_term = [&](std::int64_t c) {
    return lchoose(d, c) + static_cast<double>(c) * lx + static_cast<double>(d - c) * l1mx;
  };
  const std::int64_t first = ncmax + 1;
  if (static_cast<double>(first) >= dd * x) {
    // At or past the mode: sum the upper tail directly, terms only shrink.
    const double odds = std::exp(lx - l1mx);
    double term = 1.0;
    double sum = 1.0;
    for (std::int64_t c = first; c < d; ++c) {
      term *= static_cast<double>(d - c) / static_cast<double>(c + 1) * odds;
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return log_term(first) + std::log(sum);
  }
  double cdf = 0.0;
  for (std::int64_t c = 0; c <= ncmax; ++c) cdf += std::exp(log_term(c));
  return std::log1p(-std::fmin(cdf, 1.0));
}

double failure_prob_no_resolution(std::int64_t n, std::int64_t d, std::int64_t n_ru) {
  require_grid(n, d, n_ru);
  const double x = static_cast<double>(n) / static_cast<double>(n_ru);
  return std::exp(static_cast<double>(n) * log_collision_tail(0, d, x));
}

double collision_pmf(std::int64_t c, std::int64_t d, std::int64_t n, std::int64_t n_ru) {
  require_grid(n, d, n_ru);
  if (c < 0 || c > d) {
    throw PreconditionError("collision count c must lie in [0, d] (c=" + std::to_string(c) +
                            ", d=" + std::to_string(d) + ")");
  }
  const double x = static_cast<double>(n) / static_cast<double>(n_ru);
  const auto dd = static_cast<double>(d);
  if (n == n_ru) return c == d ? 1.0 : 0.0;
  if (c == 0) return std::exp(dd * std::log1p(-x));
  if (c == d) return std::exp(dd * std::log(x));
  return std::exp(lchoose(d, c) + static_cast<double>(c) * std::log(x) +
                  static_cast<double>(d - c) * std::log1p(-x));
}

double failure_prob_resolvable(std::int64_t n, std::int64_t d, std::int64_t n_ru,
                               std::int64_t ncmax) {
  require_grid(n, d, n_ru);
  if (ncmax < 0) throw PreconditionError("ncmax must be >= 0, got " + std::to_string(ncmax));
  const double x = static_cast<double>(n) / static_cast<double>(n_ru);
  return std::exp(static_cast<double>(n) * log_collision_tail(ncmax, d, x));
}

std::int64_t required_ru_no_resolution(std::int64_t n, std::int64_t d, double pf_target) {
  if (n < 1) throw PreconditionError("n must be >= 1, got " + std::to_string(n));
  if (d < 0) throw PreconditionError("d must be >= 0, got " + std::to_string(d));
  require_pf(pf_target);
  if (d == 0) return n;
  const auto nn = static_cast<double>(n);
  // per-repetition loss probability a = pf^(1/n); 1 - (1 - a)^(1/d)
  const double log_a = std::log(pf_target) / nn;
  const double a = std::exp(log_a);
  const double log_one_minus_a = a < 0.5 ? std::log1p(-a) : std::log(-std::expm1(log_a));
  const double denom = -std::expm1(log_one_minus_a / static_cast<double>(d));
  return ceil_count(nn / denom);
}

double optimal_reps_no_resolution(double pf_target) {
  require_pf(pf_target);
  return -std::log(pf_target) / kLn2;
}

std::int64_t min_ru_no_resolution(std::int64_t d, double pf_target) {
  require_d_positive(d);
  require_pf(pf_target);
  const double half_root_minus_one = std::expm1(-kLn2 / static_cast<double>(d));
  return ceil_count(std::log(pf_target) / (half_root_minus_one * kLn2));
}

double no_resolution_ru_factor() noexcept { return 1.0 / (kLn2 * kLn2); }

std::int64_t min_ru_no_resolution_linear(std::int64_t d, double pf_target) {
  require_d_positive(d);
  require_pf(pf_target);
  return ceil_count(no_resolution_ru_factor() * static_cast<double>(d) * -std::log(pf_target));
}

std::int64_t required_ru_single_resolution(std::int64_t n, std::int64_t d, double pf_target) {
  if (n < 1) throw PreconditionError("n must be >= 1, got " + std::to_string(n));
  if (d < 0) throw PreconditionError("d must be >= 0, got " + std::to_string(d));
  require_pf(pf_target);
  if (d == 0) return n;
  const double arg = std::expm1(std::log(pf_target) / static_cast<double>(n)) / std::numbers::e;
  if (!(arg >= -1.0 / std::numbers::e && arg < 0.0)) {
    throw DomainError("Lambert W argument outside [-1/e, 0): " + std::to_string(arg));
  }
  const double w = numerics::lambert_wm1(arg);
  const std::int64_t value =
      ceil_count(-static_cast<double>(n) * static_cast<double>(d) / (w + 1.0));
  // The large-d form can dip below n for tiny d; a frame never has fewer
  // units than repetitions.
  return value < n ? n : value;
}

const SingleResolutionConstants& single_resolution_constants() {
  static const SingleResolutionConstants constants = [] {
    const auto peak = numerics::maximize_g();
    SingleResolutionConstants c{};
    c.z_star = peak.z_star;
    c.g_star = peak.g_star;
    c.reps_factor = -1.0 / std::log1p(std::numbers::e * peak.z_star);
    c.ru_factor = 1.0 / peak.g_star;
    return c;
  }();
  return constants;
}

double optimal_reps_single_resolution(double pf_target) {
  require_pf(pf_target);
  return single_resolution_constants().reps_factor * -std::log(pf_target);
}

std::int64_t min_ru_single_resolution(std::int64_t d, double pf_target) {
  require_d_positive(d);
  require_pf(pf_target);
  return ceil_count(single_resolution_constants().ru_factor * static_cast<double>(d) *
                    -std::log(pf_target));
}

}  // namespace hopdim::analytic

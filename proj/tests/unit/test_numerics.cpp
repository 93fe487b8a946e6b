#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hopdim/analytic.hpp"
#include "hopdim/errors.hpp"
#include "hopdim/numerics.hpp"
#include "hopdim/random.hpp"

using namespace hopdim;
using namespace hopdim::numerics;

namespace {

constexpr double kInvE = 0.36787944117144233;

double residual(double w, double x) {
  return std::abs(w * std::exp(w) - x) / std::max(1.0, std::abs(x));
}

// Required n_ru for n = 2..26 at d = 100, pf = 1e-6, from an exhaustive scan.
const std::vector<std::vector<std::int64_t>> kFig3 = {
    {199901, 29852, 12451, 7675, 5698, 4683, 4090, 3714, 3463, 3288, 3163, 3074, 3009,
     2963,   2930,  2908,  2895, 2888, 2886, 2889, 2895, 2905, 2917, 2931, 2947},
    {4385, 2011, 1448, 1229, 1126, 1074, 1048, 1038, 1037, 1043, 1052, 1065, 1080,
     1097, 1115, 1133, 1153, 1173, 1194, 1214, 1236, 1257, 1278, 1300, 1322},
    {1041, 683, 586, 552, 542, 544, 552, 563, 577, 592, 608, 625, 642,
     660,  678, 696, 714, 732, 750, 768, 786, 804, 822, 840, 858},
    {461, 361, 338, 336, 342, 353, 365, 379, 393, 408, 423, 438, 454,
     469, 485, 500, 516, 531, 546, 561, 577, 592, 607, 622, 637},
};

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("lambert w special values") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(std::numbers::e) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lambert_w0(-kInvE) == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(lambert_wm1(-kInvE) == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(lambert_w0(1.0) == doctest::Approx(0.5671432904097839).epsilon(1e-15));
  CHECK(lambert_wm1(-0.1) == doctest::Approx(-3.5771520639572972).epsilon(1e-14));
  CHECK(std::abs(lambert_wm1(-0.1) + 3.577152) < 1e-6);
}

TEST_CASE("lambert w domain") {
  CHECK_THROWS_AS(lambert_w0(-0.5), DomainError);
  CHECK_THROWS_AS(lambert_wm1(0.0), DomainError);
  CHECK_THROWS_AS(lambert_wm1(0.1), DomainError);
  CHECK_THROWS_AS(lambert_wm1(-0.4), DomainError);
  CHECK_THROWS_AS(lambert_w0(NAN), DomainError);
}

TEST_CASE("lambert w residuals on log-spaced grids") {
  for (double t = -300; t <= 300; t += 0.37) {
    const double x = std::pow(10.0, t);
    CAPTURE(x);
    CHECK(residual(lambert_w0(x), x) <= 1e-12);
  }
  // both branches on (-1/e, 0), approaching each end geometrically
  for (double t = -300; t <= -0.01; t += 0.29) {
    for (const double x : {-std::pow(10.0, t) * kInvE, -kInvE + std::pow(10.0, t) * kInvE}) {
      if (!(x < 0.0 && x >= -kInvE)) continue;
      CAPTURE(x);
      const double w0 = lambert_w0(x);
      const double wm = lambert_wm1(x);
      CHECK(residual(w0, x) <= 1e-12);
      CHECK(residual(wm, x) <= 1e-12);
      CHECK(wm <= -1.0);
      CHECK(w0 >= -1.0);
    }
  }
}

TEST_CASE("lambert w round trips") {
  for (const double y : {-1.5, -2.0, -5.0, -10.0}) {
    CHECK(std::abs(lambert_wm1(y * std::exp(y)) - y) <= 1e-10);
  }
  for (const double y : {-0.9, -0.5, 0.1, 1.0, 10.0, 100.0}) {
    CHECK(std::abs(lambert_w0(y * std::exp(y)) - y) <= 1e-10 * std::max(1.0, std::abs(y)));
  }
}

TEST_CASE("integer bisection") {
  const BracketedSearchSpec spec{0, 1000, [](std::int64_t x) { return x * x >= 500; }};
  CHECK(bisect_first_true(spec) == 23);
  CHECK_THROWS_AS(bisect_first_true({30, 1000, spec.predicate}), InternalError);
  CHECK_THROWS_AS(bisect_first_true({0, 10, spec.predicate}), InternalError);
  const auto bracket = expand_bracket(1, spec.predicate, 1 << 20);
  CHECK_FALSE(bracket.predicate(bracket.lo));
  CHECK(bracket.predicate(bracket.hi));
  CHECK(bisect_first_true(bracket) == 23);
  CHECK_THROWS_AS(expand_bracket(1, [](std::int64_t) { return false; }, 1 << 10), RangeError);
}

TEST_CASE("numeric inversion reproduces the scan tables") {
  for (std::int64_t k = 0; k <= 3; ++k) {
    for (std::int64_t n = 2; n <= 26; ++n) {
      CAPTURE(k);
      CAPTURE(n);
      CHECK(invert_required_ru_numeric(n, 100, 1e-6, k) == kFig3[k][n - 2]);
    }
  }
}

TEST_CASE("numeric inversion is the exact predicate boundary") {
  RandomStream rng(8, 8);
  for (int i = 0; i < 200; ++i) {
    const std::int64_t n = 1 + rng.uniform_below(25);
    const std::int64_t d = 1 + rng.uniform_below(2000);
    const std::int64_t k = rng.uniform_below(4);
    const double pf = std::pow(10.0, -1.0 - 9.0 * rng.uniform01());
    const auto n_ru = invert_required_ru_numeric(n, d, pf, k);
    CHECK(analytic::failure_prob_resolvable(n, d, n_ru, k) <= pf);
    if (n_ru > n) CHECK(analytic::failure_prob_resolvable(n, d, n_ru - 1, k) > pf);
  }
}

TEST_CASE("numeric inversion agrees with the no-resolution closed form") {
  RandomStream rng(9, 9);
  for (int i = 0; i < 200; ++i) {
    const std::int64_t n = 1 + rng.uniform_below(30);
    const std::int64_t d = 1 + rng.uniform_below(5000);
    const double pf = std::pow(10.0, -1.0 - 11.0 * rng.uniform01());
    CAPTURE(n);
    CAPTURE(d);
    CAPTURE(pf);
    const auto closed = analytic::required_ru_no_resolution(n, d, pf);
    // counts near 1e15 sit at the double rounding limit
    CHECK(std::abs(invert_required_ru_numeric(n, d, pf, 0) - closed) <=
          std::max(1.0, 1e-14 * static_cast<double>(closed)));
  }
  CHECK(invert_required_ru_numeric(10, 100, 1e-6, 1) == 1037);
  CHECK(invert_required_ru_numeric(7, 5, 1e-6, 5) == 7);
  CHECK(invert_required_ru_numeric(7, 0, 1e-6, 0) == 7);
}

TEST_CASE("maximizer of g") {
  const auto m = maximize_g();
  CHECK(std::abs(m.z_star - (-0.27977934500348804)) <= 1e-9);
  CHECK(m.g_star == doctest::Approx(1.3330081563969445).epsilon(1e-13));
  CHECK(std::abs(m.z_star - (-0.2798)) < 5e-5);
  CHECK(m.g_star >= g_function(m.z_star - 1e-3));
  CHECK(m.g_star >= g_function(m.z_star + 1e-3));
}

TEST_CASE("optimal repetitions by integer scan") {
  CHECK(optimal_reps_scan_limit(1e-6) == 40);
  CHECK(optimal_reps_scan_limit(0.5) == 30);
  const auto k0 = optimal_reps_numeric(100, 1e-6, 0);
  CHECK(k0.n_star == 20);
  CHECK(k0.n_ru_min == 2886);
  const auto k1 = optimal_reps_numeric(100, 1e-6, 1);
  CHECK(k1.n_star == 10);
  CHECK(k1.n_ru_min == 1037);
  const std::int64_t expect[] = {20, 10, 6, 5};
  for (std::int64_t k = 0; k <= 3; ++k) {
    const auto a = optimal_reps_numeric(100, 1e-6, k);
    const auto b = optimal_reps_numeric(1000, 1e-6, k);
    CHECK(a.n_star == expect[k]);
    CHECK(b.n_star == a.n_star);
  }
  CHECK(std::abs(k0.n_star - analytic::optimal_reps_no_resolution(1e-6)) <= 1.0);
  CHECK(std::abs(k1.n_star - analytic::optimal_reps_single_resolution(1e-6)) <= 1.0);
}

}

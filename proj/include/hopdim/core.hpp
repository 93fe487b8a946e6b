#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hopdim/errors.hpp"
#include "hopdim/random.hpp"

namespace hopdim {

/// Scenario of one target device facing d uncoordinated interferers.
class ScenarioConfig {
 public:
  /// Throws PreconditionError naming the violated bound.
  ScenarioConfig(std::int64_t d, std::int64_t n, double pf_target, std::int64_t ncmax);

  std::int64_t d() const noexcept { return d_; }
  std::int64_t n() const noexcept { return n_; }
  double pf_target() const noexcept { return pf_target_; }
  std::int64_t ncmax() const noexcept { return ncmax_; }

 private:
  std::int64_t d_;
  std::int64_t n_;
  double pf_target_;
  std::int64_t ncmax_;
};

/// p frequency channels x q time slots.
class ResourceGrid {
 public:
  ResourceGrid(std::int64_t p, std::int64_t q);

  std::int64_t p() const noexcept { return p_; }
  std::int64_t q() const noexcept { return q_; }
  std::int64_t n_ru() const noexcept { return p_ * q_; }

  /// Whether n repetitions fit on distinct channels and distinct slots.
  bool latin_feasible(std::int64_t n) const noexcept { return n >= 1 && n <= p_ && n <= q_; }

  std::int64_t flat(std::int64_t channel, std::int64_t slot) const noexcept {
    return channel * q_ + slot;
  }

  friend bool operator==(const ResourceGrid&, const ResourceGrid&) = default;

 private:
  std::int64_t p_;
  std::int64_t q_;
};

struct Cell {
  std::int64_t channel;
  std::int64_t slot;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// The resource units one device occupies in one frame.
///
/// Cells are stored as flat indices channel*q + slot, sorted ascending; this
/// is the canonical form used for hashing and collision counting.
class HopPattern {
 public:
  HopPattern(const ResourceGrid& grid, std::vector<std::int64_t> flat_cells);

  const ResourceGrid& grid() const noexcept { return grid_; }
  std::span<const std::int64_t> flat() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }
  std::vector<Cell> cells() const;
  bool contains(std::int64_t flat_cell) const noexcept;
  /// All channels pairwise distinct and all slots pairwise distinct.
  bool is_latin() const;

  friend bool operator==(const HopPattern&, const HopPattern&) = default;

 private:
  ResourceGrid grid_;
  std::vector<std::int64_t> cells_;
};

enum class SampleMode { Latin, Uniform };

std::string_view to_string(SampleMode mode) noexcept;
SampleMode parse_sample_mode(std::string_view text);

/// Empirical failure probability with a 95% Wilson score interval.
struct FailureEstimate {
  std::uint64_t failures = 0;
  std::uint64_t samples = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t seed = 0;

  static FailureEstimate from_counts(std::uint64_t failures, std::uint64_t samples,
                                     std::uint64_t seed);
  /// Binomial standard error at p, sqrt(p(1-p)/samples).
  double sigma_at(double p) const noexcept;
};

enum class Method { ClosedForm, NumericInversion, MonteCarlo, LinearApprox };

std::string_view to_string(Method method) noexcept;

struct DimensioningResult {
  std::int64_t n = 1;
  std::int64_t n_ru = 1;
  Method method = Method::ClosedForm;
  std::optional<double> pf_achieved;
};

/// Ordered samples without replacement from [0, size).
///
/// Partial Fisher-Yates over a virtual identity array; entries touched by
/// earlier draws are tracked with generation stamps, so a draw of k values
/// costs O(k) with no reset pass. Very large sizes fall back to rejection.
class IndexSampler {
 public:
  explicit IndexSampler(std::int64_t size);

  std::int64_t size() const noexcept { return size_; }
  void draw(RandomStream& rng, std::span<std::int64_t> out);

 private:
  std::int64_t size_;
  bool dense_;
  std::vector<std::int64_t> value_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t generation_ = 0;
};

/// Draws hop patterns for a fixed grid, repetition count and mode.
///
/// Holds scratch space sized to the grid, so one sampler per thread. Both
/// modes use a partial Fisher-Yates shuffle over a virtual index array:
/// Uniform shuffles the n_ru flat cells, Latin draws an ordered sample of n
/// channels and an ordered sample of n slots and pairs them by position,
/// which is uniform over patterns with distinct rows and columns.
class PatternSampler {
 public:
  PatternSampler(const ResourceGrid& grid, std::int64_t n, SampleMode mode);

  const ResourceGrid& grid() const noexcept { return grid_; }
  std::int64_t n() const noexcept { return n_; }
  SampleMode mode() const noexcept { return mode_; }

  /// Writes n distinct flat cells (unsorted) into out.
  void draw(RandomStream& rng, std::span<std::int64_t> out);
  HopPattern sample(RandomStream& rng);

 private:
  ResourceGrid grid_;
  std::int64_t n_;
  SampleMode mode_;
  IndexSampler first_;
  IndexSampler second_;
  std::vector<std::int64_t> scratch_;
};

/// Convenience wrapper around a one-shot PatternSampler.
HopPattern sample_pattern(const ResourceGrid& grid, std::int64_t n, SampleMode mode,
                          RandomStream& rng);

/// Divisor pair (p, q) of n_ru with p >= n and q >= n minimizing |p - q|,
/// ties broken toward p >= q. Throws NoFactorizationError when none exists.
std::pair<std::int64_t, std::int64_t> balanced_factorization(std::int64_t n_ru, std::int64_t n);

}  // namespace hopdim

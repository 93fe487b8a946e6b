#include "hopdim/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hopdim {

namespace {

// Above this size IndexSampler switches to rejection against the values
// already drawn, which needs no O(size) scratch.
constexpr std::int64_t kDenseLimit = std::int64_t{1} << 22;

// Two-sided 95% normal quantile.
constexpr double kZ95 = 1.959963984540054;

}  // namespace

ScenarioConfig::ScenarioConfig(std::int64_t d, std::int64_t n, double pf_target,
                               std::int64_t ncmax)
    : d_(d), n_(n), pf_target_(pf_target), ncmax_(ncmax) {
  if (d < 0) throw PreconditionError("d must be >= 0, got " + std::to_string(d));
  if (n < 1) throw PreconditionError("n must be >= 1, got " + std::to_string(n));
  if (!(pf_target > 0.0 && pf_target < 1.0)) {
    throw PreconditionError("pf_target must lie in (0, 1), got " + std::to_string(pf_target));
  }
  if (ncmax < 0) throw PreconditionError("ncmax must be >= 0, got " + std::to_string(ncmax));
}

ResourceGrid::ResourceGrid(std::int64_t p, std::int64_t q) : p_(p), q_(q) {
  if (p < 1 || q < 1) {
    throw PreconditionError("grid dimensions must be >= 1, got p=" + std::to_string(p) +
                            " q=" + std::to_string(q));
  }
  if (p > std::numeric_limits<std::int64_t>::max() / q) {
    throw RangeError("grid " + std::to_string(p) + "x" + std::to_string(q) + " overflows n_ru");
  }
}

HopPattern::HopPattern(const ResourceGrid& grid, std::vector<std::int64_t> flat_cells)
    : grid_(grid), cells_(std::move(flat_cells)) {
  std::sort(cells_.begin(), cells_.end());
  if (std::adjacent_find(cells_.begin(), cells_.end()) != cells_.end()) {
    throw PreconditionError("hop pattern cells must be distinct");
  }
  if (!cells_.empty() && (cells_.front() < 0 || cells_.back() >= grid_.n_ru())) {
    throw PreconditionError("hop pattern cell outside the grid");
  }
}

std::vector<Cell> HopPattern::cells() const {
  std::vector<Cell> out;
  out.reserve(cells_.size());
  for (auto f : cells_) out.push_back({f / grid_.q(), f % grid_.q()});
  return out;
}

bool HopPattern::contains(std::int64_t flat_cell) const noexcept {
  return std::binary_search(cells_.begin(), cells_.end(), flat_cell);
}

bool HopPattern::is_latin() const {
  std::vector<std::int64_t> channels;
  std::vector<std::int64_t> slots;
  for (const auto& c : cells()) {
    channels.push_back(c.channel);
    slots.push_back(c.slot);
  }
  std::sort(channels.begin(), channels.end());
  std::sort(slots.begin(), slots.end());
  return std::adjacent_find(channels.begin(), channels.end()) == channels.end() &&
         std::adjacent_find(slots.begin(), slots.end()) == slots.end();
}

std::string_view to_string(SampleMode mode) noexcept {
  return mode == SampleMode::Latin ? "latin" : "uniform";
}

SampleMode parse_sample_mode(std::string_view text) {
  if (text == "latin") return SampleMode::Latin;
  if (text == "uniform") return SampleMode::Uniform;
  throw PreconditionError("unknown sample mode '" + std::string(text) +
                          "' (expected latin or uniform)");
}

FailureEstimate FailureEstimate::from_counts(std::uint64_t failures, std::uint64_t samples,
                                             std::uint64_t seed) {
  if (samples == 0) throw PreconditionError("samples must be >= 1");
  if (failures > samples) throw PreconditionError("failures cannot exceed samples");
  FailureEstimate e;
  e.failures = failures;
  e.samples = samples;
  e.seed = seed;
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(failures) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  e.p_hat = p;
  e.ci_low = failures == 0 ? 0.0 : std::clamp(center - half, 0.0, p);
  e.ci_high = failures == samples ? 1.0 : std::clamp(center + half, p, 1.0);
  return e;
}

double FailureEstimate::sigma_at(double p) const noexcept {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::ClosedForm: return "closed_form";
    case Method::NumericInversion: return "numeric";
    case Method::MonteCarlo: return "monte_carlo";
    case Method::LinearApprox: return "linear_approx";
  }
  return "unknown";
}

IndexSampler::IndexSampler(std::int64_t size) : size_(size), dense_(size <= kDenseLimit) {
  if (dense_) {
    value_.resize(static_cast<std::size_t>(size));
    stamp_.assign(static_cast<std::size_t>(size), 0);
  }
}

void IndexSampler::draw(RandomStream& rng, std::span<std::int64_t> out) {
  const auto k = static_cast<std::int64_t>(out.size());
  if (!dense_) {
    for (std::int64_t i = 0; i < k; ++i) {
      std::int64_t v;
      do {
        v = static_cast<std::int64_t>(rng.uniform_below64(static_cast<std::uint64_t>(size_)));
      } while (std::find(out.begin(), out.begin() + i, v) != out.begin() + i);
      out[i] = v;
    }
    return;
  }
  if (++generation_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    generation_ = 1;
  }
  const std::uint32_t gen = generation_;
  std::int64_t* value = value_.data();
  std::uint32_t* stamp = stamp_.data();
  const auto size = static_cast<std::uint32_t>(size_);
  for (std::int64_t i = 0; i < k; ++i) {
    const std::int64_t j = i + rng.uniform_below(size - static_cast<std::uint32_t>(i));
    const std::int64_t vj = stamp[j] == gen ? value[j] : j;
    value[j] = stamp[i] == gen ? value[i] : i;
    stamp[j] = gen;
    out[i] = vj;
  }
}

PatternSampler::PatternSampler(const ResourceGrid& grid, std::int64_t n, SampleMode mode)
    : grid_(grid),
      n_(n),
      mode_(mode),
      first_(mode == SampleMode::Latin ? grid.p() : grid.n_ru()),
      second_(mode == SampleMode::Latin ? grid.q() : 0) {
  if (n < 1) throw PreconditionError("n must be >= 1, got " + std::to_string(n));
  if (mode == SampleMode::Uniform && n > grid.n_ru()) {
    throw PreconditionError("uniform sampling needs n <= n_ru (n=" + std::to_string(n) +
                            ", n_ru=" + std::to_string(grid.n_ru()) + ")");
  }
  if (mode == SampleMode::Latin && !grid.latin_feasible(n)) {
    throw PreconditionError("latin sampling needs n <= min(p, q) (n=" + std::to_string(n) +
                            ", p=" + std::to_string(grid.p()) + ", q=" + std::to_string(grid.q()) +
                            ")");
  }
  scratch_.resize(static_cast<std::size_t>(n));
}

void PatternSampler::draw(RandomStream& rng, std::span<std::int64_t> out) {
  if (mode_ == SampleMode::Uniform) {
    first_.draw(rng, out);
    return;
  }
  first_.draw(rng, scratch_);
  second_.draw(rng, out);
  const std::int64_t q = grid_.q();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += scratch_[i] * q;
}

HopPattern PatternSampler::sample(RandomStream& rng) {
  std::vector<std::int64_t> cells(static_cast<std::size_t>(n_));
  draw(rng, cells);
  return HopPattern(grid_, std::move(cells));
}

HopPattern sample_pattern(const ResourceGrid& grid, std::int64_t n, SampleMode mode,
                          RandomStream& rng) {
  PatternSampler sampler(grid, n, mode);
  return sampler.sample(rng);
}

std::pair<std::int64_t, std::int64_t> balanced_factorization(std::int64_t n_ru, std::int64_t n) {
  if (n_ru < 1) throw PreconditionError("n_ru must be >= 1, got " + std::to_string(n_ru));
  if (n < 1) throw PreconditionError("n must be >= 1, got " + std::to_string(n));
  auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n_ru)));
  while (root * root > n_ru) --root;
  while ((root + 1) * (root + 1) <= n_ru) ++root;
  // The smaller factor closest to sqrt(n_ru) gives the smallest |p - q|.
  for (std::int64_t q = root; q >= n; --q) {
    if (n_ru % q == 0 && n_ru / q >= n) return {n_ru / q, q};
  }
  throw NoFactorizationError("no latin-feasible factorization of n_ru=" + std::to_string(n_ru) +
                             " with p, q >= " + std::to_string(n));
}

}  // namespace hopdim

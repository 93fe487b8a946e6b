#include "hopdim/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <thread>

namespace hopdim::montecarlo {

namespace {

constexpr std::int64_t kOwnerTableLimit = std::int64_t{1} << 22;

// Thresholds t[m] = floor(2^64 * P(M <= m)) for the number M of target
// channels an interferer shares with the target, M ~ Hypergeometric(p, n, n).
std::vector<std::uint64_t> overlap_thresholds(std::int64_t p, std::int64_t n) {
  auto lchoose = [](long double a, long double b) {
    return std::lgamma(a + 1) - std::lgamma(b + 1) - std::lgamma(a - b + 1);
  };
  std::vector<std::uint64_t> t(static_cast<std::size_t>(n + 1));
  const long double total = lchoose(p, n);
  long double cum = 0.0L;
  for (std::int64_t m = 0; m <= n; ++m) {
    if (n - m <= p - n) cum += std::exp(lchoose(n, m) + lchoose(p - n, n - m) - total);
    const long double scaled = std::ldexp(std::min(cum, 1.0L), 64);
    t[m] = scaled >= 0x1p64L ? UINT64_MAX : static_cast<std::uint64_t>(scaled);
  }
  t[n] = UINT64_MAX;
  return t;
}

// Per-thread state for simulating frames.
//
// In Latin mode an interferer can only hit the target on shared channels.
// The number of shared channels is drawn from its hypergeometric law, then
// which target channels they are, then the slots of just those cells (an
// ordered sample without replacement, as in the full pattern draw).
class FrameSimulator {
 public:
  FrameSimulator(const ResourceGrid& grid, std::int64_t n, std::int64_t d, SampleMode mode,
                 std::uint64_t seed)
      : sampler_(grid, n, mode),
        grid_(grid),
        d_(d),
        seed_(seed),
        latin_(mode == SampleMode::Latin),
        positions_(n),
        slots_(grid.q()),
        target_(static_cast<std::size_t>(n)),
        interferer_(static_cast<std::size_t>(n)),
        matched_(static_cast<std::size_t>(n)),
        target_slot_(static_cast<std::size_t>(n)),
        counts_(static_cast<std::size_t>(n)) {
    if (latin_) {
      overlap_ = overlap_thresholds(grid.p(), n);
    } else if (grid.n_ru() <= kOwnerTableLimit) {
      owner_.assign(static_cast<std::size_t>(grid.n_ru()), -1);
    }
  }

  // Smallest per-repetition interferer count of sample i, capped at cap.
  std::int64_t min_count(std::uint64_t sample, std::int64_t cap) {
    RandomStream rng(seed_, sample);
    sampler_.draw(rng, target_);
    const auto n = static_cast<std::int64_t>(target_.size());
    const bool table = !owner_.empty();
    for (std::size_t k = 0; k < target_.size(); ++k) {
      if (latin_) {
        target_slot_[k] = target_[k] % grid_.q();
      } else if (table) {
        owner_[target_[k]] = static_cast<int>(k);
      }
    }
    std::fill(counts_.begin(), counts_.end(), 0);
    std::int64_t saturated = 0;
    auto hit = [&](std::int64_t k) {
      if (++counts_[k] == cap) ++saturated;
    };
    for (std::int64_t j = 0; j < d_ && saturated < n; ++j) {
      if (latin_) {
        const std::uint64_t u = rng.next_u64();
        std::size_t m = 0;
        while (u > overlap_[m]) ++m;
        if (m == 0) continue;
        const std::span<std::int64_t> which(matched_.data(), m);
        const std::span<std::int64_t> slots(interferer_.data(), m);
        positions_.draw(rng, which);
        slots_.draw(rng, slots);
        for (std::size_t i = 0; i < m; ++i) {
          if (slots[i] == target_slot_[which[i]]) hit(which[i]);
        }
        continue;
      }
      sampler_.draw(rng, interferer_);
      for (const auto cell : interferer_) {
        if (table) {
          if (const int k = owner_[cell]; k >= 0) hit(k);
        } else if (const auto it = std::find(target_.begin(), target_.end(), cell);
                   it != target_.end()) {
          hit(it - target_.begin());
        }
      }
    }
    if (table) {
      for (const auto cell : target_) owner_[cell] = -1;
    }
    if (saturated == n) return cap;
    return std::min(cap, *std::min_element(counts_.begin(), counts_.end()));
  }

 private:
  PatternSampler sampler_;
  ResourceGrid grid_;
  std::int64_t d_;
  std::uint64_t seed_;
  bool latin_;
  IndexSampler positions_;
  IndexSampler slots_;
  std::vector<std::uint64_t> overlap_;
  std::vector<std::int64_t> target_;
  std::vector<std::int64_t> interferer_;
  std::vector<std::int64_t> matched_;
  std::vector<std::int64_t> target_slot_;
  std::vector<std::int64_t> counts_;
  std::vector<int> owner_;
};

void validate_job(const SimJob& job) {
  if (job.samples < 1) throw PreconditionError("samples must be >= 1");
  if (job.chunk_size < 1) throw PreconditionError("chunk_size must be >= 1");
}

// failures[k] = number of samples whose capped minimum count exceeds k.
std::vector<std::uint64_t> count_failures(const SimJob& job, const ResourceGrid& grid,
                                          std::int64_t max_ncmax, const ExecutionOptions& exec) {
  const auto& sc = job.scenario;
  std::vector<std::uint64_t> failures(static_cast<std::size_t>(max_ncmax + 1), 0);
  // ncmax >= d can never fail.
  const std::int64_t live = std::min(max_ncmax, sc.d() - 1);
  if (live < 0) return failures;
  const std::int64_t cap = live + 1;

  const std::uint64_t chunks = (job.samples + job.chunk_size - 1) / job.chunk_size;
  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(exec.threads), chunks));
  std::atomic<std::uint64_t> next_chunk{0};
  std::vector<std::vector<std::uint64_t>> partial(threads,
                                                  std::vector<std::uint64_t>(failures.size(), 0));

  auto worker = [&](unsigned t) {
    FrameSimulator sim(grid, sc.n(), sc.d(), job.mode, job.master_seed);
    auto& local = partial[t];
    for (;;) {
      const std::uint64_t c = next_chunk.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks) break;
      const std::uint64_t begin = c * job.chunk_size;
      const std::uint64_t end = std::min(job.samples, begin + job.chunk_size);
      for (std::uint64_t i = begin; i < end; ++i) {
        const std::int64_t m = sim.min_count(i, cap);
        for (std::int64_t k = 0; k < m; ++k) ++local[k];
      }
    }
  };

  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& local : partial) {
    for (std::size_t k = 0; k < failures.size(); ++k) failures[k] += local[k];
  }
  return failures;
}

// Sorted k-subsets of [0, size).
void for_each_combination(std::int64_t size, std::int64_t k,
                          const std::function<void(const std::vector<std::int64_t>&)>& fn) {
  std::vector<std::int64_t> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    fn(idx);
    std::int64_t i = k - 1;
    while (i >= 0 && idx[i] == size - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (std::int64_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HOPDIM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ResourceGrid resolve_grid(const GridSpec& spec, std::int64_t n, SampleMode mode) {
  if (const auto* grid = std::get_if<ResourceGrid>(&spec)) return *grid;
  const auto n_ru = std::get<std::int64_t>(spec);
  const auto [p, q] = balanced_factorization(n_ru, mode == SampleMode::Latin ? n : 1);
  return ResourceGrid(p, q);
}

std::vector<FailureEstimate> estimate_failure_profile(const SimJob& job, std::int64_t max_ncmax,
                                                      const ExecutionOptions& exec) {
  validate_job(job);
  if (max_ncmax < 0) throw PreconditionError("max_ncmax must be >= 0");
  const ResourceGrid grid = resolve_grid(job.grid, job.scenario.n(), job.mode);
  // Constructing a sampler validates n against the grid for the mode.
  PatternSampler probe(grid, job.scenario.n(), job.mode);
  const auto failures = count_failures(job, grid, max_ncmax, exec);
  std::vector<FailureEstimate> out;
  out.reserve(failures.size());
  for (const auto f : failures) {
    out.push_back(FailureEstimate::from_counts(f, job.samples, job.master_seed));
  }
  return out;
}

FailureEstimate estimate_failure(const SimJob& job, const ExecutionOptions& exec) {
  const std::int64_t ncmax = job.scenario.ncmax();
  return estimate_failure_profile(job, ncmax, exec)[static_cast<std::size_t>(ncmax)];
}

std::vector<HopPattern> enumerate_patterns(const ResourceGrid& grid, std::int64_t n,
                                           SampleMode mode) {
  PatternSampler validate(grid, n, mode);
  std::vector<HopPattern> out;
  if (mode == SampleMode::Uniform) {
    for_each_combination(grid.n_ru(), n, [&](const std::vector<std::int64_t>& cells) {
      out.emplace_back(grid, cells);
    });
    return out;
  }
  for_each_combination(grid.p(), n, [&](const std::vector<std::int64_t>& channels) {
    for_each_combination(grid.q(), n, [&](const std::vector<std::int64_t>& slots) {
      std::vector<std::int64_t> perm = slots;
      do {
        std::vector<std::int64_t> cells(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = grid.flat(channels[i], perm[i]);
        out.emplace_back(grid, std::move(cells));
      } while (std::next_permutation(perm.begin(), perm.end()));
    });
  });
  return out;
}

double exact_failure_bruteforce(const ScenarioConfig& scenario, const ResourceGrid& grid,
                                SampleMode mode) {
  const auto patterns = enumerate_patterns(grid, scenario.n(), mode);
  const auto count = static_cast<double>(patterns.size());
  const double states = std::pow(count, static_cast<double>(scenario.d() + 1));
  if (states > kMaxBruteforceStates) {
    throw StateSpaceError("joint pattern space has " + std::to_string(states) +
                          " states, above the enumeration limit of " +
                          std::to_string(kMaxBruteforceStates));
  }
  const std::int64_t d = scenario.d();
  const std::int64_t threshold = scenario.ncmax() + 1;
  if (threshold > d) return 0.0;

  const auto n = static_cast<std::size_t>(scenario.n());
  std::uint64_t failing = 0;
  std::vector<std::int64_t> counts(n);
  std::vector<std::vector<std::size_t>> hits(patterns.size());

  // Depth-first over interferers; counts hold hits per target repetition.
  std::function<void(std::int64_t)> descend = [&](std::int64_t level) {
    if (level == d) {
      if (std::all_of(counts.begin(), counts.end(),
                      [&](std::int64_t c) { return c >= threshold; })) {
        ++failing;
      }
      return;
    }
    for (const auto& h : hits) {
      for (const auto k : h) ++counts[k];
      descend(level + 1);
      for (const auto k : h) --counts[k];
    }
  };

  for (const auto& target : patterns) {
    const auto cells = target.flat();
    for (std::size_t p = 0; p < patterns.size(); ++p) {
      hits[p].clear();
      for (std::size_t k = 0; k < n; ++k) {
        if (patterns[p].contains(cells[k])) hits[p].push_back(k);
      }
    }
    descend(0);
  }
  return static_cast<double>(failing) / states;
}

SearchResult search_min_ru(std::int64_t n, std::int64_t d, double pf_target, std::int64_t ncmax,
                           SampleMode mode, std::uint64_t samples, std::uint64_t master_seed,
                           const ExecutionOptions& exec) {
  const ScenarioConfig scenario(d, n, pf_target, ncmax);
  const double needed = 100.0 / pf_target;
  if (static_cast<double>(samples) < needed) {
    throw StatisticalPreconditionError(
        "samples must be >= 100/pf_target = " + std::to_string(static_cast<std::uint64_t>(std::ceil(needed))) +
        " to resolve pf_target, got " + std::to_string(samples));
  }

  std::set<std::int64_t> skipped;
  std::map<std::int64_t, std::pair<FailureEstimate, ResourceGrid>> evaluated;

  auto grid_for = [&](std::int64_t n_ru) -> std::optional<ResourceGrid> {
    try {
      return resolve_grid(GridSpec{n_ru}, n, mode);
    } catch (const NoFactorizationError&) {
      skipped.insert(n_ru);
      return std::nullopt;
    }
  };
  auto passes = [&](std::int64_t n_ru, const ResourceGrid& grid) {
    auto it = evaluated.find(n_ru);
    if (it == evaluated.end()) {
      SimJob job{scenario, grid, mode, samples, derive_seed(master_seed, static_cast<std::uint64_t>(n_ru))};
      it = evaluated.emplace(n_ru, std::make_pair(estimate_failure(job, exec), grid)).first;
    }
    return it->second.first.p_hat <= pf_target;
  };
  // First latin-feasible value >= from (strictly below stop when given).
  auto feasible_up = [&](std::int64_t from, std::int64_t stop) -> std::optional<std::pair<std::int64_t, ResourceGrid>> {
    for (std::int64_t v = from; v < stop; ++v) {
      if (auto g = grid_for(v)) return std::make_pair(v, *g);
    }
    return std::nullopt;
  };

  const std::int64_t start = mode == SampleMode::Latin ? n * n : n;
  const std::int64_t limit = std::int64_t{1} << 40;
  std::int64_t fail_at = start;
  std::int64_t pass_at = 0;
  if (passes(start, *grid_for(start))) {
    pass_at = start;
  } else {
    for (std::int64_t probe = 2 * start;; probe = 2 * fail_at) {
      if (probe > limit) throw RangeError("search_min_ru bracket exceeded " + std::to_string(limit));
      const auto cand = feasible_up(probe, limit);
      if (!cand) throw RangeError("no feasible grid below " + std::to_string(limit));
      if (passes(cand->first, cand->second)) {
        pass_at = cand->first;
        break;
      }
      fail_at = cand->first;
    }
    for (;;) {
      const std::int64_t mid = fail_at + (pass_at - fail_at) / 2;
      if (mid == fail_at) break;
      auto cand = feasible_up(mid, pass_at);
      if (!cand) {
        for (std::int64_t v = mid - 1; v > fail_at && !cand; --v) {
          if (auto g = grid_for(v)) cand = std::make_pair(v, *g);
        }
      }
      if (!cand) break;
      if (passes(cand->first, cand->second)) {
        pass_at = cand->first;
      } else {
        fail_at = cand->first;
      }
    }
  }

  const auto& [estimate, grid] = evaluated.at(pass_at);
  SearchResult out{DimensioningResult{n, pass_at, Method::MonteCarlo, estimate.p_hat}, estimate,
                   grid, {}, static_cast<std::int64_t>(evaluated.size())};
  out.skipped.assign(skipped.begin(), skipped.end());
  return out;
}

}  // namespace hopdim::montecarlo

#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "hopdim/core.hpp"

namespace hopdim::montecarlo {

/// Either an explicit grid or an n_ru to factorize with balanced_factorization
/// (with the repetition count as lower bound in Latin mode, 1 in Uniform mode).
using GridSpec = std::variant<ResourceGrid, std::int64_t>;

struct SimJob {
  ScenarioConfig scenario;
  GridSpec grid;
  SampleMode mode = SampleMode::Latin;
  std::uint64_t samples = 1;
  std::uint64_t master_seed = 0;
  std::uint64_t chunk_size = 1u << 16;
};

struct ExecutionOptions {
  /// 0 selects HOPDIM_THREADS from the environment, else the hardware count.
  unsigned threads = 0;
};

unsigned resolve_threads(unsigned requested);

ResourceGrid resolve_grid(const GridSpec& spec, std::int64_t n, SampleMode mode);

/// Empirical failure probability of the job's scenario.
///
/// Sample i draws the target pattern and then d interferer patterns from
/// Philox substream (master_seed, i); repetition k is lost when more than
/// ncmax interferers occupy its cell, and the frame fails when all n are
/// lost. The result depends only on the job, never on chunk size or
/// thread count.
FailureEstimate estimate_failure(const SimJob& job, const ExecutionOptions& exec = {});

/// Estimates for ncmax = 0 .. max_ncmax from one shared set of samples
/// (the job's own ncmax is ignored). Entry k equals estimate_failure with
/// ncmax = k bit for bit.
std::vector<FailureEstimate> estimate_failure_profile(const SimJob& job, std::int64_t max_ncmax,
                                                      const ExecutionOptions& exec = {});

/// Every pattern the sampler can produce for (grid, n, mode).
std::vector<HopPattern> enumerate_patterns(const ResourceGrid& grid, std::int64_t n,
                                           SampleMode mode);

/// Largest joint pattern space exact_failure_bruteforce accepts.
inline constexpr double kMaxBruteforceStates = 1e8;

/// Exact failure probability by enumerating all (d+1)-tuples of patterns.
/// Throws StateSpaceError when patterns^(d+1) exceeds kMaxBruteforceStates.
double exact_failure_bruteforce(const ScenarioConfig& scenario, const ResourceGrid& grid,
                                SampleMode mode);

struct SearchResult {
  DimensioningResult result;
  FailureEstimate estimate;  // at the returned n_ru
  ResourceGrid grid;         // grid simulated at the returned n_ru
  std::vector<std::int64_t> skipped;  // candidates with no latin factorization
  std::int64_t evaluations = 0;
};

/// Smallest n_ru whose empirical failure probability is <= pf_target.
///
/// Exponential bracket from the smallest admissible n_ru, then bisection on
/// the empirical predicate. Every candidate n_ru gets its own master seed
/// derived from (master_seed, n_ru). Requires samples >= 100 / pf_target.
SearchResult search_min_ru(std::int64_t n, std::int64_t d, double pf_target, std::int64_t ncmax,
                           SampleMode mode, std::uint64_t samples, std::uint64_t master_seed,
                           const ExecutionOptions& exec = {});

}  // namespace hopdim::montecarlo

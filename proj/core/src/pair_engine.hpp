#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "semigap/estimators.hpp"

namespace semigap::detail {

struct CloudPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double distance = 0.0;
  std::size_t band = 0;
};

/// Max ratio candidate; ordered by ratio, then the smallest
/// (dt index, n, u index, v index).
struct Best {
  double ratio = -1.0;
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t i = 0;
  std::size_t j = 0;
};

bool better(const Best& a, const Best& b);

struct BandStats {
  Best best;
  /// profile[k][n - 1]: max ratio at n on rung k, -1 when nothing was admissible.
  std::vector<std::vector<double>> profile;
  std::size_t pairs_evaluated = 0;
  std::size_t skipped_pairs = 0;
  std::size_t evaluations = 0;
  std::size_t skipped_evaluations = 0;
};

/// Evaluates every pair on every rung of the setup's ladder once and folds
/// the ratios into per-band statistics. Bit-identical for any worker count.
std::vector<BandStats> run_pair_engine(const EstimatorSetup& setup,
                                       std::span<const CloudPair> pairs, std::size_t bands);

/// Merges the given bands into one estimate. Throws EmptySample when no pair
/// was admissible.
StabilityEstimate assemble_estimate(const EstimatorSetup& setup, StabilityKind kind,
                                    std::optional<double> threshold,
                                    std::span<const BandStats> bands, std::size_t duplicates);

/// Distant estimates for a descending rho ladder from one engine pass;
/// entry r equals estimate_distant_stability(setup, rho[r]) or is empty.
std::vector<std::optional<StabilityEstimate>> distant_ladder(const EstimatorSetup& setup,
                                                             std::span<const double> rho);

/// Smallest nonzero pair distance in the cloud, 0 if there is none.
double min_pair_distance(const EstimatorSetup& setup);

/// Runs fn(worker, begin, end) over a static partition of [0, count).
template <class Fn>
void parallel_for(int workers, std::size_t count, Fn&& fn);

}  // namespace semigap::detail

#include <thread>

namespace semigap::detail {

template <class Fn>
void parallel_for(int workers, std::size_t count, Fn&& fn) {
  const std::size_t w = workers < 1 ? 1 : static_cast<std::size_t>(workers);
  if (w == 1 || count < 2) {
    fn(std::size_t{0}, std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t begin = count * t / w;
    const std::size_t end = count * (t + 1) / w;
    threads.emplace_back([&fn, t, begin, end] { fn(t, begin, end); });
  }
}

}  // namespace semigap::detail

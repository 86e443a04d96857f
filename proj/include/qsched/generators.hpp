#pragma once

#include "qsched/model.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>

namespace qsched {

/// Deterministic source for every generator: std::mt19937_64 seeded with the
/// 64-bit seed, with unbiased bounded draws by rejection on the raw 64-bit
/// output. Sequences are identical on every conforming standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

struct GeneratorParams {
  int n = 8;
  /// Latest release and deadline allowed.
  int horizon = 6;
  int buffer_size = 2;
  /// Weights are uniform integers in [weight_min, weight_max] divided by
  /// weight_denominator.
  int weight_min = 1;
  int weight_max = 16;
  int weight_denominator = 1;
  /// deadline - release is uniform in [0, max_span], clipped at the horizon.
  /// Negative means unlimited.
  int max_span = -1;
  /// 0 spreads releases uniformly over [1, horizon]; k > 0 first draws k
  /// burst times and releases every packet at one of them.
  int burst_slots = 0;
  std::uint64_t seed = 1;
};

/// Throws std::invalid_argument on n < 0, horizon < 1, B < 1, an empty or
/// non-positive weight range, or a non-positive denominator.
void validate_params(const GeneratorParams& params);

/// B packets (r=1, d=1, w=1) with ids 0..B-1, then B-1 packets
/// (r=1, d=B, w=1-eps). Requires B >= 2 and 0 < eps < 1.
Trace gen_killer(int buffer_size, const Weight& eps);

Trace gen_random(const GeneratorParams& params);

/// A family of random traces whose size parameters vary per member. Member
/// i uses seed s = derive_seed(seed, i): n, B and horizon are drawn uniformly
/// from the ranges with Rng(s ^ 0x5bd1e995), then the trace with Rng(s).
struct RandomFamily {
  int n_min = 0, n_max = 8;
  int b_min = 1, b_max = 3;
  int horizon_min = 1, horizon_max = 6;
  int weight_min = 1, weight_max = 16;
  int weight_denominator = 1;
  int max_span = -1;
  int burst_slots = 0;
  std::uint64_t seed = 1;

  GeneratorParams member(std::uint64_t index) const;
  Trace generate(std::uint64_t index) const { return gen_random(member(index)); }
};

/// SplitMix64 finalizer over seed + golden-ratio * index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace qsched

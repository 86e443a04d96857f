#include "qsched/generators.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

namespace qsched {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("Rng::uniform: empty range");
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) return static_cast<std::int64_t>(next());  // full 64-bit range
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t draw;
  do {
    draw = next();
  } while (draw >= limit);
  return lo + static_cast<std::int64_t>(draw % range);
}

void validate_params(const GeneratorParams& p) {
  std::string problem;
  if (p.n < 0) problem = "n < 0";
  else if (p.horizon < 1) problem = "horizon < 1";
  else if (p.buffer_size < 1) problem = "B < 1";
  else if (p.weight_min < 1 || p.weight_max < p.weight_min) problem = "weight range must satisfy 1 <= min <= max";
  else if (p.weight_denominator < 1) problem = "weight denominator < 1";
  if (!problem.empty()) throw std::invalid_argument("generator params: " + problem);
}

Trace gen_killer(int buffer_size, const Weight& eps) {
  if (buffer_size < 2) throw std::invalid_argument("gen_killer: B must be >= 2");
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("gen_killer: eps must lie in (0, 1)");
  RawTrace raw;
  raw.buffer_size = buffer_size;
  int id = 0;
  for (int i = 0; i < buffer_size; ++i) raw.packets.push_back({id++, 1, 1, Weight(1)});
  for (int i = 0; i + 1 < buffer_size; ++i) raw.packets.push_back({id++, 1, buffer_size, Weight(1) - eps});
  return make_trace(raw);
}

Trace gen_random(const GeneratorParams& params) {
  validate_params(params);
  Rng rng(params.seed);
  std::vector<Time> bursts;
  for (int i = 0; i < params.burst_slots; ++i) bursts.push_back(static_cast<Time>(rng.uniform(1, params.horizon)));

  RawTrace raw;
  raw.buffer_size = params.buffer_size;
  for (int id = 0; id < params.n; ++id) {
    Packet p;
    p.id = id;
    p.release = bursts.empty() ? static_cast<Time>(rng.uniform(1, params.horizon))
                               : bursts[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(bursts.size()) - 1))];
    int span_cap = params.horizon - p.release;
    if (params.max_span >= 0) span_cap = std::min(span_cap, params.max_span);
    p.deadline = p.release + static_cast<Time>(rng.uniform(0, span_cap));
    p.weight = Weight(rng.uniform(params.weight_min, params.weight_max), params.weight_denominator);
    raw.packets.push_back(p);
  }
  return make_trace(raw);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

GeneratorParams RandomFamily::member(std::uint64_t index) const {
  GeneratorParams p;
  p.seed = derive_seed(seed, index);
  Rng rng(p.seed ^ 0x5bd1e995ULL);
  p.n = static_cast<int>(rng.uniform(n_min, n_max));
  p.buffer_size = static_cast<int>(rng.uniform(b_min, b_max));
  p.horizon = static_cast<int>(rng.uniform(horizon_min, horizon_max));
  p.weight_min = weight_min;
  p.weight_max = weight_max;
  p.weight_denominator = weight_denominator;
  p.max_span = max_span;
  p.burst_slots = burst_slots;
  return p;
}

}  // namespace qsched

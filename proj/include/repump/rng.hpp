#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>

namespace repump {

// splitmix64 finalizer; used only to spread seed material, never as the
// sampling engine itself.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seed for substream `stream` of a master seed. Substreams are the unit of
// parallel work (one per trial / sequence / bootstrap resample), so results
// do not depend on how work is scheduled across threads.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream) {
  return mix64(mix64(master) ^ mix64(stream * 0x9E3779B97F4A7C15ull + 0x632BE59BD9B4E019ull));
}

// One independent random stream. All floating draws are built from raw
// mt19937_64 words (bit-exact per the standard), so outputs are reproducible
// across platforms; std::*_distribution is deliberately not used.
class Substream {
 public:
  Substream(std::uint64_t master_seed, std::uint64_t stream)
      : engine_(derive_stream_seed(master_seed, stream)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::domain_error("Substream::below: n must be positive");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  // Index into a weight table (weights need not be normalized).
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

  // Bernoulli-sum binomial; exact and deterministic, fine for the shot
  // counts used here.
  std::uint64_t binomial(std::uint64_t n, double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n;
    std::uint64_t k = 0;
    for (std::uint64_t i = 0; i < n; ++i) k += bernoulli(p);
    return k;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace repump

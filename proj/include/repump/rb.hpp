#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace repump {

// Randomized-benchmarking design. error_per_clifford flips the tracked
// state with the given probability after every random gate; when a sequence
// is interleaved, the interleaved channel adds an extra flip with
// probability interleaved_extra_error and removes the qubit to an absorbing
// dark state with probability interleaved_leak_rate (a dark shot counts as
// measurement failure).
struct RBConfig {
  std::vector<std::uint32_t> sequence_lengths{2, 50, 150};
  std::uint32_t sequences_per_length = 10;
  std::uint64_t shots = 1000;
  double error_per_clifford = 0.0;
  double interleaved_extra_error = 0.0;
  double interleaved_leak_rate = 0.0;
  std::uint64_t seed = 0;
};

void validate(const RBConfig& config);

struct RBRow {
  std::uint32_t length = 0;
  std::uint32_t seq_index = 0;
  double survival = 0.0;
  std::uint64_t shots = 0;
};

struct RBDataset {
  std::vector<RBRow> rows;
};

// Shot-level simulation over the 24-element single-qubit rotation group:
// uniform random sequences closed by the exact inversion element, with the
// stochastic error channels above applied after each random gate. Every
// (length, sequence) unit draws from its own substream, so the dataset is
// deterministic under (seed, config) for any worker count.
RBDataset simulate_rb(const RBConfig& config, bool interleaved, unsigned workers = 1);

// survival = A * p^m + B
struct DecayFit {
  double amplitude = 0.0;
  double rate = 1.0;
  double baseline = 0.0;
  double amplitude_sigma = 0.0;
  double rate_sigma = 0.0;
  double baseline_sigma = 0.0;
  double residual_norm = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

// Weighted fit of the standard decay equation; needs >= 3 distinct lengths.
DecayFit fit_decay(const RBDataset& dataset);

// Interleaved-gate average error, (1 - p_int/p_ref) / 2. May come out
// slightly negative under noise; it is returned as-is and flagged in the
// CLI report rather than clamped.
double interleaved_error(double p_ref, double p_int);

struct BootstrapInterval {
  double lo = 0.0;
  double hi = 0.0;
  double point = 0.0;            // estimate from the unresampled datasets
  double confidence = 0.68;
  std::uint32_t resamples = 0;
  bool shot_only_fallback = false;  // single sequence per length somewhere
};

// Semi-parametric bootstrap: sequences are resampled with replacement
// within each length, then each selected sequence's shots are redrawn
// binomially from its frequency; both decays are refitted and the
// interleaved error recomputed per resample. The interval is the empirical
// quantile pair at the requested confidence. resamples must be >= 100.
BootstrapInterval bootstrap_ci(const RBDataset& reference, const RBDataset& interleaved,
                               std::uint32_t resamples, double confidence, std::uint64_t seed,
                               unsigned workers = 1);

struct PopulationDecayFit {
  double lambda = 0.0;        // per cycle
  double lambda_sigma = 0.0;
  bool converged = false;
};

// Fits survival = exp(-lambda n) to (cycle count, survival) points; the
// uncertainty comes from the curvature with the noise level estimated from
// the residuals. Needs >= 3 points.
PopulationDecayFit fit_population_decay(std::span<const std::pair<double, double>> points);

// CSV columns: length,seq_index,survival,shots
void write_rb_csv(std::ostream& out, const RBDataset& dataset);
void write_rb_csv(const std::filesystem::path& file, const RBDataset& dataset);
RBDataset read_rb_csv(const std::filesystem::path& file);

}  // namespace repump

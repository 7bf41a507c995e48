#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stbclab/code.hpp"
#include "stbclab/constellation.hpp"
#include "stbclab/rng.hpp"

namespace stbclab {

// Quasi-static Rayleigh fading: entries i.i.d. CN(0,1), constant over a
// codeword, drawn fresh per codeword.
ComplexMatrix sample_channel(std::size_t n_tx, std::size_t n_rx, CounterRng& rng);

// Noise variance for a received SNR of snr_db per receive antenna:
// N0 = n_tx / rho. Codewords carry average power n_tx per channel use in
// total (power_scale normalizes to 1 per antenna), so E|signal|^2 / N0 = rho
// at each receive antenna under unit-variance fading.
double received_snr_to_n0(double snr_db, const CodeSpec& code);

enum class DecoderKind { exhaustive, conditional };

// Stop a BER point after min_bit_errors have been seen (checked at fixed
// batch boundaries) or max_codewords simulated, whichever comes first.
struct StopRule {
  std::uint64_t min_bit_errors = 500;
  std::uint64_t max_codewords = 1000000;
};

struct BerPoint {
  double snr_db = 0.0;
  double ber = 0.0;
  std::uint64_t bit_errors = 0;
  std::uint64_t bits = 0;
  std::uint64_t codewords = 0;
};

struct SweepResult {
  CodeId code_id{};
  std::size_t n_rx = 0;
  std::uint64_t seed = 0;
  DecoderKind decoder{};
  std::vector<BerPoint> points;
};

// Simulates uncoded BER per SNR point. Per-trial substreams are addressed by
// (seed, snr index, trial index), so results are identical for any worker
// count and for both decoders under equal seeds. Throws std::invalid_argument
// if both stop bounds are zero or the SNR list is empty.
SweepResult simulate_ber(const CodeSpec& code, const Constellation& c,
                         std::span<const double> snr_db, std::size_t n_rx,
                         const StopRule& stop, DecoderKind decoder,
                         std::uint64_t seed, int threads = 0);

struct DecodeCheckReport {
  std::uint64_t trials = 0;
  std::uint64_t mismatches = 0;
  double agreement = 0.0;
  std::uint64_t conditional_metrics_per_decode = 0;
  std::uint64_t exhaustive_metrics_per_decode = 0;
};

// Runs both decoders on identical noisy receptions and compares decisions
// symbol-for-symbol.
DecodeCheckReport decode_check(const CodeSpec& code, const Constellation& c,
                               std::uint64_t trials, double snr_db, std::size_t n_rx,
                               std::uint64_t seed, int threads = 0);

}  // namespace stbclab

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stbclab/code.hpp"
#include "stbclab/complex_matrix.hpp"

namespace stbclab {

enum class CapacityEstimator { monte_carlo, closed_form };

struct CapacityPoint {
  double snr_db = 0.0;
  double bits_per_channel_use = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  CapacityEstimator estimator = CapacityEstimator::monte_carlo;
};

// Ergodic capacity E log2 det(I + (rho/n_tx) H^H H) of the unconstrained
// n_tx x n_rx Rayleigh channel, by Monte Carlo over `trials` channel draws.
// stream_point separates substreams when several curves share a seed.
CapacityPoint ergodic_capacity(double snr_db, std::size_t n_tx, std::size_t n_rx,
                               std::uint64_t trials, std::uint64_t seed,
                               std::uint32_t stream_point = 0, int threads = 0);

// Equivalent channel of a code: h_eq satisfies
//   vec_received(code, encode(s) * H) == h_eq * interleaved_vector(code, s)
// exactly, where vec_received stacks the received block per receive antenna
// (time-ordered) and conjugates the rows marked in conjugated_rows (the
// even time slots, where the design places the conjugated symbols).
// Overlay-reduced codes keep the parent code's eight interleaved columns;
// interleaved_vector zero-fills the absent symbols.
struct EquivalentChannel {
  ComplexMatrix h_eq;                 // (time_slots * n_rx) x columns
  std::vector<bool> conjugated_rows;  // per stacked row
  std::size_t columns = 0;
};

EquivalentChannel equivalent_channel(const CodeSpec& code, const ComplexMatrix& h);

// The symbol vector the equivalent channel acts on: coordinate-interleaved
// entries (Re of one symbol + j Im of its partner), 4 entries for q44/q34,
// 8 for the x-codes.
std::vector<cplx> interleaved_vector(const CodeSpec& code, std::span<const cplx> symbols);

// Stacks y per receive antenna and applies the code's row conjugation.
std::vector<cplx> vec_received(const CodeSpec& code, const ComplexMatrix& y);

// Maximum mutual information of the code's equivalent channel:
// (1/T) E log2 det(I + (rho/n_tx) h_eq^H h_eq).
CapacityPoint mmi_monte_carlo(const CodeSpec& code, double snr_db, std::size_t n_rx,
                              std::uint64_t trials, std::uint64_t seed,
                              std::uint32_t stream_point = 0, int threads = 0);

// Closed-form MMI of the coordinate-interleaved codes in terms of scalar
// channel capacities:
//   q44: C(n_rx*rho, 2*n_rx, 1)
//   q34: (1/2)[C(4*rho*n_rx/3, 2*n_rx, 1) + C(2*rho*n_rx/3, n_rx, 1)]
// evaluated by Monte Carlo over the same number of draws per term. Throws
// std::invalid_argument for other codes.
CapacityPoint mmi_ciod_closed_form(CodeId id, double snr_db, std::size_t n_rx,
                                   std::uint64_t trials, std::uint64_t seed,
                                   std::uint32_t stream_point = 0, int threads = 0);

// Capacity reachable by an orthogonal design of rate R:
// R * C(rho * n_rx / R, n_tx * n_rx, 1). Throws std::invalid_argument if
// rate <= 0.
CapacityPoint ostbc_capacity(double rate, double snr_db, std::size_t n_tx,
                             std::size_t n_rx, std::uint64_t trials, std::uint64_t seed,
                             std::uint32_t stream_point = 0, int threads = 0);

}  // namespace stbclab

#pragma once

#include <cstdint>
#include <vector>

#include "stbclab/code.hpp"
#include "stbclab/complex_matrix.hpp"
#include "stbclab/constellation.hpp"

namespace stbclab {

struct DecodeResult {
  std::vector<cplx> symbols;            // decided constellation points, k_total
  std::vector<std::size_t> indices;     // constellation indices of the decision
  double metric = 0.0;                  // ||Y - encode(decision)*H||_F^2
  std::uint64_t metric_computations = 0;
};

// Single-symbol estimates after interference-free combining of one
// coordinate-interleaved codeword (overlay already subtracted from Z).
// alpha/beta are the channel gains of the first/second antenna pair.
struct CoreCombined {
  cplx y0, y1, y2, y3;  // combined Alamouti outputs
  double alpha = 0.0;
  double beta = 0.0;
  cplx x0, x1, x2, x3;  // coordinate-reassembled symbol estimates
};

// Combines the intermediate matrix Z (time_slots x n_rx) against channel H
// (n_tx x n_rx). For three transmit antennas the fourth channel column is
// treated as zero. Throws std::invalid_argument on shape mismatch.
CoreCombined combine_core(const ComplexMatrix& z, const ComplexMatrix& h, std::size_t n_tx);

// Brute-force maximum-likelihood decision over all |c|^k_total codewords.
// Ties broken toward the lexicographically smallest index vector.
DecodeResult ml_decode_exhaustive(const ComplexMatrix& y, const ComplexMatrix& h,
                                  const CodeSpec& code, const Constellation& c);

// Conditional ML: hypothesizes the overlay symbols (|c|^overlay_count
// combinations), cancels them, recovers the four core symbols one at a time
// from the combined estimates with the weighted per-symbol rules, then ranks
// the assembled candidates by the full codeword metric. Decision-identical to
// ml_decode_exhaustive; metric_computations counts the per-symbol rule
// evaluations, k_core * |c|^(overlay_count+1) in total. Throws
// std::invalid_argument if the code has no overlay symbols.
DecodeResult conditional_ml_decode(const ComplexMatrix& y, const ComplexMatrix& h,
                                   const CodeSpec& code, const Constellation& c);

}  // namespace stbclab

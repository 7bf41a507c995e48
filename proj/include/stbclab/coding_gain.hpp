#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stbclab/code.hpp"
#include "stbclab/constellation.hpp"

namespace stbclab {

// Result of a minimum-determinant search over all symbol-difference vectors.
// delta_min is det(DX^H DX) for n_tx == time_slots, or the product of the
// n_tx nonzero eigenvalues (= det of the n_tx x n_tx Gram) otherwise, both on
// the unscaled codeword difference.
struct DeltaReport {
  CodeId code_id{};
  double theta_deg = 0.0;
  double rotation_deg = 0.0;
  double delta_min = 0.0;
  double coding_gain = 0.0;  // delta_min^(1/n_tx)
  std::size_t min_rank = 0;  // minimum rank of any nonzero difference codeword
  std::vector<cplx> argmin_difference;
  std::uint64_t search_space_size = 0;  // |difference_set|^k_total - 1
};

// Determinant criterion value for one symbol-difference vector. Throws
// std::invalid_argument on length mismatch or an all-zero difference.
double delta_of_difference(const CodeSpec& code, std::span<const cplx> diff);

// Exhaustive scan of every nonzero difference vector. The minimum is linear
// in symbol differences, so scanning difference vectors covers every codeword
// pair. Deterministic for any worker count (ties keep the first vector in
// enumeration order). Throws std::invalid_argument if the difference set is
// trivial ({0} only).
DeltaReport delta_min_search(const CodeSpec& code, const Constellation& c, int threads = 0);

// True iff every nonzero difference codeword has full column rank; early-exits
// on the first deficiency.
bool full_diversity_check(const CodeSpec& code, const Constellation& c, int threads = 0);

struct ThetaTracePoint {
  double theta_deg = 0.0;
  double delta_min = 0.0;
};

struct ThetaSearchResult {
  double best_theta_deg = 0.0;
  DeltaReport best;
  std::vector<ThetaTracePoint> trace;  // one entry per grid point, in grid order
};

// Evaluates delta_min_search at each grid angle (degrees) for the given
// code's family and returns the maximizer; ties go to the smaller theta.
// Throws std::invalid_argument for an empty grid.
ThetaSearchResult theta_search(const CodeSpec& code, const Constellation& c,
                               std::span<const double> grid_deg, int threads = 0);

}  // namespace stbclab

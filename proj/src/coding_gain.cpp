#include "stbclab/coding_gain.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stbclab/linalg.hpp"
#include "stbclab/parallel.hpp"

namespace stbclab {
namespace {

// delta == 0 decides rank deficiency; determinants of full-rank differences
// for the constellations in play sit far above this.
constexpr double kZeroDeltaTol = 1e-9;

inline cplx det3x3(cplx a, cplx b, cplx c, cplx d, cplx e, cplx f, cplx g, cplx h, cplx i) {
  return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

// |det|^2 of a 4x4 row-major difference codeword; equals det(DX DX^H).
inline double delta_square4(const cplx* m) {
  const cplx d = m[0] * det3x3(m[5], m[6], m[7], m[9], m[10], m[11], m[13], m[14], m[15]) -
                 m[1] * det3x3(m[4], m[6], m[7], m[8], m[10], m[11], m[12], m[14], m[15]) +
                 m[2] * det3x3(m[4], m[5], m[7], m[8], m[9], m[11], m[12], m[13], m[15]) -
                 m[3] * det3x3(m[4], m[5], m[6], m[8], m[9], m[10], m[12], m[13], m[14]);
  return std::norm(d);
}

// det of the 3x3 Gram of a 4x3 row-major difference codeword: the product of
// the three nonzero eigenvalues of DX DX^H.
inline double delta_gram3(const cplx* m) {
  double g00 = 0.0, g11 = 0.0, g22 = 0.0;
  cplx g01{}, g02{}, g12{};
  for (int t = 0; t < 4; ++t) {
    const cplx a = m[3 * t], b = m[3 * t + 1], c = m[3 * t + 2];
    g00 += std::norm(a);
    g11 += std::norm(b);
    g22 += std::norm(c);
    g01 += std::conj(a) * b;
    g02 += std::conj(a) * c;
    g12 += std::conj(b) * c;
  }
  const double d = g00 * g11 * g22 - g00 * std::norm(g12) - g22 * std::norm(g01) -
                   g11 * std::norm(g02) + 2.0 * (g01 * g12 * std::conj(g02)).real();
  // the Gram is positive semidefinite; cancellation can leave -1e-13 dust on
  // singular differences
  return d < 0.0 ? 0.0 : d;
}

struct ChunkOutcome {
  double min_delta = std::numeric_limits<double>::infinity();
  std::array<int, 8> argmin{};
  std::size_t min_rank = 0;
  bool deficiency_found = false;
  std::uint64_t visited = 0;
};

// Exhaustive odometer scan over difference vectors, chunked by the first two
// coordinates so the enumeration order (and thus tie-breaking) is independent
// of the worker count.
class DifferenceScan {
 public:
  DifferenceScan(const CodeSpec& code, const Constellation& c)
      : k_(static_cast<int>(code.k_total())),
        entries_(static_cast<int>(code.time_slots * code.n_tx)),
        square_(code.time_slots == code.n_tx),
        n_tx_(code.n_tx),
        rows_(code.time_slots),
        diffs_(difference_set(c)) {
    n_d_ = static_cast<int>(diffs_.size());
    zero_ = -1;
    for (int i = 0; i < n_d_; ++i)
      if (std::abs(diffs_[i]) < 1e-12) zero_ = i;
    if (n_d_ < 2 || zero_ < 0)
      throw std::invalid_argument("delta search: difference set is trivial");
    // contribution of (level, difference index) at the unscaled normalization
    contrib_.assign(static_cast<std::size_t>(k_) * n_d_ * entries_, cplx{});
    for (int lvl = 0; lvl < k_; ++lvl) {
      const auto& a = code.real_basis[static_cast<std::size_t>(lvl)].data();
      const auto& b = code.imag_basis[static_cast<std::size_t>(lvl)].data();
      for (int d = 0; d < n_d_; ++d) {
        cplx* out = contrib(lvl, d);
        for (int e = 0; e < entries_; ++e)
          out[e] = diffs_[static_cast<std::size_t>(d)].real() * a[static_cast<std::size_t>(e)] +
                   diffs_[static_cast<std::size_t>(d)].imag() * b[static_cast<std::size_t>(e)];
      }
    }
  }

  std::size_t chunk_count() const { return static_cast<std::size_t>(n_d_) * n_d_; }

  std::uint64_t space_size() const {
    std::uint64_t total = 1;
    for (int i = 0; i < k_; ++i) total *= static_cast<std::uint64_t>(n_d_);
    return total - 1;
  }

  const std::vector<cplx>& diffs() const { return diffs_; }

  ChunkOutcome scan_chunk(std::size_t chunk, bool early_exit,
                          std::atomic<bool>* stop) const {
    ChunkOutcome out;
    out.min_rank = n_tx_;
    std::array<int, 8> idx{};
    idx[0] = static_cast<int>(chunk) / n_d_;
    idx[1] = static_cast<int>(chunk) % n_d_;

    // acc[l] = accumulated difference codeword over levels < l
    std::array<std::array<cplx, 16>, 9> acc{};
    std::array<int, 9> live{};  // nonzero coordinate count over levels < l
    live[0] = 0;
    accumulate(acc[0].data(), acc[1].data(), 0, idx[0]);
    live[1] = live[0] + (idx[0] != zero_);
    accumulate(acc[1].data(), acc[2].data(), 1, idx[1]);
    live[2] = live[1] + (idx[1] != zero_);
    for (int l = 2; l < k_; ++l) {
      idx[l] = 0;
      accumulate(acc[l].data(), acc[l + 1].data(), l, 0);
      live[l + 1] = live[l] + (0 != zero_ ? 1 : 0);
    }

    for (;;) {
      if (live[k_] > 0) {
        ++out.visited;
        const cplx* leaf = acc[k_].data();
        const double delta = square_ ? delta_square4(leaf) : delta_gram3(leaf);
        if (delta < out.min_delta) {
          out.min_delta = delta;
          out.argmin = idx;
        }
        if (delta <= kZeroDeltaTol) {
          out.deficiency_found = true;
          if (early_exit) return out;
          const std::size_t r = leaf_rank(leaf);
          if (r < out.min_rank) out.min_rank = r;
        }
      }
      // odometer step over levels k-1 .. 2
      int l = k_ - 1;
      while (l >= 2 && idx[l] + 1 >= n_d_) --l;
      if (l < 2) break;
      ++idx[l];
      if (early_exit && stop->load(std::memory_order_relaxed)) break;
      for (int m = l; m < k_; ++m) {
        if (m > l) idx[m] = 0;
        accumulate(acc[m].data(), acc[m + 1].data(), m, idx[m]);
        live[m + 1] = live[m] + (idx[m] != zero_);
      }
    }
    return out;
  }

  ComplexMatrix materialize(const std::array<int, 8>& idx) const {
    std::vector<cplx> d(static_cast<std::size_t>(k_));
    for (int i = 0; i < k_; ++i) d[static_cast<std::size_t>(i)] = diffs_[static_cast<std::size_t>(idx[i])];
    ComplexMatrix m(rows_, static_cast<std::size_t>(entries_) / rows_);
    cplx* out = m.data().data();
    for (int lvl = 0; lvl < k_; ++lvl) {
      const cplx* c = contrib(lvl, idx[static_cast<std::size_t>(lvl)]);
      for (int e = 0; e < entries_; ++e) out[e] += c[e];
    }
    return m;
  }

  std::vector<cplx> difference_values(const std::array<int, 8>& idx) const {
    std::vector<cplx> d(static_cast<std::size_t>(k_));
    for (int i = 0; i < k_; ++i) d[static_cast<std::size_t>(i)] = diffs_[static_cast<std::size_t>(idx[i])];
    return d;
  }

 private:
  cplx* contrib(int lvl, int d) {
    return contrib_.data() + (static_cast<std::size_t>(lvl) * n_d_ + d) * entries_;
  }
  const cplx* contrib(int lvl, int d) const {
    return contrib_.data() + (static_cast<std::size_t>(lvl) * n_d_ + d) * entries_;
  }

  void accumulate(const cplx* base, cplx* out, int lvl, int d) const {
    const cplx* c = contrib(lvl, d);
    for (int e = 0; e < entries_; ++e) out[e] = base[e] + c[e];
  }

  std::size_t leaf_rank(const cplx* leaf) const {
    std::vector<cplx> data(leaf, leaf + entries_);
    ComplexMatrix m(rows_, static_cast<std::size_t>(entries_) / rows_, std::move(data));
    return rank(m);
  }

  int k_;
  int entries_;
  bool square_;
  std::size_t n_tx_;
  std::size_t rows_;
  std::vector<cplx> diffs_;
  int n_d_ = 0;
  int zero_ = -1;
  std::vector<cplx> contrib_;
};

}  // namespace

double delta_of_difference(const CodeSpec& code, std::span<const cplx> diff) {
  if (diff.size() != code.k_total())
    throw std::invalid_argument("delta_of_difference: length mismatch");
  bool nonzero = false;
  for (const cplx& d : diff)
    if (std::abs(d) > 1e-12) nonzero = true;
  if (!nonzero) throw std::invalid_argument("delta_of_difference: all-zero difference");

  const ComplexMatrix dx = encode_unscaled(code, diff);
  if (code.time_slots == code.n_tx) return delta_square4(dx.data().data());
  return delta_gram3(dx.data().data());
}

DeltaReport delta_min_search(const CodeSpec& code, const Constellation& c, int threads) {
  const DifferenceScan scan(code, c);
  std::atomic<bool> stop{false};
  const std::function<ChunkOutcome(std::size_t)> work = [&](std::size_t chunk) {
    return scan.scan_chunk(chunk, false, &stop);
  };
  const std::vector<ChunkOutcome> outcomes = run_chunked(scan.chunk_count(), threads, work);

  ChunkOutcome best;
  best.min_rank = code.n_tx;
  std::uint64_t visited = 0;
  for (const ChunkOutcome& o : outcomes) {
    visited += o.visited;
    if (o.min_delta < best.min_delta) {
      best.min_delta = o.min_delta;
      best.argmin = o.argmin;
    }
    if (o.min_rank < best.min_rank) best.min_rank = o.min_rank;
  }

  DeltaReport report;
  report.code_id = code.id;
  report.theta_deg = code.theta_deg;
  report.rotation_deg = c.rotation_deg;
  report.delta_min = best.min_delta;
  report.coding_gain = std::pow(std::max(best.min_delta, 0.0),
                                1.0 / static_cast<double>(code.n_tx));
  report.min_rank = best.min_rank;
  report.argmin_difference = scan.difference_values(best.argmin);
  report.search_space_size = visited;
  if (visited != scan.space_size())
    throw std::logic_error("delta_min_search: enumeration count mismatch");
  return report;
}

bool full_diversity_check(const CodeSpec& code, const Constellation& c, int threads) {
  const DifferenceScan scan(code, c);
  std::atomic<bool> stop{false};
  const std::function<char(std::size_t)> work = [&](std::size_t chunk) -> char {
    if (stop.load(std::memory_order_relaxed)) return 0;
    const ChunkOutcome o = scan.scan_chunk(chunk, true, &stop);
    if (o.deficiency_found) stop.store(true, std::memory_order_relaxed);
    return o.deficiency_found ? 1 : 0;
  };
  const std::vector<char> found = run_chunked(scan.chunk_count(), threads, work);
  for (char f : found)
    if (f) return false;
  return true;
}

ThetaSearchResult theta_search(const CodeSpec& code, const Constellation& c,
                               std::span<const double> grid_deg, int threads) {
  if (grid_deg.empty()) throw std::invalid_argument("theta_search: empty grid");
  ThetaSearchResult result;
  bool have_best = false;
  for (double theta : grid_deg) {
    const CodeSpec candidate = make_code(code.id, theta);
    DeltaReport report = delta_min_search(candidate, c, threads);
    result.trace.push_back({theta, report.delta_min});
    const bool better =
        !have_best || report.delta_min > result.best.delta_min ||
        (report.delta_min == result.best.delta_min && theta < result.best_theta_deg);
    if (better) {
      result.best_theta_deg = theta;
      result.best = std::move(report);
      have_best = true;
    }
  }
  return result;
}

}  // namespace stbclab

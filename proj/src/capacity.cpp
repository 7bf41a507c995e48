#include "stbclab/capacity.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "stbclab/linalg.hpp"
#include "stbclab/parallel.hpp"
#include "stbclab/rng.hpp"

namespace stbclab {
namespace {

constexpr std::uint64_t kDrawChunk = 512;
constexpr double kCoeffTol = 1e-12;

std::size_t parent_symbol_count(const CodeSpec& code) {
  return (code.id == CodeId::q44 || code.id == CodeId::q34) ? 4 : 8;
}

double snr_linear(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

// Mean and standard error of fn over `trials` draws, reduced over fixed-size
// chunks in chunk order so the result is worker-count invariant.
CapacityPoint mc_point(double snr_db, std::uint64_t trials, std::uint64_t seed,
                       std::uint32_t stream_point, int threads,
                       const std::function<double(CounterRng&)>& fn) {
  if (trials == 0) throw std::invalid_argument("capacity: zero trials");

  struct ChunkSums {
    double sum = 0.0;
    double sum_sq = 0.0;
  };

  const std::size_t n_chunks = std::size_t((trials + kDrawChunk - 1) / kDrawChunk);
  auto chunks = run_chunked<ChunkSums>(n_chunks, threads, [&](std::size_t ci) {
    ChunkSums out;
    const std::uint64_t first = std::uint64_t(ci) * kDrawChunk;
    const std::uint64_t last = std::min(trials, first + kDrawChunk);
    for (std::uint64_t draw = first; draw < last; ++draw) {
      CounterRng rng(seed, std::uint64_t(RngDomain::kCapacityDraw), stream_point, draw);
      const double v = fn(rng);
      out.sum += v;
      out.sum_sq += v * v;
    }
    return out;
  });

  double sum = 0.0, sum_sq = 0.0;
  for (const auto& ch : chunks) {
    sum += ch.sum;
    sum_sq += ch.sum_sq;
  }
  const double n = double(trials);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);

  CapacityPoint pt;
  pt.snr_db = snr_db;
  pt.bits_per_channel_use = mean;
  pt.std_error = trials > 1 ? std::sqrt(var / n) : 0.0;
  pt.trials = trials;
  return pt;
}

// log2 det(I + scale * m^H m), through the Gram matrix so the determinant is
// real positive by construction.
double log2_det_capacity(const ComplexMatrix& m, double scale) {
  ComplexMatrix g = gram(m);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) g.at(i, j) *= scale;
    g.at(i, i) += 1.0;
  }
  return std::log2(det(g).real());
}

// E log2(1 + (rho/m) sum_{i<m} |h_i|^2) sampled once; the scalar capacity
// C(rho, m, 1) building block.
double scalar_capacity_draw(double rho, std::size_t m, CounterRng& rng) {
  double h2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) h2 += std::norm(rng.next_cgaussian(1.0));
  return std::log2(1.0 + rho / double(m) * h2);
}

}  // namespace

CapacityPoint ergodic_capacity(double snr_db, std::size_t n_tx, std::size_t n_rx,
                               std::uint64_t trials, std::uint64_t seed,
                               std::uint32_t stream_point, int threads) {
  if (n_tx == 0 || n_rx == 0)
    throw std::invalid_argument("ergodic_capacity: antenna counts must be positive");
  const double rho = snr_linear(snr_db);
  return mc_point(snr_db, trials, seed, stream_point, threads, [&](CounterRng& rng) {
    ComplexMatrix h(n_tx, n_rx);
    for (std::size_t i = 0; i < n_tx; ++i)
      for (std::size_t j = 0; j < n_rx; ++j) h.at(i, j) = rng.next_cgaussian(1.0);
    return log2_det_capacity(h, rho / double(n_tx));
  });
}

EquivalentChannel equivalent_channel(const CodeSpec& code, const ComplexMatrix& h) {
  if (h.rows() != code.n_tx || h.cols() == 0)
    throw std::invalid_argument("equivalent_channel: channel shape mismatch");
  const std::size_t n_rx = h.cols();
  const std::size_t t_slots = code.time_slots;
  const std::size_t cols = parent_symbol_count(code);
  const std::size_t k = code.k_total();
  const double ps = code.power_scale;

  // Per symbol slot m (parent indexing), the row coefficients of Re v_m and
  // Im v_m: c from the real basis of m, d from the imaginary basis of its
  // coordinate partner m^2. Absent overlay slots act as zero matrices.
  const std::size_t rows = t_slots * n_rx;
  std::vector<cplx> cre(rows * cols), cim(rows * cols);
  for (std::size_t m = 0; m < cols; ++m) {
    const std::size_t partner = m ^ 2u;
    for (std::size_t t = 0; t < t_slots; ++t) {
      for (std::size_t r = 0; r < n_rx; ++r) {
        cplx a{}, b{};
        for (std::size_t tx = 0; tx < code.n_tx; ++tx) {
          if (m < k) a += code.real_basis[m].at(t, tx) * h.at(tx, r);
          if (partner < k) b += code.imag_basis[partner].at(t, tx) * h.at(tx, r);
        }
        cre[(r * t_slots + t) * cols + m] = ps * a;
        cim[(r * t_slots + t) * cols + m] = ps * b;
      }
    }
  }

  EquivalentChannel eq;
  eq.columns = cols;
  eq.h_eq = ComplexMatrix(rows, cols);
  eq.conjugated_rows.assign(rows, false);

  const cplx jj{0.0, 1.0};
  for (std::size_t row = 0; row < rows; ++row) {
    // classify the row: coefficients pair as d = j c (plain) or d = -j c
    // (row enters conjugated); every live pair must vote the same way
    int vote = 0;
    for (std::size_t m = 0; m < cols; ++m) {
      const bool re_alive = m < k;
      const bool im_alive = (m ^ 2u) < k;
      if (!re_alive || !im_alive) continue;
      const cplx c = cre[row * cols + m];
      const cplx d = cim[row * cols + m];
      if (std::abs(c) < kCoeffTol && std::abs(d) < kCoeffTol) continue;
      const double as_plain = std::abs(d - jj * c);
      const double as_conj = std::abs(d + jj * c);
      int this_vote = 0;
      if (as_plain < kCoeffTol)
        this_vote = 1;
      else if (as_conj < kCoeffTol)
        this_vote = -1;
      else
        throw std::logic_error("equivalent_channel: row is not linear in v");
      if (vote == 0) vote = this_vote;
      if (vote != this_vote)
        throw std::logic_error("equivalent_channel: inconsistent row conjugation");
    }
    const bool conj_row = vote < 0;
    eq.conjugated_rows[row] = conj_row;

    for (std::size_t m = 0; m < cols; ++m) {
      const bool re_alive = m < k;
      const cplx c = cre[row * cols + m];
      const cplx d = cim[row * cols + m];
      cplx e;
      if (re_alive)
        e = conj_row ? std::conj(c) : c;
      else
        e = conj_row ? -jj * std::conj(d) : -jj * d;
      eq.h_eq.at(row, m) = e;
    }
  }
  return eq;
}

std::vector<cplx> interleaved_vector(const CodeSpec& code, std::span<const cplx> symbols) {
  const std::size_t k = code.k_total();
  if (symbols.size() != k)
    throw std::invalid_argument("interleaved_vector: symbol count mismatch");
  const std::size_t cols = parent_symbol_count(code);
  std::vector<cplx> v(cols);
  for (std::size_t m = 0; m < cols; ++m) {
    const std::size_t partner = m ^ 2u;
    const double re = m < k ? symbols[m].real() : 0.0;
    const double im = partner < k ? symbols[partner].imag() : 0.0;
    v[m] = cplx{re, im};
  }
  return v;
}

std::vector<cplx> vec_received(const CodeSpec& code, const ComplexMatrix& y) {
  if (y.rows() != code.time_slots || y.cols() == 0)
    throw std::invalid_argument("vec_received: block shape mismatch");
  std::vector<cplx> out(y.rows() * y.cols());
  for (std::size_t r = 0; r < y.cols(); ++r) {
    for (std::size_t t = 0; t < y.rows(); ++t) {
      const cplx z = y.at(t, r);
      out[r * y.rows() + t] = (t % 2 == 1) ? std::conj(z) : z;
    }
  }
  return out;
}

CapacityPoint mmi_monte_carlo(const CodeSpec& code, double snr_db, std::size_t n_rx,
                              std::uint64_t trials, std::uint64_t seed,
                              std::uint32_t stream_point, int threads) {
  if (n_rx == 0) throw std::invalid_argument("mmi_monte_carlo: n_rx must be positive");
  const double rho = snr_linear(snr_db);
  const double inv_t = 1.0 / double(code.time_slots);
  return mc_point(snr_db, trials, seed, stream_point, threads, [&](CounterRng& rng) {
    ComplexMatrix h(code.n_tx, n_rx);
    for (std::size_t i = 0; i < code.n_tx; ++i)
      for (std::size_t j = 0; j < n_rx; ++j) h.at(i, j) = rng.next_cgaussian(1.0);
    const EquivalentChannel eq = equivalent_channel(code, h);
    return inv_t * log2_det_capacity(eq.h_eq, rho / double(code.n_tx));
  });
}

CapacityPoint mmi_ciod_closed_form(CodeId id, double snr_db, std::size_t n_rx,
                                   std::uint64_t trials, std::uint64_t seed,
                                   std::uint32_t stream_point, int threads) {
  if (n_rx == 0)
    throw std::invalid_argument("mmi_ciod_closed_form: n_rx must be positive");
  const double rho = snr_linear(snr_db);
  CapacityPoint pt;
  if (id == CodeId::q44) {
    pt = mc_point(snr_db, trials, seed, stream_point, threads, [&](CounterRng& rng) {
      return scalar_capacity_draw(double(n_rx) * rho, 2 * n_rx, rng);
    });
  } else if (id == CodeId::q34) {
    pt = mc_point(snr_db, trials, seed, stream_point, threads, [&](CounterRng& rng) {
      const double a = scalar_capacity_draw(4.0 * rho * double(n_rx) / 3.0, 2 * n_rx, rng);
      const double b = scalar_capacity_draw(2.0 * rho * double(n_rx) / 3.0, n_rx, rng);
      return 0.5 * (a + b);
    });
  } else {
    throw std::invalid_argument("mmi_ciod_closed_form: no closed form for this code");
  }
  pt.estimator = CapacityEstimator::closed_form;
  return pt;
}

CapacityPoint ostbc_capacity(double rate, double snr_db, std::size_t n_tx,
                             std::size_t n_rx, std::uint64_t trials, std::uint64_t seed,
                             std::uint32_t stream_point, int threads) {
  if (rate <= 0.0) throw std::invalid_argument("ostbc_capacity: rate must be positive");
  if (n_tx == 0 || n_rx == 0)
    throw std::invalid_argument("ostbc_capacity: antenna counts must be positive");
  const double rho = snr_linear(snr_db);
  CapacityPoint pt =
      mc_point(snr_db, trials, seed, stream_point, threads, [&](CounterRng& rng) {
        return rate * scalar_capacity_draw(rho * double(n_rx) / rate, n_tx * n_rx, rng);
      });
  pt.estimator = CapacityEstimator::closed_form;
  return pt;
}

}  // namespace stbclab

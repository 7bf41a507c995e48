#include "stbclab/decoder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace stbclab {
namespace {

constexpr std::size_t kMaxRx = 8;

void check_shapes(const ComplexMatrix& y, const ComplexMatrix& h, const CodeSpec& code,
                  const Constellation& c) {
  if (h.rows() != code.n_tx || h.cols() == 0 || h.cols() > kMaxRx)
    throw std::invalid_argument("decode: channel shape does not match the code");
  if (y.rows() != code.time_slots || y.cols() != h.cols())
    throw std::invalid_argument("decode: received block shape mismatch");
  if (c.size() < 2) throw std::invalid_argument("decode: degenerate constellation");
}

// Per (symbol, constellation point) contribution to encode(s)*H, so codeword
// hypotheses accumulate with a few adds per symbol.
struct DecodeContext {
  std::size_t k, m, ents;  // symbol count, constellation size, T*n_rx
  std::vector<cplx> table;  // [sym * m + point] -> ents entries

  DecodeContext(const ComplexMatrix& h, const CodeSpec& code, const Constellation& c)
      : k(code.k_total()), m(c.size()), ents(code.time_slots * h.cols()) {
    const std::size_t n_rx = h.cols();
    std::vector<cplx> ah(ents), bh(ents);
    table.assign(k * m * ents, cplx{});
    for (std::size_t sym = 0; sym < k; ++sym) {
      const ComplexMatrix& a = code.real_basis[sym];
      const ComplexMatrix& b = code.imag_basis[sym];
      for (std::size_t t = 0; t < code.time_slots; ++t) {
        for (std::size_t r = 0; r < n_rx; ++r) {
          cplx sa{}, sb{};
          for (std::size_t tx = 0; tx < code.n_tx; ++tx) {
            sa += a.at(t, tx) * h.at(tx, r);
            sb += b.at(t, tx) * h.at(tx, r);
          }
          ah[t * n_rx + r] = sa;
          bh[t * n_rx + r] = sb;
        }
      }
      for (std::size_t pt = 0; pt < m; ++pt) {
        cplx* dst = entry(sym, pt);
        const double re = c.points[pt].real() * code.power_scale;
        const double im = c.points[pt].imag() * code.power_scale;
        for (std::size_t e = 0; e < ents; ++e) dst[e] = re * ah[e] + im * bh[e];
      }
    }
  }

  cplx* entry(std::size_t sym, std::size_t pt) {
    return table.data() + (sym * m + pt) * ents;
  }
  const cplx* entry(std::size_t sym, std::size_t pt) const {
    return table.data() + (sym * m + pt) * ents;
  }
};

bool lex_less(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

DecodeResult finish(const std::vector<std::size_t>& idx, double metric,
                    std::uint64_t computations, const Constellation& c) {
  DecodeResult r;
  r.indices = idx;
  r.symbols.reserve(idx.size());
  for (std::size_t i : idx) r.symbols.push_back(c.points[i]);
  r.metric = metric;
  r.metric_computations = computations;
  return r;
}

}  // namespace

CoreCombined combine_core(const ComplexMatrix& z, const ComplexMatrix& h, std::size_t n_tx) {
  if (n_tx != 3 && n_tx != 4)
    throw std::invalid_argument("combine_core: needs 3 or 4 transmit antennas");
  if (h.rows() != n_tx || z.rows() != 4 || z.cols() != h.cols())
    throw std::invalid_argument("combine_core: shape mismatch");

  CoreCombined out;
  for (std::size_t r = 0; r < h.cols(); ++r) {
    const cplx h1 = h.at(0, r);
    const cplx h2 = h.at(1, r);
    const cplx h3 = h.at(2, r);
    const cplx h4 = n_tx == 4 ? h.at(3, r) : cplx{};
    // Alamouti combining per block; the second slot of each block enters
    // conjugated so the cross terms cancel
    out.y0 += std::conj(h1) * z.at(0, r) + h2 * std::conj(z.at(1, r));
    out.y1 += std::conj(h2) * z.at(0, r) - h1 * std::conj(z.at(1, r));
    out.y2 += std::conj(h3) * z.at(2, r) + h4 * std::conj(z.at(3, r));
    out.y3 += std::conj(h4) * z.at(2, r) - h3 * std::conj(z.at(3, r));
    out.alpha += std::norm(h1) + std::norm(h2);
    out.beta += std::norm(h3) + std::norm(h4);
  }
  // reassemble: each symbol's real part rides one block, imaginary the other
  out.x0 = cplx{out.y0.real(), out.y2.imag()};
  out.x1 = cplx{out.y1.real(), out.y3.imag()};
  out.x2 = cplx{out.y2.real(), out.y0.imag()};
  out.x3 = cplx{out.y3.real(), out.y1.imag()};
  return out;
}

DecodeResult ml_decode_exhaustive(const ComplexMatrix& y, const ComplexMatrix& h,
                                  const CodeSpec& code, const Constellation& c) {
  check_shapes(y, h, code, c);
  const DecodeContext ctx(h, code, c);
  const std::size_t k = ctx.k, m = ctx.m, ents = ctx.ents;
  const cplx* yv = y.data().data();

  // acc[l] = hypothesis partial sum over symbols < l
  std::vector<std::array<cplx, 32>> acc(k + 1);
  std::vector<std::size_t> idx(k, 0);
  for (std::size_t l = 0; l < k; ++l) {
    const cplx* t = ctx.entry(l, 0);
    for (std::size_t e = 0; e < ents; ++e) acc[l + 1][e] = acc[l][e] + t[e];
  }

  double best_metric = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_idx(k, 0);
  std::uint64_t computations = 0;

  for (;;) {
    double metric = 0.0;
    const auto& leaf = acc[k];
    for (std::size_t e = 0; e < ents; ++e) metric += std::norm(yv[e] - leaf[e]);
    ++computations;
    if (metric < best_metric ||
        (metric == best_metric && lex_less(idx, best_idx))) {
      best_metric = metric;
      best_idx = idx;
    }

    std::size_t l = k;
    while (l > 0 && idx[l - 1] + 1 >= m) --l;
    if (l == 0) break;
    ++idx[l - 1];
    for (std::size_t v = l; v < k; ++v) idx[v] = 0;
    for (std::size_t v = l - 1; v < k; ++v) {
      const cplx* t = ctx.entry(v, idx[v]);
      for (std::size_t e = 0; e < ents; ++e) acc[v + 1][e] = acc[v][e] + t[e];
    }
  }
  return finish(best_idx, best_metric, computations, c);
}

DecodeResult conditional_ml_decode(const ComplexMatrix& y, const ComplexMatrix& h,
                                   const CodeSpec& code, const Constellation& c) {
  check_shapes(y, h, code, c);
  if (code.overlay_count == 0)
    throw std::invalid_argument("conditional_ml_decode: code has no overlay symbols");
  const DecodeContext ctx(h, code, c);
  const std::size_t k = ctx.k, m = ctx.m, ents = ctx.ents;
  const std::size_t k_core = code.k_core;
  const std::size_t lambda = code.overlay_count;
  const double ps = code.power_scale;
  const cplx* yv = y.data().data();
  const std::size_t n_rx = h.cols();

  // overlay hypothesis partial sums, acc[l] over overlay symbols < k_core + l
  std::vector<std::array<cplx, 32>> acc(lambda + 1);
  std::vector<std::size_t> ov(lambda, 0);
  for (std::size_t l = 0; l < lambda; ++l) {
    const cplx* t = ctx.entry(k_core + l, 0);
    for (std::size_t e = 0; e < ents; ++e) acc[l + 1][e] = acc[l][e] + t[e];
  }

  ComplexMatrix z(code.time_slots, n_rx);
  double best_metric = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_idx;
  std::uint64_t computations = 0;
  std::vector<std::size_t> cand(k, 0);

  for (;;) {
    // cancel the hypothesized overlay, then split the core per symbol
    for (std::size_t e = 0; e < ents; ++e) z.data()[e] = yv[e] - acc[lambda][e];
    const CoreCombined cc = combine_core(z, h, code.n_tx);
    const std::array<cplx, 4> est{cc.x0, cc.x1, cc.x2, cc.x3};
    for (std::size_t sym = 0; sym < k_core; ++sym) {
      // weighted single-symbol rule; the first two symbols carry their real
      // part on the alpha block, the last two on the beta block
      const bool alpha_first = sym < 2;
      const double wr = alpha_first ? cc.beta : cc.alpha;
      const double wi = alpha_first ? cc.alpha : cc.beta;
      const double gr = (alpha_first ? cc.alpha : cc.beta) * ps;
      const double gi = (alpha_first ? cc.beta : cc.alpha) * ps;
      double best_sym = std::numeric_limits<double>::infinity();
      std::size_t best_pt = 0;
      for (std::size_t pt = 0; pt < m; ++pt) {
        const double dr = est[sym].real() - gr * c.points[pt].real();
        const double di = est[sym].imag() - gi * c.points[pt].imag();
        const double metric = wr * dr * dr + wi * di * di;
        ++computations;
        if (metric < best_sym) {
          best_sym = metric;
          best_pt = pt;
        }
      }
      cand[sym] = best_pt;
    }
    for (std::size_t l = 0; l < lambda; ++l) cand[k_core + l] = ov[l];

    // rank the assembled candidate by the full codeword metric
    std::array<cplx, 32> core_sum{};
    for (std::size_t sym = 0; sym < k_core; ++sym) {
      const cplx* t = ctx.entry(sym, cand[sym]);
      for (std::size_t e = 0; e < ents; ++e) core_sum[e] += t[e];
    }
    double full = 0.0;
    for (std::size_t e = 0; e < ents; ++e) full += std::norm(z.data()[e] - core_sum[e]);
    if (full < best_metric ||
        (full == best_metric && (best_idx.empty() || lex_less(cand, best_idx)))) {
      best_metric = full;
      best_idx = cand;
    }

    std::size_t l = lambda;
    while (l > 0 && ov[l - 1] + 1 >= m) --l;
    if (l == 0) break;
    ++ov[l - 1];
    for (std::size_t v = l; v < lambda; ++v) ov[v] = 0;
    for (std::size_t v = l - 1; v < lambda; ++v) {
      const cplx* t = ctx.entry(k_core + v, ov[v]);
      for (std::size_t e = 0; e < ents; ++e) acc[v + 1][e] = acc[v][e] + t[e];
    }
  }
  return finish(best_idx, best_metric, computations, c);
}

}  // namespace stbclab

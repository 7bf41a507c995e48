#include "stbclab/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "stbclab/decoder.hpp"
#include "stbclab/parallel.hpp"

namespace stbclab {
namespace {

// Fixed batch size. Stopping decisions happen only at batch boundaries, in
// batch order, so a sweep is reproducible for any worker count.
constexpr std::uint64_t kBatchCodewords = 256;

struct TrialOutcome {
  std::uint64_t bit_errors = 0;
  std::uint64_t bits = 0;
};

// Random symbol indices from one 64-bit draw, bits taken MSB-first per symbol.
std::vector<std::size_t> draw_indices(const Constellation& c, std::size_t k,
                                      CounterRng& rng) {
  const unsigned bps = c.bits_per_symbol;
  std::vector<std::size_t> by_label(std::size_t(1) << bps, 0);
  for (std::size_t i = 0; i < c.labels.size(); ++i) by_label[c.labels[i]] = i;

  const std::uint64_t block = rng.next_u64();
  std::vector<std::size_t> idx(k);
  for (std::size_t s = 0; s < k; ++s) {
    std::uint32_t label = 0;
    for (unsigned b = 0; b < bps; ++b)
      label = (label << 1) | std::uint32_t((block >> (s * bps + b)) & 1u);
    idx[s] = by_label[label];
  }
  return idx;
}

TrialOutcome run_trial(const CodeSpec& code, const Constellation& c, std::size_t n_rx,
                       double n0, DecoderKind decoder, CounterRng& rng) {
  const std::size_t k = code.k_total();

  const std::vector<std::size_t> tx = draw_indices(c, k, rng);
  std::vector<cplx> sym(k);
  for (std::size_t i = 0; i < k; ++i) sym[i] = c.points[tx[i]];
  const ComplexMatrix x = encode(code, sym);
  const ComplexMatrix h = sample_channel(code.n_tx, n_rx, rng);
  ComplexMatrix y = x * h;
  for (std::size_t t = 0; t < y.rows(); ++t)
    for (std::size_t r = 0; r < y.cols(); ++r) y.at(t, r) += rng.next_cgaussian(n0);

  const DecodeResult d = decoder == DecoderKind::exhaustive
                             ? ml_decode_exhaustive(y, h, code, c)
                             : conditional_ml_decode(y, h, code, c);

  TrialOutcome out;
  out.bits = k * c.bits_per_symbol;
  for (std::size_t i = 0; i < k; ++i) {
    unsigned diff = c.labels[tx[i]] ^ c.labels[d.indices[i]];
    while (diff != 0) {
      out.bit_errors += diff & 1u;
      diff >>= 1;
    }
  }
  return out;
}

}  // namespace

ComplexMatrix sample_channel(std::size_t n_tx, std::size_t n_rx, CounterRng& rng) {
  ComplexMatrix h(n_tx, n_rx);
  for (std::size_t i = 0; i < n_tx; ++i)
    for (std::size_t j = 0; j < n_rx; ++j) h.at(i, j) = rng.next_cgaussian(1.0);
  return h;
}

double received_snr_to_n0(double snr_db, const CodeSpec& code) {
  const double rho = std::pow(10.0, snr_db / 10.0);
  return double(code.n_tx) / rho;
}

SweepResult simulate_ber(const CodeSpec& code, const Constellation& c,
                         std::span<const double> snr_db, std::size_t n_rx,
                         const StopRule& stop, DecoderKind decoder,
                         std::uint64_t seed, int threads) {
  if (snr_db.empty()) throw std::invalid_argument("simulate_ber: empty SNR list");
  if (stop.min_bit_errors == 0 && stop.max_codewords == 0)
    throw std::invalid_argument("simulate_ber: stop rule admits no trials");
  if (n_rx == 0) throw std::invalid_argument("simulate_ber: n_rx must be positive");

  const std::size_t workers = resolve_threads(threads);

  SweepResult sweep;
  sweep.code_id = code.id;
  sweep.n_rx = n_rx;
  sweep.seed = seed;
  sweep.decoder = decoder;
  sweep.points.reserve(snr_db.size());

  for (std::size_t pt = 0; pt < snr_db.size(); ++pt) {
    const double n0 = received_snr_to_n0(snr_db[pt], code);
    BerPoint bp;
    bp.snr_db = snr_db[pt];

    std::uint64_t next_batch = 0;
    bool done = false;
    while (!done) {
      // dispatch a fixed window of batches; batches past a stop boundary are
      // discarded, so the tally never depends on worker count
      const std::size_t window = workers * 2;
      std::vector<std::uint64_t> batch_ids(window);
      for (std::size_t i = 0; i < window; ++i) batch_ids[i] = next_batch + i;

      auto results = run_chunked<TrialOutcome>(
          window, threads, [&](std::size_t w) {
            TrialOutcome acc;
            const std::uint64_t batch = batch_ids[w];
            const std::uint64_t first = batch * kBatchCodewords;
            std::uint64_t last = first + kBatchCodewords;
            if (stop.max_codewords > 0 && last > stop.max_codewords)
              last = stop.max_codewords;
            for (std::uint64_t trial = first; trial < last; ++trial) {
              CounterRng rng(seed, std::uint64_t(RngDomain::kBerTrial),
                             std::uint64_t(pt), trial);
              const TrialOutcome one = run_trial(code, c, n_rx, n0, decoder, rng);
              acc.bit_errors += one.bit_errors;
              acc.bits += one.bits;
            }
            return acc;
          });

      for (std::size_t w = 0; w < window && !done; ++w) {
        const std::uint64_t batch = batch_ids[w];
        const std::uint64_t first = batch * kBatchCodewords;
        std::uint64_t last = first + kBatchCodewords;
        if (stop.max_codewords > 0 && last > stop.max_codewords)
          last = stop.max_codewords;
        if (last <= first) {
          done = true;
          break;
        }
        bp.bit_errors += results[w].bit_errors;
        bp.bits += results[w].bits;
        bp.codewords += last - first;
        if (stop.min_bit_errors > 0 && bp.bit_errors >= stop.min_bit_errors) done = true;
        if (stop.max_codewords > 0 && bp.codewords >= stop.max_codewords) done = true;
      }
      next_batch += window;
    }

    bp.ber = bp.bits == 0 ? 0.0 : double(bp.bit_errors) / double(bp.bits);
    sweep.points.push_back(bp);
  }
  return sweep;
}

DecodeCheckReport decode_check(const CodeSpec& code, const Constellation& c,
                               std::uint64_t trials, double snr_db, std::size_t n_rx,
                               std::uint64_t seed, int threads) {
  if (trials == 0) throw std::invalid_argument("decode_check: zero trials");
  const double n0 = received_snr_to_n0(snr_db, code);

  struct ChunkOut {
    std::uint64_t mismatches = 0;
    std::uint64_t cond_metrics = 0;
    std::uint64_t exh_metrics = 0;
  };

  const std::uint64_t chunk = 64;
  const std::size_t n_chunks = std::size_t((trials + chunk - 1) / chunk);
  auto results = run_chunked<ChunkOut>(n_chunks, threads, [&](std::size_t ci) {
    ChunkOut out;
    const std::uint64_t first = std::uint64_t(ci) * chunk;
    const std::uint64_t last = std::min(trials, first + chunk);
    for (std::uint64_t trial = first; trial < last; ++trial) {
      CounterRng rng(seed, std::uint64_t(RngDomain::kDecodeCheck), 0, trial);

      const std::size_t k = code.k_total();
      const std::vector<std::size_t> tx = draw_indices(c, k, rng);
      std::vector<cplx> sym(k);
      for (std::size_t i = 0; i < k; ++i) sym[i] = c.points[tx[i]];
      const ComplexMatrix x = encode(code, sym);
      const ComplexMatrix h = sample_channel(code.n_tx, n_rx, rng);
      ComplexMatrix y = x * h;
      for (std::size_t t = 0; t < y.rows(); ++t)
        for (std::size_t r = 0; r < y.cols(); ++r) y.at(t, r) += rng.next_cgaussian(n0);

      const DecodeResult exh = ml_decode_exhaustive(y, h, code, c);
      const DecodeResult cond = conditional_ml_decode(y, h, code, c);
      if (exh.indices != cond.indices) ++out.mismatches;
      out.cond_metrics = cond.metric_computations;
      out.exh_metrics = exh.metric_computations;
    }
    return out;
  });

  DecodeCheckReport rep;
  rep.trials = trials;
  for (const auto& r : results) {
    rep.mismatches += r.mismatches;
    if (r.cond_metrics != 0) rep.conditional_metrics_per_decode = r.cond_metrics;
    if (r.exh_metrics != 0) rep.exhaustive_metrics_per_decode = r.exh_metrics;
  }
  rep.agreement = 1.0 - double(rep.mismatches) / double(rep.trials);
  return rep;
}

}  // namespace stbclab

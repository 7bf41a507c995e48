#include "stbclab.h"

#include <cmath>
#include <cstring>
#include <new>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stbclab/channel.hpp"
#include "stbclab/capacity.hpp"
#include "stbclab/coding_gain.hpp"
#include "stbclab/code.hpp"
#include "stbclab/constellation.hpp"
#include "stbclab/version.hpp"

struct stbc_code {
  stbclab::CodeSpec spec;
  stbclab::Constellation constellation;
};

namespace {

thread_local std::string g_last_error;

template <class Fn>
stbc_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return STBC_OK;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return STBC_EINVAL;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return STBC_ENOMEM;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return STBC_EINTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return STBC_EINTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void fill_delta(const stbclab::DeltaReport& in, int full_diversity,
                stbc_delta_report* out) {
  stbc_delta_report r{};
  r.delta_min = in.delta_min;
  r.coding_gain = in.coding_gain;
  r.theta_deg = in.theta_deg;
  r.rotation_deg = in.rotation_deg;
  r.search_space = in.search_space_size;
  r.min_rank = int(in.min_rank);
  r.full_diversity = full_diversity;
  r.argmin_len = std::min<std::size_t>(in.argmin_difference.size(), 8);
  for (std::size_t i = 0; i < r.argmin_len; ++i) {
    r.argmin_re[i] = in.argmin_difference[i].real();
    r.argmin_im[i] = in.argmin_difference[i].imag();
  }
  *out = r;
}

}  // namespace

extern "C" {

const char* stbc_version(void) { return stbclab::kVersion; }

const char* stbc_last_error(void) { return g_last_error.c_str(); }

stbc_status stbc_code_create(const char* name, double theta_deg,
                             double rotation_deg, stbc_code** out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    auto id = stbclab::parse_code_id(name);
    if (!id.has_value())
      throw std::invalid_argument(std::string("unknown code name: ") + name);
    stbclab::CodeSpec spec = std::isnan(theta_deg)
                                 ? stbclab::make_code(*id)
                                 : stbclab::make_code(*id, theta_deg);
    const double rot = std::isnan(rotation_deg) ? spec.rotation_deg : rotation_deg;
    require(std::isfinite(rot), "rotation must be finite");
    spec.rotation_deg = rot;
    auto* handle = new stbc_code{std::move(spec), stbclab::make_qpsk(rot)};
    *out = handle;
  });
}

void stbc_code_destroy(stbc_code* code) { delete code; }

stbc_status stbc_code_get_info(const stbc_code* code, stbc_code_info* out) {
  return guarded([&] {
    require(code != nullptr && out != nullptr, "null argument");
    stbc_code_info info{};
    info.n_tx = code->spec.n_tx;
    info.time_slots = code->spec.time_slots;
    info.k_core = code->spec.k_core;
    info.overlay_count = code->spec.overlay_count;
    info.k_total = code->spec.k_total();
    info.rate = code->spec.rate();
    info.theta_deg = code->spec.theta_deg;
    info.rotation_deg = code->spec.rotation_deg;
    info.power_scale = code->spec.power_scale;
    *out = info;
  });
}

stbc_status stbc_encode(const stbc_code* code, const size_t* indices,
                        size_t n_indices, double* out_re, double* out_im) {
  return guarded([&] {
    require(code != nullptr && indices != nullptr && out_re != nullptr &&
                out_im != nullptr,
            "null argument");
    const auto& c = code->constellation;
    std::vector<stbclab::cplx> sym(n_indices);
    for (size_t i = 0; i < n_indices; ++i) {
      require(indices[i] < c.size(), "symbol index out of range");
      sym[i] = c.points[indices[i]];
    }
    const stbclab::ComplexMatrix x = stbclab::encode(code->spec, sym);
    for (size_t t = 0; t < x.rows(); ++t) {
      for (size_t a = 0; a < x.cols(); ++a) {
        out_re[t * x.cols() + a] = x.at(t, a).real();
        out_im[t * x.cols() + a] = x.at(t, a).imag();
      }
    }
  });
}

stbc_status stbc_delta_min(const stbc_code* code, int threads,
                           stbc_delta_report* out) {
  return guarded([&] {
    require(code != nullptr && out != nullptr, "null argument");
    const stbclab::DeltaReport rep =
        stbclab::delta_min_search(code->spec, code->constellation, threads);
    fill_delta(rep, rep.min_rank == code->spec.n_tx ? 1 : 0, out);
  });
}

stbc_status stbc_full_diversity(const stbc_code* code, int threads, int* out) {
  return guarded([&] {
    require(code != nullptr && out != nullptr, "null argument");
    *out = stbclab::full_diversity_check(code->spec, code->constellation, threads)
               ? 1
               : 0;
  });
}

stbc_status stbc_theta_search(const stbc_code* code, const double* grid_deg,
                              size_t n_grid, int threads,
                              stbc_delta_report* best, stbc_trace_point* trace) {
  return guarded([&] {
    require(code != nullptr && grid_deg != nullptr && best != nullptr,
            "null argument");
    require(n_grid > 0, "empty grid");
    const stbclab::ThetaSearchResult res = stbclab::theta_search(
        code->spec, code->constellation, std::span(grid_deg, n_grid), threads);
    fill_delta(res.best, res.best.min_rank == code->spec.n_tx ? 1 : 0, best);
    if (trace != nullptr) {
      for (size_t i = 0; i < res.trace.size(); ++i) {
        trace[i].theta_deg = res.trace[i].theta_deg;
        trace[i].delta_min = res.trace[i].delta_min;
      }
    }
  });
}

stbc_status stbc_ber_sweep(const stbc_code* code, const double* snr_db,
                           size_t n_points, size_t n_rx, uint64_t min_bit_errors,
                           uint64_t max_codewords, stbc_decoder decoder,
                           uint64_t seed, int threads, stbc_ber_point* out) {
  return guarded([&] {
    require(code != nullptr && snr_db != nullptr && out != nullptr,
            "null argument");
    require(decoder == STBC_DECODER_EXHAUSTIVE || decoder == STBC_DECODER_CONDITIONAL,
            "unknown decoder kind");
    stbclab::StopRule stop;
    stop.min_bit_errors = min_bit_errors;
    stop.max_codewords = max_codewords;
    const stbclab::SweepResult res = stbclab::simulate_ber(
        code->spec, code->constellation, std::span(snr_db, n_points), n_rx, stop,
        decoder == STBC_DECODER_EXHAUSTIVE ? stbclab::DecoderKind::exhaustive
                                           : stbclab::DecoderKind::conditional,
        seed, threads);
    for (size_t i = 0; i < res.points.size(); ++i) {
      out[i].snr_db = res.points[i].snr_db;
      out[i].ber = res.points[i].ber;
      out[i].bit_errors = res.points[i].bit_errors;
      out[i].bits = res.points[i].bits;
      out[i].codewords = res.points[i].codewords;
    }
  });
}

stbc_status stbc_decode_check(const stbc_code* code, uint64_t trials,
                              double snr_db, size_t n_rx, uint64_t seed,
                              int threads, stbc_decode_check_report* out) {
  return guarded([&] {
    require(code != nullptr && out != nullptr, "null argument");
    const stbclab::DecodeCheckReport rep = stbclab::decode_check(
        code->spec, code->constellation, trials, snr_db, n_rx, seed, threads);
    out->trials = rep.trials;
    out->mismatches = rep.mismatches;
    out->agreement = rep.agreement;
    out->conditional_metrics_per_decode = rep.conditional_metrics_per_decode;
    out->exhaustive_metrics_per_decode = rep.exhaustive_metrics_per_decode;
  });
}

stbc_status stbc_ergodic_capacity(double snr_db, size_t n_tx, size_t n_rx,
                                  uint64_t trials, uint64_t seed,
                                  uint32_t stream_point, int threads,
                                  stbc_capacity_point* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const stbclab::CapacityPoint pt = stbclab::ergodic_capacity(
        snr_db, n_tx, n_rx, trials, seed, stream_point, threads);
    *out = {pt.snr_db, pt.bits_per_channel_use, pt.std_error, pt.trials};
  });
}

stbc_status stbc_mmi_monte_carlo(const stbc_code* code, double snr_db,
                                 size_t n_rx, uint64_t trials, uint64_t seed,
                                 uint32_t stream_point, int threads,
                                 stbc_capacity_point* out) {
  return guarded([&] {
    require(code != nullptr && out != nullptr, "null argument");
    const stbclab::CapacityPoint pt = stbclab::mmi_monte_carlo(
        code->spec, snr_db, n_rx, trials, seed, stream_point, threads);
    *out = {pt.snr_db, pt.bits_per_channel_use, pt.std_error, pt.trials};
  });
}

stbc_status stbc_mmi_closed_form(const stbc_code* code, double snr_db,
                                 size_t n_rx, uint64_t trials, uint64_t seed,
                                 uint32_t stream_point, int threads,
                                 stbc_capacity_point* out) {
  return guarded([&] {
    require(code != nullptr && out != nullptr, "null argument");
    const stbclab::CapacityPoint pt = stbclab::mmi_ciod_closed_form(
        code->spec.id, snr_db, n_rx, trials, seed, stream_point, threads);
    *out = {pt.snr_db, pt.bits_per_channel_use, pt.std_error, pt.trials};
  });
}

stbc_status stbc_ostbc_capacity(double rate, double snr_db, size_t n_tx,
                                size_t n_rx, uint64_t trials, uint64_t seed,
                                uint32_t stream_point, int threads,
                                stbc_capacity_point* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const stbclab::CapacityPoint pt = stbclab::ostbc_capacity(
        rate, snr_db, n_tx, n_rx, trials, seed, stream_point, threads);
    *out = {pt.snr_db, pt.bits_per_channel_use, pt.std_error, pt.trials};
  });
}

}  // extern "C"

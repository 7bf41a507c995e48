/* C interface to the space-time block code laboratory.
 *
 * All functions return stbc_status; on anything but STBC_OK the output
 * arguments are untouched and stbc_last_error() describes the failure for
 * the calling thread. Handles are opaque and must be released with their
 * destroy function. Pass threads = 0 to size worker pools automatically.
 */
#ifndef STBCLAB_H
#define STBCLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stbc_status {
  STBC_OK = 0,
  STBC_EINVAL = 1,   /* bad argument or unknown code name */
  STBC_ENOMEM = 2,   /* allocation failure */
  STBC_EINTERNAL = 3 /* broken internal invariant; report it */
} stbc_status;

typedef enum stbc_decoder {
  STBC_DECODER_EXHAUSTIVE = 0,
  STBC_DECODER_CONDITIONAL = 1
} stbc_decoder;

typedef struct stbc_code stbc_code;

typedef struct stbc_code_info {
  size_t n_tx;
  size_t time_slots;
  size_t k_core;
  size_t overlay_count;
  size_t k_total;
  double rate;
  double theta_deg;
  double rotation_deg;
  double power_scale;
} stbc_code_info;

typedef struct stbc_delta_report {
  double delta_min;
  double coding_gain;
  double theta_deg;
  double rotation_deg;
  uint64_t search_space;
  int min_rank;
  int full_diversity;
  size_t argmin_len;      /* live entries in argmin_re/im */
  double argmin_re[8];
  double argmin_im[8];
} stbc_delta_report;

typedef struct stbc_trace_point {
  double theta_deg;
  double delta_min;
} stbc_trace_point;

typedef struct stbc_ber_point {
  double snr_db;
  double ber;
  uint64_t bit_errors;
  uint64_t bits;
  uint64_t codewords;
} stbc_ber_point;

typedef struct stbc_decode_check_report {
  uint64_t trials;
  uint64_t mismatches;
  double agreement;
  uint64_t conditional_metrics_per_decode;
  uint64_t exhaustive_metrics_per_decode;
} stbc_decode_check_report;

typedef struct stbc_capacity_point {
  double snr_db;
  double bits_per_channel_use;
  double std_error;
  uint64_t trials;
} stbc_capacity_point;

const char* stbc_version(void);

/* Message for the most recent failure on this thread; empty string if none. */
const char* stbc_last_error(void);

/* name: one of q44, x48, x47, x46, q34, x38, x36. Pass NaN for theta_deg or
 * rotation_deg to take the code's defaults. */
stbc_status stbc_code_create(const char* name, double theta_deg,
                             double rotation_deg, stbc_code** out);
void stbc_code_destroy(stbc_code* code);

stbc_status stbc_code_get_info(const stbc_code* code, stbc_code_info* out);

/* Codeword for the given constellation indices (k_total of them); writes the
 * time_slots x n_tx matrix row-major into out_re/out_im. */
stbc_status stbc_encode(const stbc_code* code, const size_t* indices,
                        size_t n_indices, double* out_re, double* out_im);

stbc_status stbc_delta_min(const stbc_code* code, int threads,
                           stbc_delta_report* out);

stbc_status stbc_full_diversity(const stbc_code* code, int threads, int* out);

/* Minimum determinant over a grid of overlay angles. trace may be NULL;
 * otherwise it receives n_grid entries in grid order. */
stbc_status stbc_theta_search(const stbc_code* code, const double* grid_deg,
                              size_t n_grid, int threads,
                              stbc_delta_report* best, stbc_trace_point* trace);

/* Uncoded BER per SNR point. A point stops once min_bit_errors have been
 * counted (checked at fixed batch boundaries) or max_codewords simulated.
 * Results are identical for every thread count under equal seeds. */
stbc_status stbc_ber_sweep(const stbc_code* code, const double* snr_db,
                           size_t n_points, size_t n_rx, uint64_t min_bit_errors,
                           uint64_t max_codewords, stbc_decoder decoder,
                           uint64_t seed, int threads, stbc_ber_point* out);

stbc_status stbc_decode_check(const stbc_code* code, uint64_t trials,
                              double snr_db, size_t n_rx, uint64_t seed,
                              int threads, stbc_decode_check_report* out);

stbc_status stbc_ergodic_capacity(double snr_db, size_t n_tx, size_t n_rx,
                                  uint64_t trials, uint64_t seed,
                                  uint32_t stream_point, int threads,
                                  stbc_capacity_point* out);

stbc_status stbc_mmi_monte_carlo(const stbc_code* code, double snr_db,
                                 size_t n_rx, uint64_t trials, uint64_t seed,
                                 uint32_t stream_point, int threads,
                                 stbc_capacity_point* out);

/* Closed-form maximum mutual information; only q44 and q34 have one. */
stbc_status stbc_mmi_closed_form(const stbc_code* code, double snr_db,
                                 size_t n_rx, uint64_t trials, uint64_t seed,
                                 uint32_t stream_point, int threads,
                                 stbc_capacity_point* out);

stbc_status stbc_ostbc_capacity(double rate, double snr_db, size_t n_tx,
                                size_t n_rx, uint64_t trials, uint64_t seed,
                                uint32_t stream_point, int threads,
                                stbc_capacity_point* out);

#ifdef __cplusplus
}
#endif

#endif /* STBCLAB_H */

// Command-line front end. Links the C API only, so it doubles as a smoke test
// of the shared library surface.
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stbclab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

std::string fmt(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }

// "start:step:stop" (stop inclusive) or a single value.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  const auto c1 = text.find(':');
  if (c1 == std::string::npos) {
    out.push_back(std::stod(text));
    return out;
  }
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw CLI::ValidationError("grid", "expected start:step:stop");
  const double start = std::stod(text.substr(0, c1));
  const double step = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const double stop = std::stod(text.substr(c2 + 1));
  if (!(step > 0.0)) throw CLI::ValidationError("grid", "step must be positive");
  if (stop < start - 1e-12)
    throw CLI::ValidationError("grid", "stop must not precede start");
  const auto n = std::size_t(std::floor((stop - start) / step + 1e-9)) + 1;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(start + double(i) * step);
  return out;
}

// Buffered CSV output; files are written whole via a temp name and a rename,
// so a rerun either replaces the file or leaves the previous one intact.
class CsvOut {
 public:
  void comment(const std::string& line) { buf_ += "# " + line + "\n"; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) buf_ += ',';
      buf_ += cells[i];
    }
    buf_ += '\n';
  }

  int flush(const std::string& path) const {
    if (path.empty()) {
      std::fputs(buf_.c_str(), stdout);
      return kExitOk;
    }
    const std::string tmp = path + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (f == nullptr) {
      std::fprintf(stderr, "error: cannot write %s\n", tmp.c_str());
      return kExitInternal;
    }
    const bool ok = std::fwrite(buf_.data(), 1, buf_.size(), f) == buf_.size();
    if (std::fclose(f) != 0 || !ok || std::rename(tmp.c_str(), path.c_str()) != 0) {
      std::fprintf(stderr, "error: cannot finalize %s\n", path.c_str());
      std::remove(tmp.c_str());
      return kExitInternal;
    }
    return kExitOk;
  }

 private:
  std::string buf_;
};

struct CodeHandle {
  stbc_code* ptr = nullptr;
  ~CodeHandle() { stbc_code_destroy(ptr); }
};

int status_to_exit(stbc_status st) {
  if (st == STBC_OK) return kExitOk;
  std::fprintf(stderr, "error: %s\n", stbc_last_error());
  return st == STBC_EINVAL ? kExitUsage : kExitInternal;
}

struct CommonOpts {
  std::string code;
  double theta = std::numeric_limits<double>::quiet_NaN();
  double rotation = std::numeric_limits<double>::quiet_NaN();
  int threads = 0;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_code) {
  auto* code = cmd->add_option("--code", o.code, "code name (q44 x48 x47 x46 q34 x38 x36)");
  if (needs_code) code->required();
  cmd->add_option("--theta", o.theta, "overlay phase in degrees (default: design value)");
  cmd->add_option("--rotation", o.rotation, "constellation rotation in degrees");
  cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores")
      ->envname("STBC_LAB_THREADS");
  cmd->add_option("--out", o.out_path, "CSV output path (default: stdout)");
}

int open_code(const CommonOpts& o, CodeHandle& h, stbc_code_info& info) {
  stbc_status st = stbc_code_create(o.code.c_str(), o.theta, o.rotation, &h.ptr);
  if (st != STBC_OK) return status_to_exit(st);
  st = stbc_code_get_info(h.ptr, &info);
  if (st != STBC_OK) return status_to_exit(st);
  return kExitOk;
}

void provenance(CsvOut& csv, const std::string& command, const CommonOpts& o,
                const stbc_code_info* info) {
  csv.comment(std::string("stbc-lab ") + stbc_version());
  csv.comment("command: " + command);
  if (info != nullptr) {
    csv.comment("code: " + o.code + " theta_deg: " + fmt(info->theta_deg) +
                " rotation_deg: " + fmt(info->rotation_deg));
  }
}

int run_delta_min(const CommonOpts& o) {
  CodeHandle h;
  stbc_code_info info;
  if (int rc = open_code(o, h, info); rc != kExitOk) return rc;

  stbc_delta_report rep;
  if (int rc = status_to_exit(stbc_delta_min(h.ptr, o.threads, &rep)); rc != kExitOk)
    return rc;

  CsvOut csv;
  provenance(csv, "delta-min", o, &info);
  std::string argmin;
  for (std::size_t i = 0; i < rep.argmin_len; ++i) {
    if (i) argmin += ' ';
    argmin += "(" + fmt(rep.argmin_re[i]) + "," + fmt(rep.argmin_im[i]) + ")";
  }
  csv.comment("argmin_difference: " + argmin);
  csv.row({"code", "theta_deg", "rotation_deg", "delta_min", "coding_gain",
           "min_rank", "full_diversity", "search_space"});
  csv.row({o.code, fmt(rep.theta_deg), fmt(rep.rotation_deg), fmt(rep.delta_min),
           fmt(rep.coding_gain), std::to_string(rep.min_rank),
           std::to_string(rep.full_diversity), fmt(rep.search_space)});
  return csv.flush(o.out_path);
}

int run_theta_search(const CommonOpts& o, const std::string& grid_text) {
  CodeHandle h;
  stbc_code_info info;
  if (int rc = open_code(o, h, info); rc != kExitOk) return rc;

  const std::vector<double> grid = parse_grid(grid_text);
  stbc_delta_report best;
  std::vector<stbc_trace_point> trace(grid.size());
  if (int rc = status_to_exit(stbc_theta_search(h.ptr, grid.data(), grid.size(),
                                                o.threads, &best, trace.data()));
      rc != kExitOk)
    return rc;

  CsvOut csv;
  provenance(csv, "theta-search", o, &info);
  csv.comment("grid: " + grid_text);
  csv.comment("best_theta_deg: " + fmt(best.theta_deg));
  csv.comment("best_delta_min: " + fmt(best.delta_min));
  csv.row({"code", "theta_deg", "delta_min"});
  for (const auto& pt : trace)
    csv.row({o.code, fmt(pt.theta_deg), fmt(pt.delta_min)});
  return csv.flush(o.out_path);
}

struct BerOpts {
  std::string snr_text;
  std::string snr_kind = "es";
  std::string decoder = "conditional";
  std::size_t n_rx = 1;
  std::uint64_t min_errors = 500;
  std::uint64_t max_codewords = 1000000;
  std::uint64_t seed = 1;
};

int run_ber(const CommonOpts& o, const BerOpts& b) {
  CodeHandle h;
  stbc_code_info info;
  if (int rc = open_code(o, h, info); rc != kExitOk) return rc;

  const std::vector<double> requested = parse_grid(b.snr_text);
  // Eb-referenced points shift by the spectral efficiency: rho_s = rho_b * 2k/T
  // for QPSK, i.e. +10 log10(2 * rate) dB.
  const double offset_db =
      b.snr_kind == "eb" ? 10.0 * std::log10(2.0 * info.rate) : 0.0;
  std::vector<double> snr_es(requested);
  for (double& v : snr_es) v += offset_db;

  const stbc_decoder dec = b.decoder == "exhaustive" ? STBC_DECODER_EXHAUSTIVE
                                                     : STBC_DECODER_CONDITIONAL;
  std::vector<stbc_ber_point> points(snr_es.size());
  if (int rc = status_to_exit(stbc_ber_sweep(h.ptr, snr_es.data(), snr_es.size(),
                                             b.n_rx, b.min_errors, b.max_codewords,
                                             dec, b.seed, o.threads, points.data()));
      rc != kExitOk)
    return rc;

  CsvOut csv;
  provenance(csv, "ber", o, &info);
  csv.comment("decoder: " + b.decoder + " n_rx: " + fmt(b.n_rx) +
              " snr_kind: " + b.snr_kind + " seed: " + fmt(b.seed));
  csv.comment("stop: min_errors " + fmt(b.min_errors) + " max_codewords " +
              fmt(b.max_codewords));
  csv.row({"code", "decoder", "n_rx", "snr_db", "es_db", "ber", "bit_errors",
           "bits", "codewords"});
  for (std::size_t i = 0; i < points.size(); ++i) {
    csv.row({o.code, b.decoder, fmt(b.n_rx), fmt(requested[i]),
             fmt(points[i].snr_db), fmt(points[i].ber), fmt(points[i].bit_errors),
             fmt(points[i].bits), fmt(points[i].codewords)});
  }
  return csv.flush(o.out_path);
}

struct CapacityOpts {
  std::string mode;
  std::string snr_text;
  std::size_t n_tx = 4;
  std::size_t n_rx = 1;
  double rate = 0.75;
  std::uint64_t trials = 20000;
  std::uint64_t seed = 1;
  std::uint32_t stream = 0;
};

int run_capacity(const CommonOpts& o, const CapacityOpts& cap) {
  CodeHandle h;
  stbc_code_info info;
  const bool needs_code = cap.mode == "mmi" || cap.mode == "closed-form";
  if (needs_code) {
    if (o.code.empty()) {
      std::fprintf(stderr, "error: --code is required for mode %s\n",
                   cap.mode.c_str());
      return kExitUsage;
    }
    if (int rc = open_code(o, h, info); rc != kExitOk) return rc;
  }

  const std::vector<double> snrs = parse_grid(cap.snr_text);
  CsvOut csv;
  provenance(csv, "capacity", o, needs_code ? &info : nullptr);
  csv.comment("mode: " + cap.mode + " n_rx: " + fmt(cap.n_rx) + " trials: " +
              fmt(cap.trials) + " seed: " + fmt(cap.seed) + " stream: " +
              fmt(std::uint64_t(cap.stream)));
  csv.row({"mode", "code", "n_tx", "n_rx", "snr_db", "bits_per_channel_use",
           "std_error", "trials"});

  for (double snr : snrs) {
    stbc_capacity_point pt;
    stbc_status st;
    std::string code_cell = needs_code ? o.code : "-";
    std::size_t n_tx_cell = cap.n_tx;
    if (cap.mode == "ergodic") {
      st = stbc_ergodic_capacity(snr, cap.n_tx, cap.n_rx, cap.trials, cap.seed,
                                 cap.stream, o.threads, &pt);
    } else if (cap.mode == "mmi") {
      st = stbc_mmi_monte_carlo(h.ptr, snr, cap.n_rx, cap.trials, cap.seed,
                                cap.stream, o.threads, &pt);
      n_tx_cell = info.n_tx;
    } else if (cap.mode == "closed-form") {
      st = stbc_mmi_closed_form(h.ptr, snr, cap.n_rx, cap.trials, cap.seed,
                                cap.stream, o.threads, &pt);
      n_tx_cell = info.n_tx;
    } else if (cap.mode == "ostbc") {
      st = stbc_ostbc_capacity(cap.rate, snr, cap.n_tx, cap.n_rx, cap.trials,
                               cap.seed, cap.stream, o.threads, &pt);
    } else {
      std::fprintf(stderr, "error: unknown mode %s\n", cap.mode.c_str());
      return kExitUsage;
    }
    if (int rc = status_to_exit(st); rc != kExitOk) return rc;
    csv.row({cap.mode, code_cell, fmt(n_tx_cell), fmt(cap.n_rx), fmt(pt.snr_db),
             fmt(pt.bits_per_channel_use), fmt(pt.std_error), fmt(pt.trials)});
  }
  return csv.flush(o.out_path);
}

struct CheckOpts {
  double snr_db = 10.0;
  std::uint64_t trials = 500;
  std::size_t n_rx = 1;
  std::uint64_t seed = 1;
};

int run_decode_check(const CommonOpts& o, const CheckOpts& ck) {
  CodeHandle h;
  stbc_code_info info;
  if (int rc = open_code(o, h, info); rc != kExitOk) return rc;

  stbc_decode_check_report rep;
  if (int rc = status_to_exit(stbc_decode_check(h.ptr, ck.trials, ck.snr_db,
                                                ck.n_rx, ck.seed, o.threads, &rep));
      rc != kExitOk)
    return rc;

  CsvOut csv;
  provenance(csv, "decode-check", o, &info);
  csv.comment("snr_db: " + fmt(ck.snr_db) + " n_rx: " + fmt(ck.n_rx) + " seed: " +
              fmt(ck.seed));
  csv.row({"code", "snr_db", "n_rx", "trials", "mismatches", "agreement",
           "conditional_metrics", "exhaustive_metrics"});
  csv.row({o.code, fmt(ck.snr_db), fmt(ck.n_rx), fmt(rep.trials),
           fmt(rep.mismatches), fmt(rep.agreement),
           fmt(rep.conditional_metrics_per_decode),
           fmt(rep.exhaustive_metrics_per_decode)});
  return csv.flush(o.out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"space-time block code laboratory"};
  app.set_config("--config");
  app.set_version_flag("--version", stbc_version());
  app.require_subcommand(1);

  CommonOpts delta_opts;
  auto* delta_cmd =
      app.add_subcommand("delta-min", "minimum determinant over all codeword pairs");
  add_common(delta_cmd, delta_opts, true);

  CommonOpts theta_opts;
  std::string theta_grid;
  auto* theta_cmd =
      app.add_subcommand("theta-search", "optimize the overlay phase on a grid");
  add_common(theta_cmd, theta_opts, true);
  theta_cmd->add_option("--grid", theta_grid, "angles as start:step:stop, degrees")
      ->required();

  CommonOpts ber_common;
  BerOpts ber_opts;
  auto* ber_cmd = app.add_subcommand("ber", "uncoded bit error rate sweep");
  add_common(ber_cmd, ber_common, true);
  ber_cmd->add_option("--snr", ber_opts.snr_text, "SNR grid in dB, start:step:stop")
      ->required();
  ber_cmd->add_option("--snr-kind", ber_opts.snr_kind, "es or eb reference")
      ->check(CLI::IsMember({"es", "eb"}));
  ber_cmd->add_option("--decoder", ber_opts.decoder, "conditional or exhaustive")
      ->check(CLI::IsMember({"conditional", "exhaustive"}));
  ber_cmd->add_option("--rx", ber_opts.n_rx, "receive antennas");
  ber_cmd->add_option("--min-errors", ber_opts.min_errors,
                      "stop a point after this many bit errors");
  ber_cmd->add_option("--max-codewords", ber_opts.max_codewords,
                      "hard cap on simulated codewords per point");
  ber_cmd->add_option("--seed", ber_opts.seed, "random seed");

  CommonOpts cap_common;
  CapacityOpts cap_opts;
  auto* cap_cmd = app.add_subcommand("capacity", "ergodic capacity and code MMI");
  add_common(cap_cmd, cap_common, false);
  cap_cmd->add_option("--mode", cap_opts.mode, "ergodic, mmi, closed-form, or ostbc")
      ->required()
      ->check(CLI::IsMember({"ergodic", "mmi", "closed-form", "ostbc"}));
  cap_cmd->add_option("--snr", cap_opts.snr_text, "SNR grid in dB, start:step:stop")
      ->required();
  cap_cmd->add_option("--ntx", cap_opts.n_tx, "transmit antennas (ergodic/ostbc)");
  cap_cmd->add_option("--rx", cap_opts.n_rx, "receive antennas");
  cap_cmd->add_option("--rate", cap_opts.rate, "orthogonal design rate (ostbc)");
  cap_cmd->add_option("--trials", cap_opts.trials, "Monte Carlo channel draws");
  cap_cmd->add_option("--seed", cap_opts.seed, "random seed");
  cap_cmd->add_option("--stream", cap_opts.stream, "substream index under the seed");

  CommonOpts check_common;
  CheckOpts check_opts;
  auto* check_cmd = app.add_subcommand(
      "decode-check", "compare conditional and exhaustive decisions");
  add_common(check_cmd, check_common, true);
  check_cmd->add_option("--snr", check_opts.snr_db, "SNR in dB");
  check_cmd->add_option("--trials", check_opts.trials, "number of decodes");
  check_cmd->add_option("--rx", check_opts.n_rx, "receive antennas");
  check_cmd->add_option("--seed", check_opts.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (delta_cmd->parsed()) return run_delta_min(delta_opts);
    if (theta_cmd->parsed()) return run_theta_search(theta_opts, theta_grid);
    if (ber_cmd->parsed()) return run_ber(ber_common, ber_opts);
    if (cap_cmd->parsed()) return run_capacity(cap_common, cap_opts);
    if (check_cmd->parsed()) return run_decode_check(check_common, check_opts);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitUsage;
}

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "stbclab/channel.hpp"

using namespace stbclab;

namespace {

bool same_points(const SweepResult& a, const SweepResult& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const BerPoint& p = a.points[i];
    const BerPoint& q = b.points[i];
    if (p.snr_db != q.snr_db || p.ber != q.ber || p.bit_errors != q.bit_errors ||
        p.bits != q.bits || p.codewords != q.codewords)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("noise variance follows the received-power convention") {
  const CodeSpec four = make_code(CodeId::q44);
  const CodeSpec three = make_code(CodeId::q34);
  CHECK(received_snr_to_n0(0.0, four) == doctest::Approx(4.0));
  CHECK(received_snr_to_n0(10.0, four) == doctest::Approx(0.4));
  CHECK(received_snr_to_n0(0.0, three) == doctest::Approx(3.0));
  CHECK(received_snr_to_n0(20.0, three) == doctest::Approx(0.03));
}

TEST_CASE("channel draws are reproducible and well shaped") {
  CounterRng a(21, RngDomain::kTest, 0, 0);
  CounterRng b(21, RngDomain::kTest, 0, 0);
  const ComplexMatrix ha = sample_channel(4, 2, a);
  const ComplexMatrix hb = sample_channel(4, 2, b);
  REQUIRE(ha.rows() == 4);
  REQUIRE(ha.cols() == 2);
  for (std::size_t i = 0; i < ha.data().size(); ++i)
    CHECK(ha.data()[i] == hb.data()[i]);

  // unit variance per complex entry
  CounterRng c(21, RngDomain::kTest, 0, 1);
  double acc = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix h = sample_channel(2, 1, c);
    acc += std::norm(h.at(0, 0)) + std::norm(h.at(1, 0));
  }
  CHECK(acc / (2 * n) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("zero-noise sweep has zero errors") {
  const CodeSpec code = make_code(CodeId::x46);
  const Constellation c = make_qpsk(code.rotation_deg);
  const std::vector<double> snr{200.0};  // noise variance ~ 4e-20
  StopRule stop;
  stop.min_bit_errors = 0;
  stop.max_codewords = 300;
  const SweepResult res =
      simulate_ber(code, c, snr, 1, stop, DecoderKind::conditional, 9001);
  REQUIRE(res.points.size() == 1);
  CHECK(res.points[0].bit_errors == 0);
  CHECK(res.points[0].ber == 0.0);
  CHECK(res.points[0].codewords == 300);
  CHECK(res.points[0].bits == 300 * 12);  // 6 QPSK symbols per codeword
}

TEST_CASE("sweeps are byte-identical across worker counts and decoders") {
  const CodeSpec code = make_code(CodeId::x36);
  const Constellation c = make_qpsk(code.rotation_deg);
  const std::vector<double> snr{4.0, 8.0};
  StopRule stop;
  stop.min_bit_errors = 60;
  stop.max_codewords = 4000;

  const SweepResult one =
      simulate_ber(code, c, snr, 1, stop, DecoderKind::conditional, 42, 1);
  const SweepResult three =
      simulate_ber(code, c, snr, 1, stop, DecoderKind::conditional, 42, 3);
  CHECK(same_points(one, three));

  // the trial stream is addressed by (seed, point, trial), not by the decoder,
  // and the decoders decide identically, so the sweep must match exactly
  const SweepResult ex =
      simulate_ber(code, c, snr, 1, stop, DecoderKind::exhaustive, 42, 2);
  CHECK(same_points(one, ex));

  for (const BerPoint& p : one.points) {
    CHECK(p.bit_errors >= stop.min_bit_errors);
    CHECK(p.ber == doctest::Approx(static_cast<double>(p.bit_errors) /
                                   static_cast<double>(p.bits)));
  }
  CHECK(one.points[0].ber > one.points[1].ber);  // 4 dB is noisier than 8 dB
}

TEST_CASE("stop rule semantics") {
  const CodeSpec code = make_code(CodeId::q34);
  const Constellation c = make_qpsk(code.rotation_deg);
  const std::vector<double> snr{0.0};

  SUBCASE("codeword cap is exact") {
    StopRule stop;
    stop.min_bit_errors = 0;  // disabled: run to the cap
    stop.max_codewords = 137;
    const SweepResult res =
        simulate_ber(code, c, snr, 2, stop, DecoderKind::exhaustive, 7);
    CHECK(res.points[0].codewords == 137);
    CHECK(res.points[0].bits == 137 * 8);
  }

  SUBCASE("error target stops at a batch boundary") {
    StopRule stop;
    stop.min_bit_errors = 25;
    stop.max_codewords = 0;  // disabled: run until the error target
    const SweepResult res =
        simulate_ber(code, c, snr, 1, stop, DecoderKind::exhaustive, 7);
    CHECK(res.points[0].bit_errors >= 25);
    CHECK(res.points[0].codewords % 256 == 0);
  }

  SUBCASE("both bounds disabled is an error") {
    StopRule stop;
    stop.min_bit_errors = 0;
    stop.max_codewords = 0;
    CHECK_THROWS_AS((void)simulate_ber(code, c, snr, 1, stop,
                                       DecoderKind::exhaustive, 7),
                    std::invalid_argument);
  }

  SUBCASE("empty SNR list is an error") {
    CHECK_THROWS_AS((void)simulate_ber(code, c, {}, 1, StopRule{},
                                       DecoderKind::exhaustive, 7),
                    std::invalid_argument);
  }
}

TEST_CASE("decode check agrees fully and reports the metric counts") {
  const CodeSpec code = make_code(CodeId::x36);
  const Constellation c = make_qpsk(code.rotation_deg);
  const DecodeCheckReport rep = decode_check(code, c, 96, 10.0, 1, 5);
  CHECK(rep.trials == 96);
  CHECK(rep.mismatches == 0);
  CHECK(rep.agreement == 1.0);
  CHECK(rep.exhaustive_metrics_per_decode == 4096);
  CHECK(rep.conditional_metrics_per_decode == 256);

  const DecodeCheckReport rep3 = decode_check(code, c, 96, 10.0, 1, 5, 3);
  CHECK(rep3.mismatches == rep.mismatches);
  CHECK(rep3.trials == rep.trials);
}

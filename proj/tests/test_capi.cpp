#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "stbclab.h"

namespace {

struct CodeHandle {
  stbc_code* ptr = nullptr;
  explicit CodeHandle(const char* name, double theta = NAN, double rot = NAN) {
    REQUIRE(stbc_code_create(name, theta, rot, &ptr) == STBC_OK);
  }
  ~CodeHandle() { stbc_code_destroy(ptr); }
  CodeHandle(const CodeHandle&) = delete;
  CodeHandle& operator=(const CodeHandle&) = delete;
};

}  // namespace

TEST_CASE("version string is present") {
  const char* v = stbc_version();
  REQUIRE(v != nullptr);
  CHECK(std::strlen(v) > 0);
}

TEST_CASE("create, inspect, destroy") {
  CodeHandle code("x48");
  stbc_code_info info{};
  REQUIRE(stbc_code_get_info(code.ptr, &info) == STBC_OK);
  CHECK(info.n_tx == 4);
  CHECK(info.time_slots == 4);
  CHECK(info.k_core == 4);
  CHECK(info.overlay_count == 4);
  CHECK(info.k_total == 8);
  CHECK(info.rate == doctest::Approx(2.0));
  CHECK(info.theta_deg == doctest::Approx(90.0));
  CHECK(info.rotation_deg == doctest::Approx(13.29));
  CHECK(info.power_scale == doctest::Approx(1.0));

  CodeHandle custom("x36", 30.0, 16.0);
  stbc_code_info ci{};
  REQUIRE(stbc_code_get_info(custom.ptr, &ci) == STBC_OK);
  CHECK(ci.theta_deg == doctest::Approx(30.0));
  CHECK(ci.n_tx == 3);
  CHECK(ci.rate == doctest::Approx(1.5));
}

TEST_CASE("unknown names and null arguments fail cleanly") {
  stbc_code* out = nullptr;
  CHECK(stbc_code_create("x99", NAN, NAN, &out) == STBC_EINVAL);
  CHECK(out == nullptr);
  CHECK(std::string(stbc_last_error()).find("x99") != std::string::npos);

  CHECK(stbc_code_create(nullptr, NAN, NAN, &out) == STBC_EINVAL);
  CHECK(stbc_code_create("q44", NAN, NAN, nullptr) == STBC_EINVAL);

  stbc_code_info info{};
  CHECK(stbc_code_get_info(nullptr, &info) == STBC_EINVAL);

  CodeHandle q44("q44");
  CHECK(stbc_code_get_info(q44.ptr, nullptr) == STBC_EINVAL);

  /* destroy tolerates null */
  stbc_code_destroy(nullptr);
}

TEST_CASE("encode writes the codeword and validates the index count") {
  CodeHandle code("q44");
  const size_t idx[4] = {0, 1, 2, 3};
  std::vector<double> re(16), im(16);
  REQUIRE(stbc_encode(code.ptr, idx, 4, re.data(), im.data()) == STBC_OK);

  /* first row is sqrt(2) * (v0, v1, 0, 0); check the zeros and the energy */
  CHECK(re[2] == 0.0);
  CHECK(im[2] == 0.0);
  CHECK(re[3] == 0.0);
  double energy = 0.0;
  for (size_t i = 0; i < 16; ++i) energy += re[i] * re[i] + im[i] * im[i];
  CHECK(energy == doctest::Approx(16.0));  /* n_tx * T at unit symbol power */

  CHECK(stbc_encode(code.ptr, idx, 3, re.data(), im.data()) == STBC_EINVAL);
  const size_t bad[4] = {0, 1, 2, 9};
  CHECK(stbc_encode(code.ptr, bad, 4, re.data(), im.data()) == STBC_EINVAL);
}

TEST_CASE("minimum determinant through the C boundary") {
  CodeHandle code("q44");
  stbc_delta_report rep{};
  REQUIRE(stbc_delta_min(code.ptr, 1, &rep) == STBC_OK);
  CHECK(rep.delta_min == doctest::Approx(0.6396660183396661).epsilon(1e-10));
  CHECK(rep.coding_gain == doctest::Approx(std::pow(rep.delta_min, 0.25)));
  CHECK(rep.search_space == 6560);
  CHECK(rep.min_rank == 4);
  CHECK(rep.full_diversity == 1);
  CHECK(rep.argmin_len == 4);

  int fd = 0;
  REQUIRE(stbc_full_diversity(code.ptr, 1, &fd) == STBC_OK);
  CHECK(fd == 1);

  CodeHandle flat("q44", NAN, 0.0);
  REQUIRE(stbc_full_diversity(flat.ptr, 1, &fd) == STBC_OK);
  CHECK(fd == 0);
}

TEST_CASE("theta search through the C boundary") {
  CodeHandle code("x36");
  const double grid[3] = {60.0, 45.0, 15.0};
  stbc_delta_report best{};
  std::vector<stbc_trace_point> trace(3);
  REQUIRE(stbc_theta_search(code.ptr, grid, 3, 1, &best, trace.data()) == STBC_OK);
  CHECK(best.theta_deg == doctest::Approx(45.0));
  CHECK(trace[0].theta_deg == doctest::Approx(60.0));
  CHECK(trace[1].delta_min == doctest::Approx(best.delta_min));

  /* trace pointer is optional */
  REQUIRE(stbc_theta_search(code.ptr, grid, 3, 1, &best, nullptr) == STBC_OK);
  CHECK(stbc_theta_search(code.ptr, grid, 0, 1, &best, nullptr) == STBC_EINVAL);
}

TEST_CASE("BER sweep and decode check through the C boundary") {
  CodeHandle code("x36");
  const double snr[2] = {4.0, 8.0};
  std::vector<stbc_ber_point> pts(2);
  REQUIRE(stbc_ber_sweep(code.ptr, snr, 2, 1, 40, 3000, STBC_DECODER_CONDITIONAL,
                         42, 1, pts.data()) == STBC_OK);
  CHECK(pts[0].snr_db == 4.0);
  CHECK(pts[0].bit_errors >= 40);
  CHECK(pts[0].ber > pts[1].ber);

  std::vector<stbc_ber_point> again(2);
  REQUIRE(stbc_ber_sweep(code.ptr, snr, 2, 1, 40, 3000, STBC_DECODER_CONDITIONAL,
                         42, 3, again.data()) == STBC_OK);
  CHECK(std::memcmp(pts.data(), again.data(), sizeof(stbc_ber_point) * 2) == 0);

  stbc_decode_check_report rep{};
  REQUIRE(stbc_decode_check(code.ptr, 64, 10.0, 1, 5, 1, &rep) == STBC_OK);
  CHECK(rep.trials == 64);
  CHECK(rep.mismatches == 0);
  CHECK(rep.agreement == 1.0);

  /* the interleaved designs have no overlay, so no conditional decoder */
  CodeHandle q44("q44");
  CHECK(stbc_decode_check(q44.ptr, 16, 10.0, 1, 5, 1, &rep) == STBC_EINVAL);
  CHECK(std::strlen(stbc_last_error()) > 0);
}

TEST_CASE("capacity calls through the C boundary") {
  stbc_capacity_point cap{};
  REQUIRE(stbc_ergodic_capacity(10.0, 4, 1, 2000, 123, 5, 1, &cap) == STBC_OK);
  CHECK(cap.trials == 2000);
  CHECK(cap.std_error > 0.0);

  CodeHandle code("x48");
  stbc_capacity_point mmi{};
  REQUIRE(stbc_mmi_monte_carlo(code.ptr, 10.0, 1, 2000, 123, 5, 1, &mmi) == STBC_OK);
  CHECK(mmi.bits_per_channel_use ==
        doctest::Approx(cap.bits_per_channel_use).epsilon(1e-9));

  CHECK(stbc_mmi_closed_form(code.ptr, 10.0, 1, 500, 1, 0, 1, &mmi) == STBC_EINVAL);

  CodeHandle q44("q44");
  REQUIRE(stbc_mmi_closed_form(q44.ptr, 10.0, 1, 500, 1, 0, 1, &mmi) == STBC_OK);
  CHECK(mmi.bits_per_channel_use > 0.0);

  stbc_capacity_point ostbc{};
  REQUIRE(stbc_ostbc_capacity(0.75, 10.0, 4, 2, 500, 1, 0, 1, &ostbc) == STBC_OK);
  CHECK(ostbc.bits_per_channel_use > 0.0);
  CHECK(stbc_ostbc_capacity(-1.0, 10.0, 4, 2, 500, 1, 0, 1, &ostbc) == STBC_EINVAL);
}

TEST_CASE("theta override is rejected for non-finite values") {
  stbc_code* out = nullptr;
  const double inf = HUGE_VAL;
  CHECK(stbc_code_create("x48", inf, NAN, &out) == STBC_EINVAL);
  CHECK(out == nullptr);
}

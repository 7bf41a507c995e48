#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "stbclab/code.hpp"
#include "stbclab/rng.hpp"

using namespace stbclab;

namespace {

// Independent construction of the codeword from its block form. Symbols are
// coordinate-interleaved: entry m carries Re(s_m) and Im(s_{m^2}).
cplx vslot(const std::vector<cplx>& s, std::size_t m) {
  const std::size_t k = s.size();
  const double re = m < k ? s[m].real() : 0.0;
  const double im = (m ^ 2u) < k ? s[m ^ 2u].imag() : 0.0;
  return {re, im};
}

ComplexMatrix four_family_expected(const std::vector<cplx>& s, double theta_deg) {
  const cplx p = std::polar(1.0, theta_deg * std::numbers::pi / 180.0);
  cplx v[8];
  for (std::size_t m = 0; m < 8; ++m) v[m] = vslot(s, m);
  ComplexMatrix x(4, 4);
  x.at(0, 0) = v[0];
  x.at(0, 1) = v[1];
  x.at(0, 2) = p * v[4];
  x.at(0, 3) = p * v[5];
  x.at(1, 0) = -std::conj(v[1]);
  x.at(1, 1) = std::conj(v[0]);
  x.at(1, 2) = -p * std::conj(v[5]);
  x.at(1, 3) = p * std::conj(v[4]);
  x.at(2, 0) = v[6];
  x.at(2, 1) = v[7];
  x.at(2, 2) = v[2];
  x.at(2, 3) = v[3];
  x.at(3, 0) = -std::conj(v[7]);
  x.at(3, 1) = std::conj(v[6]);
  x.at(3, 2) = -std::conj(v[3]);
  x.at(3, 3) = std::conj(v[2]);
  return x;
}

ComplexMatrix three_family_expected(const std::vector<cplx>& s, double theta_deg) {
  const cplx p = std::polar(1.0, theta_deg * std::numbers::pi / 180.0);
  cplx v[8];
  for (std::size_t m = 0; m < 8; ++m) v[m] = vslot(s, m);
  ComplexMatrix x(4, 3);
  x.at(0, 0) = v[0];
  x.at(0, 1) = v[1];
  x.at(0, 2) = p * v[4];
  x.at(1, 0) = -std::conj(v[1]);
  x.at(1, 1) = std::conj(v[0]);
  x.at(1, 2) = -p * std::conj(v[5]);
  x.at(2, 0) = p * v[6];
  x.at(2, 1) = p * v[7];
  x.at(2, 2) = v[2];
  x.at(3, 0) = -p * std::conj(v[7]);
  x.at(3, 1) = p * std::conj(v[6]);
  x.at(3, 2) = -std::conj(v[3]);
  return x;
}

std::vector<cplx> generic_symbols(std::size_t k) {
  CounterRng rng(31, RngDomain::kTest, 2, std::uint32_t(k));
  std::vector<cplx> s(k);
  for (auto& v : s) v = rng.next_cgaussian(1.0);
  return s;
}

void check_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      CHECK(std::abs(a.at(i, j) - b.at(i, j)) < tol);
}

}  // namespace

TEST_CASE("code ids parse and print") {
  for (const char* name : {"q44", "x48", "x47", "x46", "q34", "x38", "x36"}) {
    const auto id = parse_code_id(name);
    REQUIRE(id.has_value());
    CHECK(to_string(*id) == name);
  }
  CHECK_FALSE(parse_code_id("x35").has_value());
}

TEST_CASE("code shapes, rates, and default angles") {
  struct Row {
    CodeId id;
    std::size_t n_tx, k_total, overlay;
    double rate, theta, rotation;
  };
  const Row rows[] = {
      {CodeId::q44, 4, 4, 0, 1.0, 0.0, 13.29},
      {CodeId::x48, 4, 8, 4, 2.0, 90.0, 13.29},
      {CodeId::x47, 4, 7, 3, 1.75, 90.0, 13.29},
      {CodeId::x46, 4, 6, 2, 1.5, 90.0, 13.29},
      {CodeId::q34, 3, 4, 0, 1.0, 0.0, 16.0},
      {CodeId::x38, 3, 8, 4, 2.0, 13.91, 16.0},
      {CodeId::x36, 3, 6, 2, 1.5, 45.0, 16.0},
  };
  for (const Row& r : rows) {
    const CodeSpec code = make_code(r.id);
    CHECK(code.n_tx == r.n_tx);
    CHECK(code.time_slots == 4);
    CHECK(code.k_core == 4);
    CHECK(code.k_total() == r.k_total);
    CHECK(code.overlay_count == r.overlay);
    CHECK(code.rate() == doctest::Approx(r.rate));
    CHECK(code.theta_deg == doctest::Approx(r.theta));
    CHECK(code.rotation_deg == doctest::Approx(r.rotation));
    CHECK(code.real_basis.size() == r.k_total);
    CHECK(code.imag_basis.size() == r.k_total);
  }
}

TEST_CASE("power scale normalizes transmit power to one per antenna") {
  CHECK(make_code(CodeId::q44).power_scale == doctest::Approx(std::sqrt(2.0)));
  CHECK(make_code(CodeId::x48).power_scale == doctest::Approx(1.0));
  CHECK(make_code(CodeId::x47).power_scale == doctest::Approx(std::sqrt(8.0 / 7.0)));
  CHECK(make_code(CodeId::x46).power_scale == doctest::Approx(2.0 / std::sqrt(3.0)));
  CHECK(make_code(CodeId::q34).power_scale == doctest::Approx(std::sqrt(2.0)));
  CHECK(make_code(CodeId::x38).power_scale == doctest::Approx(1.0));
  CHECK(make_code(CodeId::x36).power_scale == doctest::Approx(2.0 / std::sqrt(3.0)));
}

TEST_CASE("four-antenna codewords match the block form entrywise") {
  for (CodeId id : {CodeId::q44, CodeId::x48, CodeId::x47, CodeId::x46}) {
    const CodeSpec code = make_code(id);
    const std::vector<cplx> s = generic_symbols(code.k_total());
    const ComplexMatrix expected = four_family_expected(s, code.theta_deg);
    check_equal(encode_unscaled(code, s), expected, 1e-14);

    ComplexMatrix scaled = expected;
    scaled *= code.power_scale;
    check_equal(encode(code, s), scaled, 1e-14);
  }
}

TEST_CASE("three-antenna codewords match the block form entrywise") {
  for (CodeId id : {CodeId::q34, CodeId::x38, CodeId::x36}) {
    const CodeSpec code = make_code(id);
    const std::vector<cplx> s = generic_symbols(code.k_total());
    const ComplexMatrix expected = three_family_expected(s, code.theta_deg);
    check_equal(encode_unscaled(code, s), expected, 1e-14);
  }
}

TEST_CASE("reduced codes equal the parent with the tail symbols zeroed") {
  const CodeSpec x48 = make_code(CodeId::x48);
  const CodeSpec x46 = make_code(CodeId::x46, x48.theta_deg);
  std::vector<cplx> s6 = generic_symbols(6);
  std::vector<cplx> s8 = s6;
  s8.resize(8, cplx{});
  check_equal(encode_unscaled(x46, s6), encode_unscaled(x48, s8), 1e-14);
}

TEST_CASE("encode validates the symbol count") {
  const CodeSpec code = make_code(CodeId::q44);
  CHECK_THROWS_AS((void)encode(code, std::vector<cplx>(3)), std::invalid_argument);
  CHECK_THROWS_AS((void)make_code(CodeId::x48, std::nan("")), std::invalid_argument);
}

TEST_CASE("average power per channel use per antenna is one") {
  for (CodeId id : {CodeId::q44, CodeId::x48, CodeId::x47, CodeId::x46, CodeId::q34,
                    CodeId::x38, CodeId::x36}) {
    const CodeSpec code = make_code(id);
    const Constellation c = make_qpsk(code.rotation_deg);
    CHECK(average_power_per_use(code, c) == doctest::Approx(1.0).epsilon(1e-12));

    // Monte Carlo cross-check of the closed form
    CounterRng rng(5, RngDomain::kTest, 3, std::uint32_t(id));
    double acc = 0.0;
    const int trials = 4000;
    for (int t = 0; t < trials; ++t) {
      std::vector<cplx> s(code.k_total());
      for (auto& v : s) v = c.points[rng.next_u32() % 4];
      const ComplexMatrix x = encode(code, s);
      double e = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) e += std::norm(x.at(i, j));
      acc += e / double(x.rows() * x.cols());
    }
    CHECK(acc / trials == doctest::Approx(1.0).epsilon(0.03));
  }
}

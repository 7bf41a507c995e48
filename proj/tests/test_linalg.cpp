#include <doctest.h>

#include <cmath>

#include "stbclab/linalg.hpp"
#include "stbclab/rng.hpp"

using namespace stbclab;

namespace {

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint32_t item) {
  CounterRng rng(42, RngDomain::kTest, 1, item);
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rng.next_cgaussian(1.0);
  return m;
}

}  // namespace

TEST_CASE("determinant of identity and a hand-computed 2x2") {
  CHECK(det(ComplexMatrix::identity(4)) == cplx{1.0, 0.0});

  ComplexMatrix m(2, 2);
  m.at(0, 0) = {1.0, 1.0};
  m.at(0, 1) = {2.0, 0.0};
  m.at(1, 0) = {0.0, 3.0};
  m.at(1, 1) = {1.0, -1.0};
  // (1+j)(1-j) - 2*3j = 2 - 6j
  const cplx d = det(m);
  CHECK(std::abs(d - cplx{2.0, -6.0}) < 1e-12);
}

TEST_CASE("determinant is multiplicative") {
  const ComplexMatrix a = random_matrix(4, 4, 0);
  const ComplexMatrix b = random_matrix(4, 4, 1);
  const cplx lhs = det(a * b);
  const cplx rhs = det(a) * det(b);
  CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(rhs));
}

TEST_CASE("determinant of a singular matrix is zero") {
  ComplexMatrix m = random_matrix(3, 3, 2);
  for (std::size_t j = 0; j < 3; ++j) m.at(2, j) = m.at(0, j) + m.at(1, j);
  CHECK(std::abs(det(m)) < 1e-10);
}

TEST_CASE("det rejects non-square input") {
  CHECK_THROWS_AS((void)det(ComplexMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("gram matrix matches a direct computation") {
  const ComplexMatrix m = random_matrix(4, 3, 3);
  const ComplexMatrix g = gram(m);
  REQUIRE(g.rows() == 3);
  REQUIRE(g.cols() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      cplx s{};
      for (std::size_t t = 0; t < 4; ++t) s += std::conj(m.at(t, i)) * m.at(t, j);
      CHECK(std::abs(g.at(i, j) - s) < 1e-12);
    }
  }
}

TEST_CASE("eigenvalues of a Hermitian matrix: trace, det, and order") {
  const ComplexMatrix m = random_matrix(4, 4, 4);
  const ComplexMatrix g = gram(m);

  const std::vector<double> ev = hermitian_eigenvalues(g);
  REQUIRE(ev.size() == 4);
  for (std::size_t i = 1; i < ev.size(); ++i) CHECK(ev[i - 1] >= ev[i]);

  double trace = 0.0;
  for (std::size_t i = 0; i < 4; ++i) trace += g.at(i, i).real();
  double sum = 0.0, prod = 1.0;
  for (double v : ev) {
    sum += v;
    prod *= v;
  }
  CHECK(sum == doctest::Approx(trace).epsilon(1e-10));
  CHECK(prod == doctest::Approx(det(g).real()).epsilon(1e-8));
}

TEST_CASE("eigenvalues of a known 2x2 Hermitian matrix") {
  ComplexMatrix m(2, 2);
  m.at(0, 0) = 2.0;
  m.at(1, 1) = 2.0;
  m.at(0, 1) = {0.0, -1.0};
  m.at(1, 0) = {0.0, 1.0};
  const std::vector<double> ev = hermitian_eigenvalues(m);
  CHECK(ev[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rank of constructed matrices") {
  ComplexMatrix m = random_matrix(4, 3, 5);
  CHECK(rank(m) == 3);

  // make column 2 a combination of columns 0 and 1
  for (std::size_t t = 0; t < 4; ++t)
    m.at(t, 2) = cplx{2.0, 0.0} * m.at(t, 0) - cplx{0.0, 1.0} * m.at(t, 1);
  CHECK(rank(m) == 2);

  CHECK(rank(ComplexMatrix(4, 3)) == 0);
}

TEST_CASE("frobenius norm squared") {
  ComplexMatrix m(2, 2);
  m.at(0, 0) = {3.0, 4.0};
  m.at(1, 1) = {0.0, 2.0};
  CHECK(frobenius_norm_sq(m) == doctest::Approx(29.0));
}

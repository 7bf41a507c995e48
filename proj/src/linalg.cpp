#include "stbclab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stbclab {

cplx det(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return cplx{1.0, 0.0};

  std::vector<cplx> a = m.data();
  auto entry = [&](std::size_t r, std::size_t c) -> cplx& { return a[r * n + c]; };

  cplx result{1.0, 0.0};
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(entry(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      double mag = std::abs(entry(r, col));
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (best == 0.0) return cplx{0.0, 0.0};
    if (pivot != col) {
      for (std::size_t c = col; c < n; ++c) std::swap(entry(pivot, c), entry(col, c));
      result = -result;
    }
    const cplx p = entry(col, col);
    result *= p;
    for (std::size_t r = col + 1; r < n; ++r) {
      const cplx f = entry(r, col) / p;
      if (f == cplx{0.0, 0.0}) continue;
      for (std::size_t c = col + 1; c < n; ++c) entry(r, c) -= f * entry(col, c);
    }
  }
  return result;
}

ComplexMatrix gram(const ComplexMatrix& m) {
  ComplexMatrix g(m.cols(), m.cols());
  for (std::size_t a = 0; a < m.cols(); ++a) {
    for (std::size_t b = a; b < m.cols(); ++b) {
      cplx s{0.0, 0.0};
      for (std::size_t t = 0; t < m.rows(); ++t) s += std::conj(m.at(t, a)) * m.at(t, b);
      g.at(a, b) = s;
      if (a != b) g.at(b, a) = std::conj(s);
    }
  }
  return g;
}

double frobenius_norm_sq(const ComplexMatrix& m) {
  double s = 0.0;
  for (const auto& v : m.data()) s += std::norm(v);
  return s;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("hermitian_eigenvalues: matrix is not square");
  const std::size_t n = m.rows();
  double scale = 0.0;
  for (const auto& v : m.data()) scale = std::max(scale, std::abs(v));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (std::abs(m.at(r, c) - std::conj(m.at(c, r))) > 1e-9 * std::max(1.0, scale))
        throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian");

  std::vector<cplx> a = m.data();
  auto at = [&](std::size_t r, std::size_t c) -> cplx& { return a[r * n + c]; };
  // force exact Hermitian symmetry so rotations stay consistent
  for (std::size_t r = 0; r < n; ++r) {
    at(r, r) = cplx{at(r, r).real(), 0.0};
    for (std::size_t c = r + 1; c < n; ++c) at(c, r) = std::conj(at(r, c));
  }

  // cyclic complex Jacobi: annihilate (p,q) with a unitary similarity built
  // from the phase of a_pq and a real 2x2 rotation
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(at(p, q));
    if (off < 1e-30 * std::max(1.0, scale * scale)) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = at(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx phase = apq / mag;  // e^{j arg}
        const double app = at(p, p).real();
        const double aqq = at(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cth = 1.0 / std::sqrt(1.0 + t * t);
        const double sth = t * cth;
        // A <- J^H A J with J_pp = J_qq = c, J_pq = s*phase, J_qp = -s*conj(phase)
        for (std::size_t r = 0; r < n; ++r) {
          const cplx vp = at(r, p);
          const cplx vq = at(r, q);
          at(r, p) = cth * vp - sth * std::conj(phase) * vq;
          at(r, q) = sth * phase * vp + cth * vq;
        }
        for (std::size_t c = 0; c < n; ++c) {
          const cplx vp = at(p, c);
          const cplx vq = at(q, c);
          at(p, c) = cth * vp - sth * phase * vq;
          at(q, c) = sth * std::conj(phase) * vp + cth * vq;
        }
        at(p, q) = cplx{0.0, 0.0};
        at(q, p) = cplx{0.0, 0.0};
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i).real();
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

std::size_t rank(const ComplexMatrix& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const std::vector<double> eig = hermitian_eigenvalues(gram(m));
  const double largest = eig.empty() ? 0.0 : std::max(eig.front(), 0.0);
  if (largest <= 0.0) return 0;
  std::size_t r = 0;
  for (double v : eig)
    if (v > tol * largest) ++r;
  return r;
}

}  // namespace stbclab

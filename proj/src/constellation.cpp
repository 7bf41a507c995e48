#include "stbclab/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stbclab {

Constellation make_qpsk(double rotation_deg) {
  if (!std::isfinite(rotation_deg))
    throw std::invalid_argument("make_qpsk: non-finite rotation");
  const double rot = rotation_deg * std::numbers::pi / 180.0;
  Constellation c;
  c.bits_per_symbol = 2;
  c.rotation_deg = rotation_deg;
  c.points.reserve(4);
  c.labels = {0b00, 0b01, 0b11, 0b10};  // Gray, counterclockwise
  for (int k = 0; k < 4; ++k) {
    const double a = rot + k * (std::numbers::pi / 2.0);
    c.points.emplace_back(std::cos(a), std::sin(a));
  }
  return c;
}

std::vector<cplx> map_bits(std::span<const std::uint8_t> bits, const Constellation& c) {
  if (c.bits_per_symbol == 0 || bits.size() % c.bits_per_symbol != 0)
    throw std::invalid_argument("map_bits: bit count not a multiple of bits per symbol");
  std::vector<std::size_t> label_to_index(std::size_t{1} << c.bits_per_symbol, 0);
  for (std::size_t i = 0; i < c.labels.size(); ++i) label_to_index[c.labels[i]] = i;

  std::vector<cplx> out;
  out.reserve(bits.size() / c.bits_per_symbol);
  for (std::size_t i = 0; i < bits.size(); i += c.bits_per_symbol) {
    std::uint32_t word = 0;
    for (unsigned b = 0; b < c.bits_per_symbol; ++b)
      word = (word << 1) | (bits[i + b] ? 1u : 0u);
    out.push_back(c.points[label_to_index[word]]);
  }
  return out;
}

std::size_t nearest_point(cplx value, const Constellation& c) {
  std::size_t best = 0;
  double best_d = std::norm(value - c.points[0]);
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    const double d = std::norm(value - c.points[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

std::vector<std::uint8_t> demap_symbols(std::span<const cplx> symbols, const Constellation& c) {
  std::vector<std::uint8_t> bits;
  bits.reserve(symbols.size() * c.bits_per_symbol);
  for (const cplx& s : symbols) {
    const std::uint32_t label = c.labels[nearest_point(s, c)];
    for (unsigned b = c.bits_per_symbol; b-- > 0;)
      bits.push_back(static_cast<std::uint8_t>((label >> b) & 1u));
  }
  return bits;
}

std::vector<cplx> difference_set(const Constellation& c) {
  constexpr double kTol = 1e-9;
  std::vector<cplx> out;
  for (const cplx& a : c.points) {
    for (const cplx& b : c.points) {
      const cplx d = a - b;
      bool seen = false;
      for (const cplx& e : out) {
        if (std::abs(d - e) < kTol) {
          seen = true;
          break;
        }
      }
      if (!seen) out.push_back(d);
    }
  }
  std::sort(out.begin(), out.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

}  // namespace stbclab

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stbclab/complex_matrix.hpp"

namespace stbclab {

// Unit-average-energy signal set with Gray bit labels.
struct Constellation {
  std::vector<cplx> points;
  std::vector<std::uint32_t> labels;  // labels[i] = bit pattern of points[i]
  unsigned bits_per_symbol = 0;
  double rotation_deg = 0.0;

  std::size_t size() const { return points.size(); }
};

// QPSK with points e^{j(k*pi/2 + rotation)}, k = 0..3, the axis-aligned set
// rotated by `rotation_deg`, labeled 00, 01, 11, 10 counterclockwise.
Constellation make_qpsk(double rotation_deg);

// Groups bits (MSB first) into symbols. Throws std::invalid_argument if the
// bit count is not a multiple of bits_per_symbol.
std::vector<cplx> map_bits(std::span<const std::uint8_t> bits, const Constellation& c);

// Index of the nearest constellation point (ties to the lower index).
std::size_t nearest_point(cplx value, const Constellation& c);

// Nearest-point hard demapping back to bits; inverse of map_bits on exact points.
std::vector<std::uint8_t> demap_symbols(std::span<const cplx> symbols, const Constellation& c);

// All pairwise differences a - b including 0, deduplicated within 1e-9 and
// sorted by (Re, Im) for a deterministic enumeration order.
std::vector<cplx> difference_set(const Constellation& c);

}  // namespace stbclab

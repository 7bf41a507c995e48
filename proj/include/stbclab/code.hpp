#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "stbclab/complex_matrix.hpp"
#include "stbclab/constellation.hpp"

namespace stbclab {

// The seven codes: q44/q34 are the coordinate-interleaved orthogonal designs
// (four core symbols on an Alamouti block pair), the x-codes overlay extra
// symbols on the idle antenna positions, phased by e^{j*theta}.
enum class CodeId { q44, x48, x47, x46, q34, x38, x36 };

std::optional<CodeId> parse_code_id(std::string_view text);
std::string_view to_string(CodeId id);

// Linear-dispersion description: codeword(s) = power_scale * sum_i
// (Re(s_i) * real_basis[i] + Im(s_i) * imag_basis[i]).
struct CodeSpec {
  CodeId id{};
  std::size_t n_tx = 0;
  std::size_t time_slots = 0;   // T
  std::size_t k_core = 0;       // symbols decoded singly after combining
  std::size_t overlay_count = 0;  // symbols resolved by hypothesis (lambda)
  double theta_deg = 0.0;       // overlay phase; ignored by q44/q34
  double rotation_deg = 0.0;    // constellation rotation the code is designed for
  double power_scale = 1.0;     // makes E||codeword||_F^2 / T == n_tx
  std::vector<ComplexMatrix> real_basis;
  std::vector<ComplexMatrix> imag_basis;

  std::size_t k_total() const { return k_core + overlay_count; }
  double rate() const {
    return static_cast<double>(k_total()) / static_cast<double>(time_slots);
  }
};

// Builds a code. theta_deg defaults to the code's design value (90 for the
// 4-antenna overlay codes, 13.91 for x38, 45 for x36). Throws
// std::invalid_argument for non-finite theta.
CodeSpec make_code(CodeId id);
CodeSpec make_code(CodeId id, double theta_deg);

// Transmit codeword (power_scale applied). Throws std::invalid_argument if
// symbols.size() != k_total().
ComplexMatrix encode(const CodeSpec& code, std::span<const cplx> symbols);

// Plain basis combination without the transmit power factor. The coding-gain
// search operates at this normalization (equal average energy per symbol
// across codes), which is what the published minima are quoted at.
ComplexMatrix encode_unscaled(const CodeSpec& code, std::span<const cplx> symbols);

// Average transmit power per channel use per antenna under i.i.d. symbols
// from c; equals 1 for every code by construction of power_scale. Closed form
// from the constellation's coordinate moments and basis norms.
double average_power_per_use(const CodeSpec& code, const Constellation& c);

}  // namespace stbclab

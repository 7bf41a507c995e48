#include "stbclab/code.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stbclab/linalg.hpp"

namespace stbclab {
namespace {

struct Placement {
  std::size_t row, col;
  cplx value;
};

ComplexMatrix place(std::size_t rows, std::size_t cols, std::initializer_list<Placement> ps) {
  ComplexMatrix m(rows, cols);
  for (const auto& p : ps) m.at(p.row, p.col) = p.value;
  return m;
}

constexpr cplx j{0.0, 1.0};

// Dispersion bases of the four-antenna family. Core symbols form two Alamouti
// blocks with real/imaginary coordinates swapped between the blocks; overlay
// symbols reuse the idle off-diagonal blocks, phased by p = e^{j theta} on the
// upper block.
void four_antenna_bases(cplx p, std::vector<ComplexMatrix>& re, std::vector<ComplexMatrix>& im) {
  re = {
      place(4, 4, {{0, 0, 1.0}, {1, 1, 1.0}}),
      place(4, 4, {{0, 1, 1.0}, {1, 0, -1.0}}),
      place(4, 4, {{2, 2, 1.0}, {3, 3, 1.0}}),
      place(4, 4, {{2, 3, 1.0}, {3, 2, -1.0}}),
      place(4, 4, {{0, 2, p}, {1, 3, p}}),
      place(4, 4, {{0, 3, p}, {1, 2, -p}}),
      place(4, 4, {{2, 0, 1.0}, {3, 1, 1.0}}),
      place(4, 4, {{2, 1, 1.0}, {3, 0, -1.0}}),
  };
  im = {
      place(4, 4, {{2, 2, j}, {3, 3, -j}}),
      place(4, 4, {{2, 3, j}, {3, 2, j}}),
      place(4, 4, {{0, 0, j}, {1, 1, -j}}),
      place(4, 4, {{0, 1, j}, {1, 0, j}}),
      place(4, 4, {{2, 0, j}, {3, 1, -j}}),
      place(4, 4, {{2, 1, j}, {3, 0, j}}),
      place(4, 4, {{0, 2, j * p}, {1, 3, -j * p}}),
      place(4, 4, {{0, 3, j * p}, {1, 2, j * p}}),
  };
}

// Three-antenna family: the second Alamouti block collapses onto the third
// antenna; the overlay phase multiplies every overlay entry.
void three_antenna_bases(cplx p, std::vector<ComplexMatrix>& re, std::vector<ComplexMatrix>& im) {
  re = {
      place(4, 3, {{0, 0, 1.0}, {1, 1, 1.0}}),
      place(4, 3, {{0, 1, 1.0}, {1, 0, -1.0}}),
      place(4, 3, {{2, 2, 1.0}}),
      place(4, 3, {{3, 2, -1.0}}),
      place(4, 3, {{0, 2, p}}),
      place(4, 3, {{1, 2, -p}}),
      place(4, 3, {{2, 0, p}, {3, 1, p}}),
      place(4, 3, {{2, 1, p}, {3, 0, -p}}),
  };
  im = {
      place(4, 3, {{2, 2, j}}),
      place(4, 3, {{3, 2, j}}),
      place(4, 3, {{0, 0, j}, {1, 1, -j}}),
      place(4, 3, {{0, 1, j}, {1, 0, j}}),
      place(4, 3, {{2, 0, j * p}, {3, 1, -j * p}}),
      place(4, 3, {{2, 1, j * p}, {3, 0, j * p}}),
      place(4, 3, {{0, 2, j * p}}),
      place(4, 3, {{1, 2, j * p}}),
  };
}

double default_theta(CodeId id) {
  switch (id) {
    case CodeId::x48:
    case CodeId::x47:
    case CodeId::x46:
      return 90.0;
    case CodeId::x38:
      return 13.91;
    case CodeId::x36:
      return 45.0;
    default:
      return 0.0;
  }
}

}  // namespace

std::optional<CodeId> parse_code_id(std::string_view text) {
  if (text == "q44") return CodeId::q44;
  if (text == "x48") return CodeId::x48;
  if (text == "x47") return CodeId::x47;
  if (text == "x46") return CodeId::x46;
  if (text == "q34") return CodeId::q34;
  if (text == "x38") return CodeId::x38;
  if (text == "x36") return CodeId::x36;
  return std::nullopt;
}

std::string_view to_string(CodeId id) {
  switch (id) {
    case CodeId::q44: return "q44";
    case CodeId::x48: return "x48";
    case CodeId::x47: return "x47";
    case CodeId::x46: return "x46";
    case CodeId::q34: return "q34";
    case CodeId::x38: return "x38";
    case CodeId::x36: return "x36";
  }
  return "?";
}

CodeSpec make_code(CodeId id) { return make_code(id, default_theta(id)); }

CodeSpec make_code(CodeId id, double theta_deg) {
  if (!std::isfinite(theta_deg)) throw std::invalid_argument("make_code: non-finite theta");

  CodeSpec spec;
  spec.id = id;
  spec.time_slots = 4;
  spec.k_core = 4;
  const bool four_tx = (id == CodeId::q44 || id == CodeId::x48 || id == CodeId::x47 ||
                        id == CodeId::x46);
  spec.n_tx = four_tx ? 4 : 3;
  spec.rotation_deg = four_tx ? 13.29 : 16.0;

  switch (id) {
    case CodeId::q44:
    case CodeId::q34: spec.overlay_count = 0; break;
    case CodeId::x48:
    case CodeId::x38: spec.overlay_count = 4; break;
    case CodeId::x47: spec.overlay_count = 3; break;
    case CodeId::x46:
    case CodeId::x36: spec.overlay_count = 2; break;
  }
  spec.theta_deg = spec.overlay_count == 0 ? 0.0 : theta_deg;

  const cplx p = std::polar(1.0, spec.theta_deg * std::numbers::pi / 180.0);
  std::vector<ComplexMatrix> re, im;
  if (four_tx)
    four_antenna_bases(p, re, im);
  else
    three_antenna_bases(p, re, im);
  re.resize(spec.k_total());
  im.resize(spec.k_total());
  spec.real_basis = std::move(re);
  spec.imag_basis = std::move(im);

  // Unit average power per channel use per antenna: with unit-energy symbols
  // each coordinate has second moment 1/2, so E||X||_F^2 = (ps^2/2) * sum of
  // squared basis norms. Solve for ps with that equal to T * n_tx.
  double basis_norm_sq = 0.0;
  for (std::size_t i = 0; i < spec.k_total(); ++i)
    basis_norm_sq += frobenius_norm_sq(spec.real_basis[i]) +
                     frobenius_norm_sq(spec.imag_basis[i]);
  spec.power_scale = std::sqrt(2.0 * static_cast<double>(spec.n_tx) *
                               static_cast<double>(spec.time_slots) / basis_norm_sq);
  return spec;
}

ComplexMatrix encode_unscaled(const CodeSpec& code, std::span<const cplx> symbols) {
  if (symbols.size() != code.k_total())
    throw std::invalid_argument("encode: symbol count does not match the code");
  ComplexMatrix x(code.time_slots, code.n_tx);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const double re = symbols[i].real();
    const double im = symbols[i].imag();
    const auto& a = code.real_basis[i].data();
    const auto& b = code.imag_basis[i].data();
    auto& out = x.data();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += re * a[k] + im * b[k];
  }
  return x;
}

ComplexMatrix encode(const CodeSpec& code, std::span<const cplx> symbols) {
  ComplexMatrix x = encode_unscaled(code, symbols);
  x *= cplx{code.power_scale, 0.0};
  return x;
}

double average_power_per_use(const CodeSpec& code, const Constellation& c) {
  double m_rr = 0.0, m_ii = 0.0, m_ri = 0.0;
  for (const cplx& pt : c.points) {
    m_rr += pt.real() * pt.real();
    m_ii += pt.imag() * pt.imag();
    m_ri += pt.real() * pt.imag();
  }
  const double n = static_cast<double>(c.points.size());
  m_rr /= n;
  m_ii /= n;
  m_ri /= n;

  double total = 0.0;
  for (std::size_t i = 0; i < code.k_total(); ++i) {
    const auto& a = code.real_basis[i].data();
    const auto& b = code.imag_basis[i].data();
    double na = 0.0, nb = 0.0, cross = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      na += std::norm(a[k]);
      nb += std::norm(b[k]);
      cross += (a[k] * std::conj(b[k])).real();
    }
    total += m_rr * na + m_ii * nb + 2.0 * m_ri * cross;
  }
  const double ps2 = code.power_scale * code.power_scale;
  return ps2 * total /
         (static_cast<double>(code.time_slots) * static_cast<double>(code.n_tx));
}

}  // namespace stbclab

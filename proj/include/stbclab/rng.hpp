#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace stbclab {

// Philox4x32-10 counter-based generator. A stream is addressed by
// (seed, domain, point, item); draws within a stream advance only the block
// counter, so any (point, item) substream can be generated independently of
// scheduling order. This is what makes every Monte Carlo result here
// byte-identical for a fixed seed regardless of worker count.
class CounterRng {
 public:
  // Domain separates independent uses of the same seed (BER trials, capacity
  // draws, tests). point/item address the substream, e.g. (snr index, trial).
  CounterRng(std::uint64_t seed, std::uint32_t domain, std::uint32_t point,
             std::uint32_t item);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform on [0,1) with 53 random bits.
  double next_unit();
  // Uniform on (0,1]; safe as the log argument in Box-Muller.
  double next_unit_pos();

  // Standard normal via Box-Muller; generates pairs, second value is cached.
  double next_gaussian();

  // Circularly symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> next_cgaussian(double variance);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_;
  unsigned block_pos_ = 4;  // forces refill on first draw
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

struct RngDomain {
  static constexpr std::uint32_t kBerTrial = 1;
  static constexpr std::uint32_t kCapacityDraw = 2;
  static constexpr std::uint32_t kDecodeCheck = 3;
  static constexpr std::uint32_t kTest = 100;
};

// One raw Philox4x32-10 block; exposed so the generator can be checked
// against the published test vectors.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

}  // namespace stbclab

#pragma once

#include <array>
#include <cstdint>

namespace panic_lab {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Output is a
// pure function of (counter, key), so any (step, lane) draw can be produced
// on any thread in any order.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

// Maps 64 random bits to a double in (0, 1].
double to_unit_interval(std::uint32_t hi, std::uint32_t lo) noexcept;

// Standard normal variates keyed by (step, lane) under a 64-bit seed and a
// stream tag separating independent uses of the same seed.
class KeyedGaussian {
 public:
  KeyedGaussian(std::uint64_t seed, std::uint32_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  [[nodiscard]] double operator()(std::uint64_t step,
                                  std::uint32_t lane) const noexcept;

 private:
  Philox4x32::Key key_;
  std::uint32_t stream_;
};

// Sequential standard-normal stream built on the same generator.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint32_t stream) noexcept
      : draw_(seed, stream) {}

  double next() noexcept { return draw_(position_++, 0); }

 private:
  KeyedGaussian draw_;
  std::uint64_t position_ = 0;
};

}  // namespace panic_lab

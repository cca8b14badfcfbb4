#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace freelevy::rmt {

// Philox4x32-10 counter-based generator. A (key, stream) pair names an
// independent sequence; the 64-bit block counter advances within it.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t key, std::uint64_t stream);

  static Block generate(Block counter, Key key);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  double uniform();  // in (0, 1), 53 random bits
  double normal();   // standard normal, Box-Muller
  std::uint64_t poisson(double mean);

 private:
  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Block buf_{};
  int used_ = 4;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stream id for a named component of a seeded computation: FNV-1a of the
// name mixed with the seed through splitmix64.
std::uint64_t derive_stream(std::uint64_t seed, std::string_view component);

// Generator for `component` under `seed`.
Philox4x32 make_rng(std::uint64_t seed, std::string_view component);

}  // namespace freelevy::rmt

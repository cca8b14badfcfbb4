#include "freelevy/rmt/rng.hpp"

#include <cmath>
#include <limits>

#include "freelevy/error.hpp"

namespace freelevy::rmt {
namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

Philox4x32::Philox4x32(std::uint64_t key, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
      stream_(stream) {}

Philox4x32::Block Philox4x32::generate(Block ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

std::uint32_t Philox4x32::next_u32() {
  if (used_ == 4) {
    buf_ = generate({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                     static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                    key_);
    ++block_;
    used_ = 0;
  }
  return buf_[used_++];
}

std::uint64_t Philox4x32::next_u64() {
  const std::uint64_t hi = next_u32();
  return (hi << 32) | next_u32();
}

double Philox4x32::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Philox4x32::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform(), u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * 3.14159265358979323846 * u2;
  spare_ = rad * std::sin(ang);
  have_spare_ = true;
  return rad * std::cos(ang);
}

std::uint64_t Philox4x32::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    fail(ErrorCode::kInvalidArgument, "Poisson mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  // Inversion started at the mode, with probabilities kept in log space.
  const double u = uniform();
  const auto mode = static_cast<std::uint64_t>(std::floor(mean));
  const double lmean = std::log(mean);
  const double pmode =
      std::exp(static_cast<double>(mode) * lmean - mean - std::lgamma(static_cast<double>(mode) + 1.0));
  double below = pmode;  // P(X <= mode)
  for (double p = pmode, k = static_cast<double>(mode); k > 0.0; k -= 1.0) {
    p *= k / mean;
    below += p;
    if (p < 1e-20 * pmode) break;
  }
  if (u <= below) {
    std::uint64_t k = mode;
    double p = pmode, c = below;
    while (k > 0 && u <= c - p) {
      c -= p;
      p *= static_cast<double>(k) / mean;
      --k;
    }
    return k;
  }
  std::uint64_t k = mode;
  double p = pmode, c = below;
  while (u > c) {
    ++k;
    p *= mean / static_cast<double>(k);
    if (p == 0.0) break;
    c += p;
  }
  return k;
}

std::uint64_t derive_stream(std::uint64_t seed, std::string_view component) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : component) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return splitmix64(h ^ splitmix64(seed));
}

Philox4x32 make_rng(std::uint64_t seed, std::string_view component) {
  return Philox4x32(seed, derive_stream(seed, component));
}

}  // namespace freelevy::rmt

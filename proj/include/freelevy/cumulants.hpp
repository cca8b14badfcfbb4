#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "freelevy/triplet.hpp"

namespace freelevy {

inline constexpr int kMaxNcOrder = 14;
inline constexpr int kMaxClassicalOrder = 12;

// Set partition of {1..p}, stored as block labels in restricted-growth form:
// label[i] is the block of element i+1, blocks numbered by first element.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> labels);

  int size() const { return size_; }
  int num_blocks() const { return blocks_; }
  int label(int i) const { return labels_[i]; }  // 0-based element
  std::vector<std::vector<int>> blocks() const;   // 1-based, sorted
  std::vector<int> block_sizes() const;           // descending

  bool operator==(const Partition&) const = default;

 private:
  std::array<std::uint8_t, kMaxNcOrder> labels_{};
  std::uint8_t size_ = 0;
  std::uint8_t blocks_ = 0;
};

// All non-crossing partitions of {1..p}, lexicographic in the label string.
std::vector<Partition> enumerate_nc(int p);

bool is_noncrossing(const Partition& pi);

CumulantVector moments_to_free_cumulants(const MomentVector& m);
MomentVector free_cumulants_to_moments(const CumulantVector& k);
MomentVector classical_cumulants_to_moments(const CumulantVector& c);
CumulantVector moments_to_classical_cumulants(const MomentVector& m);

// Integer versions; NotRepresentable on int64 overflow.
std::vector<std::int64_t> free_cumulants_to_moments_exact(const std::vector<std::int64_t>& k);
std::vector<std::int64_t> classical_cumulants_to_moments_exact(
    const std::vector<std::int64_t>& c);

}  // namespace freelevy

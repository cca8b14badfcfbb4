#include "freelevy/cumulants.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>

#include "freelevy/error.hpp"

namespace freelevy {

Partition::Partition(std::vector<int> labels) {
  if (labels.empty() || labels.size() > static_cast<std::size_t>(kMaxNcOrder))
    fail(ErrorCode::kOrderTooLarge, "partition size must be in 1..14");
  // Relabel to restricted-growth form.
  std::map<int, int> relabel;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = relabel.emplace(labels[i], static_cast<int>(relabel.size()));
    labels_[i] = static_cast<std::uint8_t>(it->second);
  }
  size_ = static_cast<std::uint8_t>(labels.size());
  blocks_ = static_cast<std::uint8_t>(relabel.size());
}

std::vector<std::vector<int>> Partition::blocks() const {
  std::vector<std::vector<int>> out(blocks_);
  for (int i = 0; i < size_; ++i) out[labels_[i]].push_back(i + 1);
  return out;
}

std::vector<int> Partition::block_sizes() const {
  std::vector<int> s(blocks_, 0);
  for (int i = 0; i < size_; ++i) ++s[labels_[i]];
  std::sort(s.rbegin(), s.rend());
  return s;
}

bool is_noncrossing(const Partition& pi) {
  const int n = pi.size();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (pi.label(b) == pi.label(a)) continue;
      for (int c = b + 1; c < n; ++c) {
        if (pi.label(c) != pi.label(a)) continue;
        for (int d = c + 1; d < n; ++d)
          if (pi.label(d) == pi.label(b)) return false;
      }
    }
  return true;
}

std::vector<Partition> enumerate_nc(int p) {
  if (p < 1) fail(ErrorCode::kInvalidArgument, "partition order must be >= 1");
  if (p > kMaxNcOrder) fail(ErrorCode::kOrderTooLarge, "non-crossing enumeration limited to p <= 14");
  std::vector<Partition> out;
  std::vector<int> labels(p), lo(p), hi(p);
  // Joining element i to block B crosses iff some other block straddles the
  // current last element of B.
  std::function<void(int, int)> rec = [&](int i, int nb) {
    if (i == p) {
      out.emplace_back(labels);
      return;
    }
    for (int b = 0; b <= nb; ++b) {
      if (b < nb) {
        bool ok = true;
        for (int c = 0; c < nb && ok; ++c)
          if (c != b && lo[c] < hi[b] && hi[b] < hi[c]) ok = false;
        if (!ok) continue;
        const int saved = hi[b];
        labels[i] = b;
        hi[b] = i;
        rec(i + 1, nb);
        hi[b] = saved;
      } else {
        labels[i] = b;
        lo[b] = hi[b] = i;
        rec(i + 1, nb + 1);
      }
    }
  };
  rec(0, 0);
  return out;
}

namespace {

using BlockType = std::vector<int>;
using TypeCounts = std::vector<std::pair<BlockType, std::uint64_t>>;

// Number of non-crossing partitions of {1..p} per block-size multiset.
const TypeCounts& nc_type_counts(int p) {
  static std::mutex mu;
  static std::map<int, TypeCounts> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  std::map<BlockType, std::uint64_t> counts;
  for (const auto& pi : enumerate_nc(p)) ++counts[pi.block_sizes()];
  return cache.emplace(p, TypeCounts(counts.begin(), counts.end())).first->second;
}

void integer_partitions(int n, int max_part, BlockType& cur, std::vector<BlockType>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int k = std::min(n, max_part); k >= 1; --k) {
    cur.push_back(k);
    integer_partitions(n - k, k, cur, out);
    cur.pop_back();
  }
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

// Number of set partitions of {1..p} per block-size multiset:
// p! / prod_k (k!^{m_k} m_k!).
const TypeCounts& all_type_counts(int p) {
  static std::mutex mu;
  static std::map<int, TypeCounts> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  std::vector<BlockType> types;
  BlockType cur;
  integer_partitions(p, p, cur, types);
  TypeCounts counts;
  for (const auto& t : types) {
    std::map<int, int> mult;
    for (int k : t) ++mult[k];
    std::uint64_t denom = 1;
    for (auto [k, m] : mult) {
      for (int j = 0; j < m; ++j) denom *= factorial(k);
      denom *= factorial(m);
    }
    counts.emplace_back(t, factorial(p) / denom);
  }
  return cache.emplace(p, std::move(counts)).first->second;
}

double type_product(const BlockType& t, const std::vector<double>& k) {
  double prod = 1.0;
  for (int s : t) prod *= k[s - 1];
  return prod;
}

std::vector<double> forward(const std::vector<double>& k,
                            const std::function<const TypeCounts&(int)>& counts) {
  std::vector<double> m(k.size());
  for (std::size_t p = 1; p <= k.size(); ++p) {
    double s = 0.0;
    for (const auto& [t, c] : counts(static_cast<int>(p)))
      s += static_cast<double>(c) * type_product(t, k);
    m[p - 1] = s;
  }
  return m;
}

// Inverts `forward` order by order: the single-block term has coefficient 1.
std::vector<double> backward(const std::vector<double>& m,
                             const std::function<const TypeCounts&(int)>& counts) {
  std::vector<double> k(m.size(), 0.0);
  for (std::size_t p = 1; p <= m.size(); ++p) {
    double s = 0.0;
    for (const auto& [t, c] : counts(static_cast<int>(p))) {
      if (t.size() == 1) continue;
      s += static_cast<double>(c) * type_product(t, k);
    }
    k[p - 1] = m[p - 1] - s;
  }
  return k;
}

void check_order(std::size_t p, int limit, const char* what) {
  if (p > static_cast<std::size_t>(limit))
    fail(ErrorCode::kOrderTooLarge, std::string(what) + " limited to order " +
                                        std::to_string(limit));
}

std::vector<std::int64_t> forward_exact(const std::vector<std::int64_t>& k,
                                        const std::function<const TypeCounts&(int)>& counts) {
  std::vector<std::int64_t> m(k.size());
  for (std::size_t p = 1; p <= k.size(); ++p) {
    std::int64_t s = 0;
    for (const auto& [t, c] : counts(static_cast<int>(p))) {
      std::int64_t term = static_cast<std::int64_t>(c);
      for (int b : t)
        if (__builtin_mul_overflow(term, k[b - 1], &term))
          fail(ErrorCode::kNotRepresentable, "integer moment overflow");
      if (__builtin_add_overflow(s, term, &s))
        fail(ErrorCode::kNotRepresentable, "integer moment overflow");
    }
    m[p - 1] = s;
  }
  return m;
}

}  // namespace

CumulantVector moments_to_free_cumulants(const MomentVector& m) {
  check_order(m.values.size(), kMaxNcOrder, "free moment-cumulant conversion");
  return {backward(m.values, nc_type_counts)};
}

MomentVector free_cumulants_to_moments(const CumulantVector& k) {
  check_order(k.values.size(), kMaxNcOrder, "free moment-cumulant conversion");
  return {forward(k.values, nc_type_counts)};
}

MomentVector classical_cumulants_to_moments(const CumulantVector& c) {
  check_order(c.values.size(), kMaxClassicalOrder, "classical moment-cumulant conversion");
  return {forward(c.values, all_type_counts)};
}

CumulantVector moments_to_classical_cumulants(const MomentVector& m) {
  check_order(m.values.size(), kMaxClassicalOrder, "classical moment-cumulant conversion");
  return {backward(m.values, all_type_counts)};
}

std::vector<std::int64_t> free_cumulants_to_moments_exact(const std::vector<std::int64_t>& k) {
  check_order(k.size(), kMaxNcOrder, "free moment-cumulant conversion");
  return forward_exact(k, nc_type_counts);
}

std::vector<std::int64_t> classical_cumulants_to_moments_exact(
    const std::vector<std::int64_t>& c) {
  check_order(c.size(), kMaxClassicalOrder, "classical moment-cumulant conversion");
  return forward_exact(c, all_type_counts);
}

}  // namespace freelevy

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace freelevy {

struct Interval {
  double lo;
  double hi;
  bool operator==(const Interval&) const = default;
};

// Finite disjoint union of bounded half-open intervals [lo, hi), sorted, with
// touching intervals merged. The empty set has no intervals.
class SetExpr {
 public:
  SetExpr() = default;

  static SetExpr normalize(std::vector<Interval> raw);
  static SetExpr interval(double lo, double hi);

  const std::vector<Interval>& intervals() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  bool contains(double x) const;
  double length() const;
  // Lebesgue length of this set inside [lo, hi).
  double overlap(double lo, double hi) const;

  bool operator==(const SetExpr&) const = default;

 private:
  std::vector<Interval> parts_;
};

SetExpr set_normalize(std::vector<Interval> raw);
SetExpr set_union(const SetExpr& a, const SetExpr& b);
SetExpr set_intersect(const SetExpr& a, const SetExpr& b);
SetExpr set_diff(const SetExpr& a, const SetExpr& b);
bool set_subset(const SetExpr& a, const SetExpr& b);

// Grammar: "[a,b)" terms joined by "∪" or "+"; "∅" (or "") is empty.
SetExpr parse_set_expr(std::string_view text);
std::string format_set_expr(const SetExpr& s);

}  // namespace freelevy

#include "freelevy/set_expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "freelevy/error.hpp"

namespace freelevy {

SetExpr SetExpr::normalize(std::vector<Interval> raw) {
  for (const auto& iv : raw) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      fail(ErrorCode::kInvalidArgument, "set intervals must be bounded");
    if (iv.lo > iv.hi) fail(ErrorCode::kInvalidArgument, "interval with lo > hi");
  }
  std::erase_if(raw, [](const Interval& iv) { return iv.lo == iv.hi; });
  std::sort(raw.begin(), raw.end(),
            [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  SetExpr s;
  for (const auto& iv : raw) {
    if (!s.parts_.empty() && iv.lo <= s.parts_.back().hi)
      s.parts_.back().hi = std::max(s.parts_.back().hi, iv.hi);
    else
      s.parts_.push_back(iv);
  }
  return s;
}

SetExpr SetExpr::interval(double lo, double hi) { return normalize({{lo, hi}}); }

bool SetExpr::contains(double x) const {
  for (const auto& iv : parts_)
    if (iv.lo <= x && x < iv.hi) return true;
  return false;
}

double SetExpr::length() const {
  double l = 0.0;
  for (const auto& iv : parts_) l += iv.hi - iv.lo;
  return l;
}

double SetExpr::overlap(double lo, double hi) const {
  double l = 0.0;
  for (const auto& iv : parts_) {
    const double a = std::max(lo, iv.lo), b = std::min(hi, iv.hi);
    if (a < b) l += b - a;
  }
  return l;
}

SetExpr set_normalize(std::vector<Interval> raw) { return SetExpr::normalize(std::move(raw)); }

SetExpr set_union(const SetExpr& a, const SetExpr& b) {
  std::vector<Interval> all = a.intervals();
  all.insert(all.end(), b.intervals().begin(), b.intervals().end());
  return SetExpr::normalize(std::move(all));
}

SetExpr set_intersect(const SetExpr& a, const SetExpr& b) {
  std::vector<Interval> out;
  for (const auto& x : a.intervals())
    for (const auto& y : b.intervals()) {
      const double lo = std::max(x.lo, y.lo), hi = std::min(x.hi, y.hi);
      if (lo < hi) out.push_back({lo, hi});
    }
  return SetExpr::normalize(std::move(out));
}

SetExpr set_diff(const SetExpr& a, const SetExpr& b) {
  std::vector<Interval> out;
  for (const auto& x : a.intervals()) {
    double cur = x.lo;
    for (const auto& y : b.intervals()) {
      if (y.hi <= cur || y.lo >= x.hi) continue;
      if (y.lo > cur) out.push_back({cur, y.lo});
      cur = std::max(cur, y.hi);
      if (cur >= x.hi) break;
    }
    if (cur < x.hi) out.push_back({cur, x.hi});
  }
  return SetExpr::normalize(std::move(out));
}

bool set_subset(const SetExpr& a, const SetExpr& b) { return set_diff(a, b).empty(); }

namespace {

struct Cursor {
  std::string_view s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n')) ++i;
  }
  bool eat(std::string_view tok) {
    skip_ws();
    if (s.substr(i, tok.size()) == tok) {
      i += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!eat(tok))
      fail(ErrorCode::kParseError, "set expression: expected '" + std::string(tok) +
                                       "' at offset " + std::to_string(i));
  }
  double number() {
    skip_ws();
    double v = 0.0;
    const char* begin = s.data() + i;
    // from_chars rejects a leading '+'.
    if (i < s.size() && s[i] == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
    if (ec != std::errc())
      fail(ErrorCode::kParseError, "set expression: bad number at offset " + std::to_string(i));
    i = static_cast<std::size_t>(ptr - s.data());
    return v;
  }
  bool done() {
    skip_ws();
    return i == s.size();
  }
};

}  // namespace

SetExpr parse_set_expr(std::string_view text) {
  Cursor c{text};
  if (c.done()) return {};
  if (c.eat("∅")) {
    if (!c.done()) fail(ErrorCode::kParseError, "set expression: trailing input after empty set");
    return {};
  }
  std::vector<Interval> parts;
  for (;;) {
    c.expect("[");
    const double lo = c.number();
    c.expect(",");
    const double hi = c.number();
    c.expect(")");
    if (!(lo < hi)) fail(ErrorCode::kParseError, "set expression: interval needs lo < hi");
    parts.push_back({lo, hi});
    if (c.done()) break;
    if (!c.eat("∪") && !c.eat("+"))
      fail(ErrorCode::kParseError, "set expression: expected union operator");
  }
  return SetExpr::normalize(std::move(parts));
}

std::string format_set_expr(const SetExpr& s) {
  if (s.empty()) return "∅";
  std::string out;
  char buf[64];
  for (const auto& iv : s.intervals()) {
    if (!out.empty()) out += "∪";
    std::snprintf(buf, sizeof buf, "[%.17g,%.17g)", iv.lo, iv.hi);
    out += buf;
  }
  return out;
}

}  // namespace freelevy

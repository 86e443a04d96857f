#include "qsched/rational.hpp"

#include <charconv>
#include <limits>

namespace qsched {

namespace {

std::optional<std::int64_t> parse_int(std::string_view s, bool allow_sign) {
  if (s.empty()) return std::nullopt;
  bool negative = false;
  if (allow_sign && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) return std::nullopt;
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return negative ? -value : value;
}

}  // namespace

std::optional<Weight> parse_weight(std::string_view text) {
  if (text.empty()) return std::nullopt;

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_int(text.substr(0, slash), true);
    auto den = parse_int(text.substr(slash + 1), false);
    if (!num || !den || *den == 0) return std::nullopt;
    return Weight(*num, *den);
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (frac.size() > 17) return std::nullopt;
    std::int64_t int_part = 0;
    if (!whole.empty()) {
      auto v = parse_int(whole, false);
      if (!v) return std::nullopt;
      int_part = *v;
    }
    std::int64_t frac_part = 0;
    std::int64_t scale = 1;
    if (!frac.empty()) {
      auto v = parse_int(frac, false);
      if (!v) return std::nullopt;
      frac_part = *v;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    }
    if (int_part > (std::numeric_limits<std::int64_t>::max() - frac_part) / scale) return std::nullopt;
    Weight w(int_part * scale + frac_part, scale);
    return negative ? -w : w;
  }

  auto v = parse_int(text, true);
  if (!v) return std::nullopt;
  return Weight(*v);
}

std::string format_weight(const Weight& w) {
  return std::to_string(w.numerator()) + "/" + std::to_string(w.denominator());
}

}  // namespace qsched

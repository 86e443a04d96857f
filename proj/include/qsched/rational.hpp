#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace boost {

// Boost 1.74 mixed-type equality recurses under C++20 reversed-operator lookup.
inline bool operator==(const rational<std::int64_t>& a, std::int64_t b) {
  return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, int b) { return a == static_cast<std::int64_t>(b); }

}  // namespace boost

namespace qsched {

/// Exact packet weight. All weight comparisons in the library go through this
/// type; there is no floating-point path.
using Weight = boost::rational<std::int64_t>;

/// Parses an integer ("3"), a decimal ("0.75") or a fraction ("3/4").
/// Returns nullopt on malformed input or a zero denominator.
std::optional<Weight> parse_weight(std::string_view text);

/// Always "num/den", e.g. "5/1", "3/4", "-1/2".
std::string format_weight(const Weight& w);

}  // namespace qsched

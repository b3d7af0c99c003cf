#pragma once

#include <cstdint>
#include <compare>
#include <string>
#include <optional>

namespace viewsync {

/// Exact fixed-point time, 10^-6 resolution in abstract time units.
/// All simulation arithmetic stays in integer ticks so event ordering is
/// reproducible; floating point only appears in report summaries.
class Time {
 public:
  static constexpr std::int64_t kTicksPerUnit = 1'000'000;

  constexpr Time() = default;

  static constexpr Time from_ticks(std::int64_t ticks) { return Time(ticks); }
  static constexpr Time units(std::int64_t u) { return Time(u * kTicksPerUnit); }

  constexpr std::int64_t ticks() const { return ticks_; }
  double to_double() const { return static_cast<double>(ticks_) / kTicksPerUnit; }

  constexpr auto operator<=>(const Time&) const = default;

  Time operator+(Time o) const;
  Time operator-(Time o) const;
  Time& operator+=(Time o) { *this = *this + o; return *this; }
  Time& operator-=(Time o) { *this = *this - o; return *this; }

  /// Scale by a non-negative integer factor; aborts on overflow.
  Time scaled(std::int64_t factor) const;

  /// Scale by 2^exp; aborts on overflow.
  Time doubled_times(std::uint64_t exp) const;

  /// Canonical decimal rendering, e.g. "4.5", "0", "-2.25". Exact.
  std::string to_string() const;

  /// Parses a decimal literal with at most six fractional digits.
  static std::optional<Time> parse(const std::string& text);

 private:
  constexpr explicit Time(std::int64_t ticks) : ticks_(ticks) {}
  std::int64_t ticks_ = 0;
};

using Duration = Time;

}  // namespace viewsync

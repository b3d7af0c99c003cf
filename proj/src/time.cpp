#include "viewsync/time.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace viewsync {

namespace {

[[noreturn]] void overflow() {
  throw std::overflow_error("time arithmetic overflow");
}

}  // namespace

Time Time::operator+(Time o) const {
  std::int64_t r;
  if (__builtin_add_overflow(ticks_, o.ticks_, &r)) overflow();
  return Time(r);
}

Time Time::operator-(Time o) const {
  std::int64_t r;
  if (__builtin_sub_overflow(ticks_, o.ticks_, &r)) overflow();
  return Time(r);
}

Time Time::scaled(std::int64_t factor) const {
  std::int64_t r;
  if (__builtin_mul_overflow(ticks_, factor, &r)) overflow();
  return Time(r);
}

Time Time::doubled_times(std::uint64_t exp) const {
  std::int64_t r = ticks_;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(r, std::int64_t{2}, &r)) overflow();
  }
  return Time(r);
}

std::string Time::to_string() const {
  std::int64_t t = ticks_;
  std::string sign;
  if (t < 0) {
    sign = "-";
    t = -t;
  }
  std::int64_t whole = t / kTicksPerUnit;
  std::int64_t frac = t % kTicksPerUnit;
  if (frac == 0) return sign + std::to_string(whole);
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%06lld", static_cast<long long>(frac));
  std::string digits(buf);
  while (!digits.empty() && digits.back() == '0') digits.pop_back();
  return sign + std::to_string(whole) + "." + digits;
}

std::optional<Time> Time::parse(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') {
    neg = text[i] == '-';
    ++i;
  }
  if (i == text.size()) return std::nullopt;

  std::int64_t whole = 0;
  bool any_digit = false;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
    any_digit = true;
    if (__builtin_mul_overflow(whole, std::int64_t{10}, &whole)) return std::nullopt;
    if (__builtin_add_overflow(whole, std::int64_t{text[i] - '0'}, &whole)) return std::nullopt;
  }
  std::int64_t frac = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    int places = 0;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      any_digit = true;
      if (++places > 6) {
        // Finer than tick resolution: reject instead of silently rounding.
        return std::nullopt;
      }
      frac = frac * 10 + (text[i] - '0');
    }
    for (; places < 6; ++places) frac *= 10;
  }
  if (!any_digit || i != text.size()) return std::nullopt;

  std::int64_t ticks;
  if (__builtin_mul_overflow(whole, kTicksPerUnit, &ticks)) return std::nullopt;
  if (__builtin_add_overflow(ticks, frac, &ticks)) return std::nullopt;
  if (neg) ticks = -ticks;
  return Time::from_ticks(ticks);
}

}  // namespace viewsync

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "viewsync/time.hpp"

using namespace viewsync;

TEST_CASE("parsing decimal literals is exact") {
  CHECK(Time::parse("0")->ticks() == 0);
  CHECK(Time::parse("1")->ticks() == 1'000'000);
  CHECK(Time::parse("4.5")->ticks() == 4'500'000);
  CHECK(Time::parse("0.015625")->ticks() == 15'625);
  CHECK(Time::parse("-2.25")->ticks() == -2'250'000);
  CHECK(Time::parse("20")->ticks() == 20'000'000);
}

TEST_CASE("parse rejects junk and sub-tick precision") {
  CHECK(!Time::parse(""));
  CHECK(!Time::parse("abc"));
  CHECK(!Time::parse("1.2.3"));
  CHECK(!Time::parse("1e3"));
  CHECK(!Time::parse("0.0000001"));  // 7 fractional digits
  CHECK(!Time::parse("."));
  CHECK(!Time::parse("-"));
}

TEST_CASE("format and parse round-trip") {
  for (const char* text : {"0", "1", "4.5", "0.25", "123.000001", "-7.5", "0.015625"}) {
    auto t = Time::parse(text);
    REQUIRE(t);
    CHECK(t->to_string() == text);
    CHECK(Time::parse(t->to_string()) == t);
  }
}

TEST_CASE("arithmetic stays in ticks") {
  const Time a = *Time::parse("1.5");
  const Time b = *Time::parse("0.25");
  CHECK((a + b).to_string() == "1.75");
  CHECK((a - b).to_string() == "1.25");
  CHECK(a.scaled(4).to_string() == "6");
  CHECK(b.doubled_times(3).to_string() == "2");
  CHECK(a < a.scaled(2));
}

TEST_CASE("overflow is an error, not wraparound") {
  const Time huge = Time::from_ticks(INT64_MAX / 2 + 1);
  CHECK_THROWS_AS((void)(huge + huge), std::overflow_error);
  CHECK_THROWS_AS((void)huge.scaled(3), std::overflow_error);
  CHECK_THROWS_AS((void)Time::units(1).doubled_times(63), std::overflow_error);
}

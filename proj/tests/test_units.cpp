#include <doctest.h>

#include <numbers>

#include "squeeze/errors.hpp"
#include "squeeze/units.hpp"

using squeeze::ConfigError;
using squeeze::parse_quantity;

constexpr double kTwoPi = 2 * std::numbers::pi;

TEST_CASE("plain numbers") {
  CHECK(parse_quantity("6.283e5") == 6.283e5);
  CHECK(parse_quantity("  42 ") == 42.0);
  CHECK(parse_quantity("-1.5") == -1.5);
}

TEST_CASE("angular frequency literals") {
  CHECK(parse_quantity("2pi*100kHz") == doctest::Approx(kTwoPi * 1e5).epsilon(1e-15));
  CHECK(parse_quantity("(2pi)100kHz") == doctest::Approx(kTwoPi * 1e5).epsilon(1e-15));
  CHECK(parse_quantity("1e4*2pi*100kHz") == doctest::Approx(kTwoPi * 1e9).epsilon(1e-15));
  CHECK(parse_quantity("pi*2") == doctest::Approx(kTwoPi).epsilon(1e-15));
  CHECK(parse_quantity("3MHz") == 3e6);
  CHECK(parse_quantity("1GHz") == 1e9);
  CHECK(parse_quantity("5Hz") == 5.0);
}

TEST_CASE("time literals") {
  CHECK(parse_quantity("0.3us") == doctest::Approx(0.3e-6).epsilon(1e-15));
  CHECK(parse_quantity("2ms") == doctest::Approx(2e-3).epsilon(1e-15));
  CHECK(parse_quantity("10ns") == doctest::Approx(1e-8).epsilon(1e-15));
  CHECK(parse_quantity("1s") == 1.0);
}

TEST_CASE("malformed literals are rejected") {
  for (const char* bad : {"", "abc", "2pi*", "*3", "1e4 kHz x", "3 parsecs", "2pi**3", "1..2"})
    CHECK_THROWS_AS(parse_quantity(bad), ConfigError);
}

#ifndef SRL_CORE_RATIONAL_HH
#define SRL_CORE_RATIONAL_HH

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace srl
{
    using BigInt = boost::multiprecision::cpp_int;
    using Rational = boost::multiprecision::cpp_rational;

    // Small exact fraction used for tolerances in hot loops; always reduced,
    // den > 0.
    struct Fraction
    {
        std::int64_t num = 0;
        std::int64_t den = 1;

        Fraction() = default;
        Fraction(std::int64_t n, std::int64_t d);

        auto to_rational() const -> Rational { return Rational(num, den); }
        auto to_double() const -> double { return static_cast<double>(num) / static_cast<double>(den); }
        auto str() const -> std::string;

        auto operator== (const Fraction &) const -> bool = default;
    };

    auto operator< (const Fraction & a, const Fraction & b) -> bool;
    auto operator+ (const Fraction & a, const Fraction & b) -> Fraction;

    // Accepts "p/q", decimal "0.15" or integer notation.
    auto parse_fraction(const std::string & s) -> Fraction;
    auto parse_rational(const std::string & s) -> Rational;

    auto to_string(const Rational & r) -> std::string;
    auto to_double(const Rational & r) -> double;

    // floor and ceiling of a rational
    auto floor_of(const Rational & r) -> BigInt;
    auto ceil_of(const Rational & r) -> BigInt;

    auto pow(const Rational & r, unsigned e) -> Rational;

    // Interval [lo, hi] certified to contain log2(x) for x > 0.
    struct LogBounds
    {
        double lo;
        double hi;
    };
    auto log2_bounds(const Rational & x) -> LogBounds;
    auto log2_bounds(const BigInt & x) -> LogBounds;

    auto factorial(unsigned k) -> BigInt;
    auto binomial(unsigned n, unsigned k) -> BigInt;
    auto falling_factorial(std::uint64_t n, unsigned k) -> BigInt;
}

#endif

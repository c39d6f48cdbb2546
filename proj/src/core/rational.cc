#include <srl/core/rational.hh>
#include <srl/core/structure.hh>

#include <cmath>
#include <numeric>

using std::int64_t;
using std::string;

namespace srl
{
    Fraction::Fraction(int64_t n, int64_t d)
    {
        if (d == 0)
            throw Error("zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        auto g = std::gcd(n < 0 ? -n : n, d);
        if (g == 0)
            g = 1;
        num = n / g;
        den = d / g;
    }

    auto Fraction::str() const -> string
    {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }

    auto operator< (const Fraction & a, const Fraction & b) -> bool
    {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }

    auto operator+ (const Fraction & a, const Fraction & b) -> Fraction
    {
        return Fraction(a.num * b.den + b.num * a.den, a.den * b.den);
    }

    auto parse_fraction(const string & s) -> Fraction
    {
        auto r = parse_rational(s);
        auto n = boost::multiprecision::numerator(r);
        auto d = boost::multiprecision::denominator(r);
        if (abs(n) > BigInt(1) << 40 || d > BigInt(1) << 40)
            throw Error("fraction '" + s + "' has too many digits");
        return Fraction(static_cast<int64_t>(n), static_cast<int64_t>(d));
    }

    namespace
    {
        auto parse_integer(const string & s) -> BigInt
        {
            if (s.empty() || s.find_first_not_of("-0123456789") != string::npos)
                throw Error("bad number '" + s + "'");
            bool negative = s[0] == '-';
            auto first = s.find_first_not_of("-0");
            BigInt v = first == string::npos ? BigInt(0) : BigInt(s.substr(first));
            return negative ? BigInt(-v) : v;
        }
    }

    auto parse_rational(const string & s) -> Rational
    {
        if (s.empty())
            throw Error("empty number");
        try {
            auto slash = s.find('/');
            if (slash != string::npos)
                return Rational(parse_integer(s.substr(0, slash)), parse_integer(s.substr(slash + 1)));
            auto dot = s.find('.');
            if (dot == string::npos)
                return Rational(parse_integer(s));
            string digits = s.substr(0, dot) + s.substr(dot + 1);
            if (digits.empty() || digits == "-")
                throw Error("bad number '" + s + "'");
            // a leading zero would make the parser read octal
            bool negative = digits[0] == '-';
            digits = digits.substr(digits.find_first_not_of("-0") == string::npos ? digits.size() : digits.find_first_not_of("-0"));
            if (digits.empty())
                digits = "0";
            if (negative)
                digits = "-" + digits;
            BigInt den = 1;
            for (std::size_t i = dot + 1 ; i < s.size() ; ++i)
                den *= 10;
            return Rational(BigInt(digits), den);
        }
        catch (const std::runtime_error &) {
            throw Error("bad number '" + s + "'");
        }
    }

    auto to_string(const Rational & r) -> string
    {
        auto d = boost::multiprecision::denominator(r);
        if (d == 1)
            return boost::multiprecision::numerator(r).str();
        return boost::multiprecision::numerator(r).str() + "/" + d.str();
    }

    auto to_double(const Rational & r) -> double
    {
        if (r == 0)
            return 0.0;
        double n = boost::multiprecision::numerator(r).convert_to<double>();
        double d = boost::multiprecision::denominator(r).convert_to<double>();
        if (std::isfinite(n) && std::isfinite(d) && d != 0)
            return n / d;
        auto b = log2_bounds(Rational(abs(r)));
        double mid = std::exp2((b.lo + b.hi) / 2);
        return r < 0 ? -mid : mid;
    }

    auto floor_of(const Rational & r) -> BigInt
    {
        BigInt n = boost::multiprecision::numerator(r), d = boost::multiprecision::denominator(r);
        BigInt q = n / d;
        if (n < 0 && q * d != n)
            q -= 1;
        return q;
    }

    auto ceil_of(const Rational & r) -> BigInt
    {
        return -floor_of(-r);
    }

    auto pow(const Rational & r, unsigned e) -> Rational
    {
        Rational result = 1, base = r;
        while (e) {
            if (e & 1)
                result *= base;
            base *= base;
            e >>= 1;
        }
        return result;
    }

    auto log2_bounds(const BigInt & x) -> LogBounds
    {
        if (x <= 0)
            throw Error("log of non-positive number");
        auto msb = boost::multiprecision::msb(x);
        BigInt top = x;
        long shift = 0;
        if (msb > 52) {
            shift = static_cast<long>(msb) - 52;
            top >>= shift;
        }
        auto m = static_cast<double>(top.convert_to<std::uint64_t>());
        double lo = std::log2(m) + static_cast<double>(shift);
        double hi = (shift == 0 ? std::log2(m) : std::log2(m + 1.0)) + static_cast<double>(shift);
        // widen for the rounding of log2 itself
        double slack = 1e-12 * (1.0 + std::fabs(hi));
        return LogBounds{lo - slack, hi + slack};
    }

    auto log2_bounds(const Rational & x) -> LogBounds
    {
        if (x <= 0)
            throw Error("log of non-positive number");
        auto n = log2_bounds(BigInt(boost::multiprecision::numerator(x)));
        auto d = log2_bounds(BigInt(boost::multiprecision::denominator(x)));
        return LogBounds{n.lo - d.hi, n.hi - d.lo};
    }

    auto factorial(unsigned k) -> BigInt
    {
        BigInt r = 1;
        for (unsigned i = 2 ; i <= k ; ++i)
            r *= i;
        return r;
    }

    auto binomial(unsigned n, unsigned k) -> BigInt
    {
        if (k > n)
            return 0;
        BigInt r = 1;
        for (unsigned i = 0 ; i < k ; ++i) {
            r *= (n - i);
            r /= (i + 1);
        }
        return r;
    }

    auto falling_factorial(std::uint64_t n, unsigned k) -> BigInt
    {
        BigInt r = 1;
        for (unsigned i = 0 ; i < k ; ++i) {
            if (n < i)
                return 0;
            r *= (n - i);
        }
        return r;
    }
}

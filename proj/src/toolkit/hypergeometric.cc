#include <srl/toolkit/hypergeometric.hh>
#include <srl/core/rng.hh>
#include <srl/core/structure.hh>

#include <cmath>
#include <vector>

using std::uint64_t;

namespace srl
{
    auto hypergeometric_tail(uint64_t n, uint64_t k, uint64_t s, const Rational & t) -> Rational
    {
        if (s > n || k > n || s == 0)
            throw Error("hypergeometric: need 0 < s <= N and K <= N");
        Rational threshold = Rational(BigInt(k), BigInt(n)) + t;
        BigInt total = binomial(n, s);
        BigInt hits = 0;
        for (uint64_t h = 0 ; h <= s && h <= k ; ++h) {
            if (s - h > n - k)
                continue;
            if (Rational(BigInt(h), BigInt(s)) >= threshold)
                hits += binomial(k, h) * binomial(n - k, s - h);
        }
        return Rational(hits, total);
    }

    auto mc_hypergeometric(uint64_t n, uint64_t k, uint64_t s, const Rational & t,
            uint64_t trials, uint64_t seed) -> HypergeometricCheck
    {
        HypergeometricCheck r;
        r.exact_tail = hypergeometric_tail(n, k, s, t);
        double td = to_double(t);
        r.bound = std::exp(-2.0 * td * td * static_cast<double>(s));
        // exp is correctly rounded to within an ulp; allow that much
        r.within_bound = to_double(r.exact_tail) <= r.bound * (1.0 + 1e-12);

        Rational threshold = Rational(BigInt(k), BigInt(n)) + t;
        Rng rng = Rng(seed).substream("hypergeometric");
        std::vector<uint64_t> items(n);
        uint64_t hits = 0;
        for (uint64_t trial = 0 ; trial < trials ; ++trial) {
            for (uint64_t i = 0 ; i < n ; ++i)
                items[i] = i;
            uint64_t marked = 0;
            for (uint64_t i = 0 ; i < s ; ++i) {
                std::swap(items[i], items[i + rng.below(n - i)]);
                marked += items[i] < k;
            }
            if (Rational(BigInt(marked), BigInt(s)) >= threshold)
                ++hits;
        }
        if (trials > 0) {
            r.empirical = static_cast<double>(hits) / static_cast<double>(trials);
            double p = to_double(r.exact_tail);
            r.sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
        }
        return r;
    }
}

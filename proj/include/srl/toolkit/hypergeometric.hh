#ifndef SRL_TOOLKIT_HYPERGEOMETRIC_HH
#define SRL_TOOLKIT_HYPERGEOMETRIC_HH

#include <srl/core/rational.hh>

#include <cstdint>

namespace srl
{
    struct HypergeometricCheck
    {
        double empirical = 0.0;
        Rational exact_tail;
        double bound = 1.0;      // exp(-2 t^2 s)
        bool within_bound = true;
        double sigma = 0.0;      // binomial standard error of the empirical estimate
    };

    // Tail P[H/s >= K/N + t] for s draws without replacement from N items of
    // which K are marked.
    auto hypergeometric_tail(std::uint64_t n, std::uint64_t k, std::uint64_t s, const Rational & t) -> Rational;

    auto mc_hypergeometric(std::uint64_t n, std::uint64_t k, std::uint64_t s, const Rational & t,
            std::uint64_t trials, std::uint64_t seed) -> HypergeometricCheck;
}

#endif

#ifndef SRL_REGULARITY_PARAMS_HH
#define SRL_REGULARITY_PARAMS_HH

#include <srl/core/rational.hh>
#include <srl/core/structure.hh>

#include <optional>
#include <string>
#include <vector>

namespace srl
{
    // One hypothesis evaluated at a concrete universe size. Conditions with
    // logarithms store an outward-rounded lhs (lower bound) and rhs (upper
    // bound), so `satisfied` is sound. minimal_n is the smallest universe size
    // found for which the condition holds, when it depends on the size at all.
    struct Condition
    {
        std::string name;
        std::string formula;
        Rational lhs;
        Rational rhs;
        bool satisfied = false;
        std::optional<BigInt> minimal_n;
        bool size_dependent = true;
    };

    // Internal parameters of the large-size guarantee, derived from the
    // target epsilon with gamma_1 = 3/2 and p the integer midpoint of the
    // admissible interval (gamma_1^g (1 + eps), 2^(g+1)).
    struct MainRecipe
    {
        Rational gamma1;
        BigInt p;
        Rational eps1;
        Rational zeta1;
        Rational eta1;
        Rational beta;
        BigInt m;
        std::vector<Condition> conditions;
        std::optional<BigInt> k_eps;       // max of the per-condition minima
    };

    struct Params
    {
        Fraction epsilon;
        Rational zeta;
        Rational eta;
        unsigned tauhat = 0;
        unsigned n_l = 0;
        std::uint64_t n = 0;
        std::uint64_t g = 0;
        bool g_overridden = false;
        std::uint64_t r = 0;
        Rational beta;
        BigInt m;
        std::vector<Condition> conditions;  // size conditions at (epsilon, zeta, eta)
        MainRecipe main;

        auto satisfied() const -> bool;
        // eps^(-g-2)
        auto partition_size_bound() const -> Rational;
    };

    // ceil(5 n_L tauhat log2 tauhat); exact when tauhat is a power of two,
    // otherwise rounded up from certified log bounds
    auto compute_g(const Signature & sig, unsigned tauhat) -> std::uint64_t;

    auto derive_main(const Signature & sig, unsigned tauhat, const Fraction & eps, std::uint64_t g,
            std::uint64_t n) -> MainRecipe;

    // eps must lie in (0, 1); the (0, 1/4) requirement is recorded as a
    // condition rather than enforced.
    auto compute_parameters(const Signature & sig, unsigned tauhat, const Fraction & eps, std::uint64_t n,
            const Rational & eta, const Rational & zeta, std::optional<std::uint64_t> g_override = {}) -> Params;

    auto format_condition(const Condition & c) -> std::string;
}

#endif

#ifndef SRL_STABILITY_SEARCH_HH
#define SRL_STABILITY_SEARCH_HH

#include <srl/core/rational.hh>
#include <srl/core/structure.hh>
#include <srl/stability/witness.hh>

#include <optional>
#include <vector>

namespace srl
{
    // EXACT: the search was exhaustive. HEURISTIC_NONE: nothing was found but
    // the search ran out of budget, so absence is not proven.
    enum class SearchTag
    {
        exact,
        heuristic_none
    };

    auto to_string(SearchTag t) -> const char *;

    struct SearchOptions
    {
        std::uint64_t node_budget = 4'000'000;
        std::uint64_t max_parameter_tuples = std::uint64_t{1} << 20;
        unsigned restarts = 16;
        std::uint64_t seed = 0;
    };

    struct OrderSearch
    {
        std::optional<OrderWitness> witness;
        SearchTag tag = SearchTag::exact;
    };

    struct BranchingSearch
    {
        std::optional<BranchingWitness> witness;
        SearchTag tag = SearchTag::exact;
    };

    auto find_order_witness(const Structure & m, std::size_t rel, unsigned j, unsigned tau,
            const SearchOptions & opts = {}) -> OrderSearch;
    auto find_branching_witness(const Structure & m, std::size_t rel, unsigned j, unsigned tauhat,
            const SearchOptions & opts = {}) -> BranchingSearch;

    // Any relation and isolated position, j ranging over every position.
    auto has_branching(const Structure & m, unsigned tauhat, const SearchOptions & opts = {}) -> BranchingSearch;
    auto has_order(const Structure & m, unsigned tau, const SearchOptions & opts = {}) -> OrderSearch;

    enum class BoundDirection
    {
        order_to_branching,
        branching_to_order
    };

    // order_to_branching, value tau: value = 2^(tau+2) - 2, and the structure
    // is non-2^value-branching. branching_to_order, value tauhat:
    // value = 2^(tauhat+1), non-2^value-order. power is 2^value when that
    // is representable in reasonable space.
    struct BoundPair
    {
        BigInt value;
        std::optional<BigInt> power;
    };

    auto order_branching_bounds(BoundDirection dir, unsigned value) -> BoundPair;

    struct TraceCount
    {
        std::uint64_t count = 0;
        std::optional<unsigned> tau;      // smallest tau with no order witness (EXACT)
        std::optional<BigInt> bound;      // |A|^tau
        bool within_bound = true;
    };

    // Distinct traces {a in A : phi(a; b)} over all parameter tuples b.
    auto definable_trace_count(const Structure & m, std::size_t rel, unsigned j, const ElementSet & a,
            const SearchOptions & opts = {}) -> TraceCount;
}

#endif

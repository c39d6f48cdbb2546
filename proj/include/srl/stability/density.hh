#ifndef SRL_STABILITY_DENSITY_HH
#define SRL_STABILITY_DENSITY_HH

#include <srl/core/rational.hh>
#include <srl/core/structure.hh>
#include <srl/stability/search.hh>

#include <optional>
#include <vector>

namespace srl
{
    struct Density
    {
        Rational value;
        BigInt embeddings;
        bool oversized = false;   // |F| > |M|, value is 0 by convention
    };

    // Number of injective maps F -> M preserving every relation and its
    // negation, by plain backtracking.
    auto count_induced_embeddings(const Structure & f, const Structure & m) -> BigInt;

    // Same count, grouping the elements of M into twin classes. Fast when
    // M has few classes (blow-ups); falls back to backtracking otherwise.
    auto count_induced_embeddings_fast(const Structure & f, const Structure & m) -> BigInt;

    // embeddings / (n)_k
    auto t_ind(const Structure & f, const Structure & m) -> Density;

    struct CatalogEntry
    {
        Structure structure;
        std::size_t relation;
        unsigned position;
    };

    struct CatalogOptions
    {
        std::uint64_t table_budget = std::uint64_t{1} << 22;
        SearchOptions search;
    };

    // 2^tauhat times the largest arity: minimal branching structures are no
    // larger than this.
    auto minimal_branching_size_bound(const Signature & sig, unsigned tauhat) -> BigInt;

    // Isomorphism-class representatives of size <= size_cap that have the
    // tauhat-branching property for some (E, j) while no one-point deletion
    // has it for that (E, j). Throws if the enumeration exceeds the budget.
    auto minimal_branching_catalog(const Signature & sig, unsigned tauhat, unsigned size_cap,
            const CatalogOptions & opts = {}) -> std::vector<CatalogEntry>;

    struct DeltaBranching
    {
        bool holds = false;
        std::optional<std::size_t> best;   // index into the catalog
        Rational best_density;
    };

    auto has_delta_branching(const Structure & m, const Rational & delta,
            const std::vector<CatalogEntry> & catalog) -> DeltaBranching;
}

#endif

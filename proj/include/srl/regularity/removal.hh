#ifndef SRL_REGULARITY_REMOVAL_HH
#define SRL_REGULARITY_REMOVAL_HH

#include <srl/core/rational.hh>
#include <srl/core/structure.hh>
#include <srl/regularity/pipeline.hh>

#include <optional>
#include <vector>

namespace srl
{
    // One induced embedding of some forbidden structure, found up to swaps of
    // twins in M.
    auto find_induced_embedding(const Structure & f, const Structure & m) -> std::optional<std::vector<Element>>;

    struct Flip
    {
        std::size_t relation = 0;
        Tuple tuple;
    };

    struct RemovalResult
    {
        Structure cleaned;
        std::vector<std::uint64_t> edits;   // per relation
        std::vector<Flip> flips;
        bool exact = false;                 // minimum number of edits proven
        std::uint64_t nodes = 0;            // exact search work spent
    };

    class RemovalError : public Error
    {
        public:
            RemovalError(const std::string & what, Rational residual);
            Rational residual;              // largest t_ind over the forbidden list
    };

    struct RemovalOptions
    {
        // exact search work, one unit per forbidden structure scanned at a node
        std::uint64_t budget = 200000;
        unsigned max_depth = 6;             // deepest exact search
        unsigned max_edits = 64;            // greedy limit
    };

    // Flips as few tuples as it can so that no forbidden structure embeds.
    // Iterative deepening over the tuples of the first remaining embedding is
    // exact; once the budget runs out it switches to a greedy search that
    // flips whichever nearby tuple lowers the embedding count the most.
    auto remove_embeddings(const Structure & m, const std::vector<Structure> & forbidden,
            const RemovalOptions & opts = {}) -> RemovalResult;

    struct AlmostStableOptions
    {
        RegularizeOptions regularize;
        RemovalOptions removal;
        // catalog size cap; the size bound for tauhat when unset
        std::optional<unsigned> catalog_cap;
    };

    // Removes the minimal branching catalog for tauhat, then runs the
    // opportunistic pipeline at eps / 2 on the cleaned structure.
    auto almost_stable_regularize(const Structure & m, const Fraction & eps, unsigned tauhat, std::uint64_t seed,
            const AlmostStableOptions & opts = {}) -> RegularityReport;
}

#endif

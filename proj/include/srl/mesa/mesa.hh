#ifndef SRL_MESA_MESA_HH
#define SRL_MESA_MESA_HH

#include <srl/core/partition.hh>
#include <srl/core/rational.hh>
#include <srl/core/structure.hh>
#include <srl/polling/goodness.hh>
#include <srl/polling/polling.hh>

#include <optional>
#include <string>
#include <vector>

namespace srl
{
    // Geometric size schedule m_0 > m_1 > ... > m_g with m_i = m_top * r^(g-i)
    // and r = floor(1/eps).
    struct Staircase
    {
        std::vector<std::uint64_t> m;
        std::uint64_t r = 0;

        auto height() const -> unsigned { return static_cast<unsigned>(m.size()) - 1; }
        auto contains(std::uint64_t size) const -> bool;
        // the tail m_i, ..., m_g
        auto suffix(unsigned i) const -> Staircase;
    };

    auto make_staircase(const Fraction & eps, std::uint64_t m_top, unsigned g) -> Staircase;

    // A rock over the set `a`: relation Q with the tested element at
    // `position`; b[p] is the parameter set at every other position (b[position]
    // stays empty). beta[t-1] is the position polled at step t, so the polling
    // order is <beta(arity-1), ..., beta(1)> and beta(1) is outermost.
    struct Rock
    {
        ElementSet a;
        std::size_t relation = 0;
        unsigned position = 0;
        std::vector<ElementSet> b;
        std::vector<unsigned> beta;

        auto order() const -> std::vector<unsigned>;
        auto args_with(Element x) const -> std::vector<PollArg>;
        auto eval(const Structure & m, Element x, const Fraction & eps) const -> Truth;
    };

    struct RockSplit
    {
        Rock rock;
        ElementSet bot;
        ElementSet top;
    };

    // Looks for a rock over `a` with at least m_next elements of `a` on each
    // side, using the contexts the engine enumerates. Only B-sets from the
    // engine's pool (good at the required levels) and singletons are tried.
    auto find_rock(GoodnessEngine & engine, const ElementSet & a, std::uint64_t m_next) -> std::optional<RockSplit>;
    auto find_rock(const Structure & m, const ElementSet & a, const Fraction & eps, std::uint64_t m_next,
            const GoodSetFamily & family) -> std::optional<RockSplit>;

    // Tree of rocks. sets[node_index(d, v)] is the set at node v of depth d for
    // d <= height; rocks are present for d < height. Rock i was found with the
    // goodness pool family ∪ pool[0 .. rock_pool[i]).
    struct Mesa
    {
        Fraction eps;
        Staircase stairs;
        std::vector<std::uint64_t> sizes;     // admissible set sizes
        unsigned height = 0;
        std::vector<ElementSet> sets;
        std::vector<Rock> rocks;
        GoodSetFamily family;
        std::vector<ElementSet> pool;
        std::vector<std::size_t> rock_pool;
        bool substructure = false;            // skips the size-ratio check

        auto set(unsigned depth, std::uint64_t bits) const -> const ElementSet &;
        auto rock(unsigned depth, std::uint64_t bits) const -> const Rock &;
    };

    struct CapCertificate
    {
        unsigned depth = 0;
        std::uint64_t bits = 0;
        ElementSet set;
        std::uint64_t m_next = 0;
        GoodnessCertificate excellence;
    };

    struct MesaGrowth
    {
        Mesa mesa;
        std::optional<CapCertificate> cap;
        std::string diagnostic;
    };

    // Breadth-first growth from the first m_0 elements of `a`. A node whose set
    // is excellent relative to the current pool is a cap and ends the growth.
    auto grow_mesa(const Structure & m, const ElementSet & a, const Fraction & eps, const Staircase & stairs,
            const GoodSetFamily & family) -> MesaGrowth;

    // Rechecks every node from scratch; returns the violations found.
    auto validate_mesa(const Structure & m, const Mesa & mesa) -> std::vector<std::string>;

    struct ExtractOptions
    {
        unsigned pivots = 8;
    };

    // Roots the mesa at the m_0 elements closest to a pivot (Hamming distance
    // of relation profiles) and returns the cap set; several pivots are tried.
    auto extract_excellent(const Structure & m, const ElementSet & a, const Fraction & eps, const Staircase & stairs,
            const GoodSetFamily & family, const ExtractOptions & opts = {}) -> MesaGrowth;

    struct ExcellentPartition
    {
        ElementSet covered;
        Partition partition;
        ElementSet leftover;
        std::vector<MesaGrowth> growths;
    };

    struct PartitionOptions
    {
        ExtractOptions extract;
        // keep peeling with the shorter staircases m_1.., m_g once the
        // remainder drops below m_0, leaving fewer than m_g elements over
        bool descend = false;
    };

    // Greedy peeling of excellent sets. Blocks found so far join the goodness
    // pool for later extractions.
    auto excellent_partition(const Structure & m, const Fraction & eps, const Staircase & stairs,
            const GoodSetFamily & family, const PartitionOptions & opts = {}) -> ExcellentPartition;

    auto format_rock(const Structure & m, const Rock & r) -> std::string;
    auto dump_mesa(const Structure & m, const Mesa & mesa) -> std::string;
}

#endif

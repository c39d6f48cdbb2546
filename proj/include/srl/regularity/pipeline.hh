#ifndef SRL_REGULARITY_PIPELINE_HH
#define SRL_REGULARITY_PIPELINE_HH

#include <srl/core/partition.hh>
#include <srl/core/rational.hh>
#include <srl/core/structure.hh>
#include <srl/polling/goodness.hh>
#include <srl/polling/polling.hh>
#include <srl/regularity/params.hh>

#include <optional>
#include <string>
#include <vector>

namespace srl
{
    enum class Mode
    {
        guaranteed,
        opportunistic
    };

    auto to_string(Mode m) -> const char *;
    auto parse_mode(const std::string & s) -> Mode;

    // Raised when a guaranteed run is requested but its hypotheses fail.
    class PreconditionError : public Error
    {
        public:
            PreconditionError(const std::string & what, std::vector<std::string> failing, std::optional<BigInt> k_eps);
            std::vector<std::string> failing;
            std::optional<BigInt> k_eps;
    };

    struct RefineStats
    {
        unsigned attempts = 0;
        std::vector<unsigned> failing_parts;   // per attempt
        unsigned swaps = 0;
        bool fallback = false;
    };

    class RefineError : public Error
    {
        public:
            RefineError(const std::string & what, RefineStats stats);
            RefineStats stats;
    };

    struct RefineOptions
    {
        unsigned attempts = 200;
        unsigned swap_budget = 400;
        std::uint64_t seed = 0;
    };

    struct Refinement
    {
        std::vector<ElementSet> parts;
        RefineStats stats;
    };

    // Random equitable r-partitions of A until every part is
    // (eps + zeta)-excellent relative to family.pool plus the parts themselves.
    // Falls back to greedy swaps between failing and passing parts.
    auto equitable_refine(const Structure & m, const ElementSet & a, std::uint64_t r, const Fraction & eps,
            const Fraction & zeta, const GoodSetFamily & family, const RefineOptions & opts = {}) -> Refinement;

    struct EquitableExcellent
    {
        ElementSet covered;
        std::vector<ElementSet> parts;      // all of size m
        ElementSet leftover;
        std::vector<std::string> notes;
    };

    // Peels excellent sets along the staircase m r^g, ..., m, then refines
    // every block into parts of size m.
    auto equitable_excellent_partition(const Structure & m, const Fraction & eps, const Fraction & zeta,
            std::uint64_t part_size, unsigned g, const GoodSetFamily & family, const RefineOptions & opts = {},
            bool descend = true) -> EquitableExcellent;

    struct CellDefect
    {
        std::size_t relation = 0;
        std::vector<int> blocks;
        std::uint64_t defect = 0;
        std::uint64_t size = 0;            // product of the block sizes
    };

    struct DefectTable
    {
        std::vector<CellDefect> cells;

        // cells with defect > arity * eps * size
        auto violations(const Signature & sig, const Fraction & eps) const -> std::vector<CellDefect>;
        auto total(std::size_t rel) const -> std::uint64_t;
    };

    auto compute_defects(const Structure & m, const Structure & n, const Partition & p) -> DefectTable;

    // Polled value of every block tuple; polling order puts position 0
    // innermost. Throws naming the first INDET cell.
    struct CellValues
    {
        std::size_t blocks = 0;
        std::vector<std::vector<bool>> value;   // per relation, indexed by block tuple code
    };

    class IndeterminateCell : public Error
    {
        public:
            IndeterminateCell(const std::string & what, std::size_t relation, std::vector<int> blocks);
            std::size_t relation;
            std::vector<int> blocks;
    };

    auto poll_cells(const Structure & m, const std::vector<ElementSet> & cores, const Fraction & eps) -> CellValues;

    // Structure on m's universe that is constant on every cell of p, with the
    // given block-tuple values.
    auto apply_cells(const Structure & m, const Partition & p, const CellValues & values) -> Structure;

    struct Modification
    {
        Structure modified;
        DefectTable defects;
    };

    auto indivisible_modification(const Structure & m, const Partition & p, const Fraction & eps) -> Modification;

    // Adds the leftover elements round-robin to the blocks in index order.
    auto extend_round_robin(std::uint64_t n, const std::vector<ElementSet> & cores, const ElementSet & leftover) -> Partition;

    struct BlockCertificate
    {
        std::size_t block = 0;
        ElementSet core;
        bool excellent = false;
    };

    struct RegularityReport
    {
        Mode mode = Mode::opportunistic;
        Params params;
        std::uint64_t seed = 0;
        Fraction eps_cert;                 // epsilon the cores were polled at
        FamilyMode family = FamilyMode::family;
        Partition partition;
        std::vector<ElementSet> cores;
        Structure modified;
        Structure quotient;
        DefectTable defects;
        std::vector<BlockCertificate> certificates;
        std::vector<std::string> notes;

        // set by the almost-stable variant: defects and cells refer to the
        // cleaned structure, the global bound to the original one
        bool almost_stable = false;
        std::optional<Structure> cleaned;
        std::vector<std::uint64_t> removal_edits;
        Fraction global_eps;
        unsigned catalog_cap = 0;           // size cap of the removed catalog
    };

    struct RegularizeOptions
    {
        unsigned tauhat = 2;
        RefineOptions refine;
        unsigned pivots = 8;
        // largest number of candidate part sizes tried before falling back
        // to singletons
        unsigned max_candidates = 64;
    };

    auto regularize(const Structure & m, const Fraction & eps, Mode mode, std::uint64_t seed,
            const RegularizeOptions & opts = {}) -> RegularityReport;

    // Per-cell bound and partition-size bound of a guaranteed report; the
    // returned list is empty when both hold.
    auto guaranteed_bound_violations(const RegularityReport & r) -> std::vector<std::string>;
}

#endif

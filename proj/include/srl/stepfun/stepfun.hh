#ifndef SRL_STEPFUN_STEPFUN_HH
#define SRL_STEPFUN_STEPFUN_HH

#include <srl/core/partition.hh>
#include <srl/core/rational.hh>
#include <srl/core/structure.hh>
#include <srl/stability/density.hh>

#include <string>
#include <vector>

namespace srl
{
    // A structure on [0,1] that is constant on the grid cells [k/n, (k+1)/n)
    // (the last cell closed). Cell k plays the role of element k of `cells`,
    // and the measure of a relation is |tuples| / n^arity.
    struct StepStructure
    {
        Structure cells;

        auto grid() const -> std::uint64_t { return cells.size(); }
        auto signature() const -> const Signature & { return cells.signature(); }
        auto measure(std::size_t rel) const -> Rational;

        auto operator== (const StepStructure & o) const -> bool { return cells == o.cells; }
    };

    auto borel_blowup(const Structure & n) -> StepStructure;

    // L1 distance summed over relations, exact. Both structures are compared on
    // the common refinement of their grids.
    auto d1(const StepStructure & s, const StepStructure & t) -> Rational;

    // Largest p dividing the grid such that S is constant on runs of p
    // consecutive cells in every coordinate, collapsed.
    auto canonicalize(const StepStructure & s) -> StepStructure;

    struct GridApproximation
    {
        Structure structure;
        Rational achieved_d1;
    };

    // Majority rounding on the n_target grid; a cell exactly half full rounds
    // to absent.
    auto grid_approximate(const StepStructure & s, std::uint64_t n_target) -> GridApproximation;

    // Measure of the set of points (x_0, ..., x_{k-1}) in [0,1]^k whose
    // induced structure equals F. Coincident points have measure zero, so
    // this is the number of cell assignments c: F -> grid with
    // S(c(t)) = F(t) for every tuple t over F, divided by grid^k.
    auto t_ind_step(const Structure & f, const StepStructure & s) -> Rational;

    struct EquitableLift
    {
        StepStructure lifted;
        std::vector<ElementSet> cell_blocks;   // cells of the lifted grid per block
        Rational achieved_d1;
        Rational bound;                        // sum over relations of (|P| - 1) / |M|
        bool within_bound = true;
    };

    // Keeps min-size many elements of every block in place and hands the
    // remaining elements' intervals out as equal-measure slivers, preferring
    // the block the element came from. The lifted grid has |M| * |P| cells.
    auto lift_equitable(const Structure & m, const Partition & p) -> EquitableLift;

    struct DeltaBranchingStep
    {
        bool holds = false;
        std::optional<std::size_t> best;
        Rational best_density;
    };

    auto has_delta_branching_step(const StepStructure & s, const Rational & delta,
            const std::vector<CatalogEntry> & catalog) -> DeltaBranchingStep;
    auto has_delta_branching_step(const StepStructure & s, const Rational & delta, unsigned tauhat) -> DeltaBranchingStep;

    auto parse_step(const std::string & text) -> StepStructure;
    auto serialize_step(const StepStructure & s) -> std::string;
}

#endif

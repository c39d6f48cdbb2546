#ifndef SRL_CORE_STRUCTURE_OPS_HH
#define SRL_CORE_STRUCTURE_OPS_HH

#include <srl/core/partition.hh>
#include <srl/core/rational.hh>
#include <srl/core/structure.hh>

#include <optional>
#include <vector>

namespace srl
{
    struct EditDistance
    {
        std::vector<std::uint64_t> counts;   // per relation, |E^M sym-diff E^N|
        Rational normalized;                 // sum over E of count / n^arity
    };

    auto edit_distance(const Structure & m, const Structure & n) -> EditDistance;

    struct IndivisibilityWitness
    {
        std::size_t relation;
        std::vector<int> blocks;
        Tuple first, second;     // same cell, different truth values
    };

    struct IndivisibilityVerdict
    {
        bool indivisible = true;
        std::optional<IndivisibilityWitness> witness;
    };

    auto is_indivisible(const Structure & m, const Partition & p) -> IndivisibilityVerdict;

    class IndivisibilityError : public Error
    {
        public:
            IndivisibilityError(IndivisibilityWitness w);
            IndivisibilityWitness witness;
    };

    // Quotient element i is block i of p.
    auto quotient(const Structure & m, const Partition & p) -> Structure;

    // Fiber of element i occupies a consecutive id range, in element order.
    auto blow_up(const Structure & n, const std::vector<std::uint64_t> & sizes) -> Structure;
    auto blow_up(const Structure & n, std::uint64_t p) -> Structure;

    auto check_full_homomorphism(const Structure & m, const Structure & n, const std::vector<Element> & map) -> bool;

    // Induced substructure on the listed elements, renumbered in list order.
    auto induced_substructure(const Structure & m, const std::vector<Element> & elements) -> Structure;

    // Classes of elements x ~ y such that swapping x and y is an automorphism.
    auto twin_classes(const Structure & m) -> std::vector<ElementSet>;
    auto twin_reduction(const Structure & m) -> Structure;

    auto complement(const Structure & m) -> Structure;
}

#endif

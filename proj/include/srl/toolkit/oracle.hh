#ifndef SRL_TOOLKIT_ORACLE_HH
#define SRL_TOOLKIT_ORACLE_HH

#include <srl/core/rational.hh>
#include <srl/core/structure.hh>

#include <vector>

namespace srl
{
    inline constexpr std::uint64_t oracle_limit = 14;

    // Exhaustive excellence check over all subsets. Written without the
    // polling module so it can serve as ground truth.
    auto oracle_excellent(const Structure & m, const ElementSet & a, const Fraction & eps) -> bool;

    // goodness level of every nonempty subset (bit mask index) for one
    // relation: the largest ell with the subset (eps, ell)-good
    auto oracle_good_levels(const Structure & m, std::size_t rel, const Fraction & eps) -> std::vector<unsigned>;
}

#endif

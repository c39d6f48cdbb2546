#ifndef SRL_MESA_YELLOW_HH
#define SRL_MESA_YELLOW_HH

#include <srl/mesa/mesa.hh>
#include <srl/stability/witness.hh>

namespace srl
{
    // Turns a mesa whose rocks share relation and position into a branching
    // witness of the mesa's height: leaves are the least elements of the
    // pre-caps, and each node takes the first parameter tuple from its rock's
    // B-sets that agrees with every leaf below it.
    auto mesa_to_branching(const Structure & m, const Mesa & mesa) -> BranchingWitness;
}

#endif

#ifndef SRL_TOOLKIT_GENERATORS_HH
#define SRL_TOOLKIT_GENERATORS_HH

#include <srl/core/structure.hh>

#include <cstdint>

namespace srl
{
    // Equitable blow-up of base with every cell flipped independently with
    // probability flip_p. Draws one uniform per cell, relations in signature
    // order and tuples lexicographically.
    auto gen_blowup_noise(const Structure & base, std::uint64_t part_size, double flip_p, std::uint64_t seed) -> Structure;

    // Elements a_i = i and b_j = n + j; E(a_i, b_j) iff i < j.
    auto gen_half_graph(std::uint64_t n) -> Structure;

    auto gen_random(const Signature & sig, std::uint64_t n, double density, std::uint64_t seed) -> Structure;

    // Binary structure with a tauhat-branching witness for E(x; y): leaves
    // a_eta (eta in {0,1}^tauhat, in binary order) come first, then nodes
    // b_nu in breadth-first order; E(a_eta, b_nu) iff nu^1 is a prefix of eta.
    auto gen_branch_tree(unsigned tauhat) -> Structure;
}

#endif

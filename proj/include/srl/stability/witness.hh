#ifndef SRL_STABILITY_WITNESS_HH
#define SRL_STABILITY_WITNESS_HH

#include <srl/core/structure.hh>

#include <string>
#include <vector>

namespace srl
{
    // Witnesses are for E with position j isolated: phi(x; y) is E with x at
    // position j and y filling the other positions in increasing order.
    // Parameter tuples therefore have arity - 1 entries.

    struct OrderWitness
    {
        std::size_t relation = 0;
        unsigned position = 0;
        std::vector<Element> a;     // a_i, i < tau
        std::vector<Tuple> b;       // b_j, j < tau
    };

    // Leaves are indexed by eta in {0,1}^tauhat read most significant bit
    // first. Node nu of length d with bits v sits at index 2^d - 1 + v.
    struct BranchingWitness
    {
        std::size_t relation = 0;
        unsigned position = 0;
        unsigned height = 0;
        std::vector<Element> leaves;
        std::vector<Tuple> nodes;
    };

    auto node_index(unsigned depth, std::uint64_t bits) -> std::size_t;

    // Full argument tuple for phi(a; b).
    auto splice(Element a, const Tuple & b, unsigned position) -> Tuple;

    // Definitional rechecks. They return an empty string on success and a
    // description of the first violated constraint otherwise.
    auto check_order_witness(const Structure & m, const OrderWitness & w) -> std::string;
    auto check_branching_witness(const Structure & m, const BranchingWitness & w) -> std::string;

    auto format_witness(const Structure & m, const OrderWitness & w) -> std::string;
    auto format_witness(const Structure & m, const BranchingWitness & w) -> std::string;
}

#endif

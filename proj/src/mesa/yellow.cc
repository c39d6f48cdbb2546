#include <srl/mesa/yellow.hh>

using std::size_t;
using std::uint64_t;
using std::vector;

namespace srl
{
    auto mesa_to_branching(const Structure & m, const Mesa & mesa) -> BranchingWitness
    {
        unsigned k = mesa.height;
        if (k < 1)
            throw Error("mesa_to_branching: height at least 1 required");
        if (k > 30)
            throw Error("mesa_to_branching: height too large");
        const Rock & first = mesa.rocks.at(0);
        for (auto & r : mesa.rocks)
            if (r.relation != first.relation || r.position != first.position)
                throw Error("mesa_to_branching: rocks do not share relation and position");
        unsigned arity = m.arity(first.relation);
        unsigned pos = first.position;

        // 2^k (arity - 1) eps < 1
        BigInt lhs = (BigInt(1) << k) * (arity - 1) * mesa.eps.num;
        if (lhs >= mesa.eps.den)
            throw Error("mesa_to_branching: 2^k * (arity - 1) * eps must be below 1");

        BranchingWitness w;
        w.relation = first.relation;
        w.position = pos;
        w.height = k;
        uint64_t leaves = uint64_t{1} << k;
        for (uint64_t eta = 0 ; eta < leaves ; ++eta) {
            const auto & s = mesa.set(k, eta);
            if (s.empty())
                throw Error("mesa_to_branching: empty pre-cap");
            w.leaves.push_back(s.front());
        }

        w.nodes.resize(node_index(k, 0));
        for (unsigned d = 0 ; d < k ; ++d)
            for (uint64_t v = 0 ; v < (uint64_t{1} << d) ; ++v) {
                const Rock & r = mesa.rock(d, v);
                vector<unsigned> others;
                for (unsigned p = 0 ; p < arity ; ++p)
                    if (p != pos)
                        others.push_back(p);

                vector<size_t> idx(others.size(), 0);
                bool found = false;
                Tuple b(others.size());
                while (! found) {
                    for (size_t i = 0 ; i < others.size() ; ++i)
                        b[i] = r.b[others[i]][idx[i]];
                    bool ok = true;
                    unsigned shift = k - d;
                    for (uint64_t eta = v << shift ; eta < (v + 1) << shift && ok ; ++eta) {
                        bool bit = (eta >> (shift - 1)) & 1;
                        ok = m.holds(w.relation, splice(w.leaves[eta], b, pos)) == bit;
                    }
                    if (ok) {
                        found = true;
                        break;
                    }
                    size_t i = others.size();
                    bool more = false;
                    while (i-- > 0) {
                        if (++idx[i] < r.b[others[i]].size()) {
                            more = true;
                            break;
                        }
                        idx[i] = 0;
                    }
                    if (! more)
                        break;
                }
                if (! found)
                    throw Error("mesa_to_branching: internal error, every parameter tuple at node ("
                            + std::to_string(d) + ", " + std::to_string(v) + ") meets a dissent set");
                w.nodes[node_index(d, v)] = b;
            }

        auto problem = check_branching_witness(m, w);
        if (! problem.empty())
            throw Error("mesa_to_branching: internal error, witness fails its recheck: " + problem);
        return w;
    }
}

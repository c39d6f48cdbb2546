#include <srl/toolkit/generators.hh>
#include <srl/core/rng.hh>
#include <srl/core/structure_ops.hh>

using std::uint64_t;

namespace srl
{
    auto gen_blowup_noise(const Structure & base, uint64_t part_size, double flip_p, uint64_t seed) -> Structure
    {
        if (part_size < 1)
            throw Error("part size must be at least 1");
        if (! (flip_p >= 0.0 && flip_p <= 1.0))
            throw Error("flip probability must lie in [0, 1]");
        Structure m = blow_up(base, part_size);
        Rng rng = Rng(seed).substream("blowup-noise");
        for (std::size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
            Tuple t(m.arity(rel), 0);
            do {
                if (rng.bernoulli(flip_p))
                    m.flip(rel, t);
            } while (next_tuple(t, m.size()));
        }
        return m;
    }

    auto gen_half_graph(uint64_t n) -> Structure
    {
        if (n < 1)
            throw Error("half-graph needs n >= 1");
        Structure m(binary_signature(), 2 * n);
        for (uint64_t i = 0 ; i < n ; ++i)
            for (uint64_t j = i + 1 ; j < n ; ++j)
                m.set(0, {Element(i), Element(n + j)});
        return m;
    }

    auto gen_random(const Signature & sig, uint64_t n, double density, uint64_t seed) -> Structure
    {
        if (! (density >= 0.0 && density <= 1.0))
            throw Error("density must lie in [0, 1]");
        Structure m(sig, n);
        if (n == 0)
            return m;
        Rng rng = Rng(seed).substream("random-structure");
        for (std::size_t rel = 0 ; rel < sig.size() ; ++rel) {
            Tuple t(sig.arity(rel), 0);
            do {
                if (rng.bernoulli(density))
                    m.set(rel, t);
            } while (next_tuple(t, n));
        }
        return m;
    }

    auto gen_branch_tree(unsigned tauhat) -> Structure
    {
        if (tauhat < 1 || tauhat > 20)
            throw Error("branch tree height must lie in [1, 20]");
        uint64_t leaves = uint64_t{1} << tauhat;
        Structure m(binary_signature(), 2 * leaves - 1);
        // node nu at depth d with bits v (most significant first) has id
        // leaves + (2^d - 1) + v
        for (unsigned d = 0 ; d < tauhat ; ++d)
            for (uint64_t v = 0 ; v < (uint64_t{1} << d) ; ++v) {
                Element node = leaves + (uint64_t{1} << d) - 1 + v;
                for (uint64_t eta = 0 ; eta < leaves ; ++eta) {
                    uint64_t prefix = eta >> (tauhat - d);
                    unsigned bit = (eta >> (tauhat - d - 1)) & 1;
                    if (prefix == v && bit == 1)
                        m.set(0, {Element(eta), node});
                }
            }
        return m;
    }
}

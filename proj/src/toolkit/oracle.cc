#include <srl/toolkit/oracle.hh>

#include <algorithm>
#include <numeric>

using std::uint64_t;
using std::vector;

namespace srl
{
    namespace
    {
        // +1 for a (1 - eps)-majority of true, -1 for false, 0 otherwise
        auto majority(uint64_t yes, uint64_t no, uint64_t size, const Fraction & eps) -> int
        {
            auto over = [&] (uint64_t c) {
                return BigInt(c) * eps.den + BigInt(size) * eps.num > BigInt(size) * eps.den;
            };
            if (over(yes))
                return 1;
            if (over(no))
                return -1;
            return 0;
        }

        struct Oracle
        {
            const Structure & m;
            std::size_t rel;
            Fraction eps;
            unsigned k;
            vector<unsigned> perm;
            vector<uint64_t> masks;   // masks[i] is the set at perm[i]
            vector<Element> t;

            // value of the poll over perm[d..ell-1], perm[d] outermost
            auto value(unsigned d, unsigned ell) -> int
            {
                if (d == ell)
                    return m.holds(rel, t) ? 1 : -1;
                uint64_t yes = 0, no = 0, size = 0;
                for (Element e = 0 ; e < m.size() ; ++e) {
                    if (! ((masks[d] >> e) & 1))
                        continue;
                    ++size;
                    t[perm[d]] = e;
                    int v = value(d + 1, ell);
                    yes += v > 0;
                    no += v < 0;
                }
                return majority(yes, no, size, eps);
            }
        };
    }

    auto oracle_good_levels(const Structure & m, std::size_t rel, const Fraction & eps) -> vector<unsigned>
    {
        uint64_t n = m.size();
        if (n > oracle_limit)
            throw Error("oracle needs n <= 14");
        if (eps.num <= 0 || eps.num * 4 >= eps.den)
            throw Error("oracle epsilon must lie in (0, 1/4)");
        unsigned k = m.arity(rel);
        uint64_t subsets = uint64_t{1} << n;
        vector<unsigned> level(subsets, 0);

        Oracle o{m, rel, eps, k, vector<unsigned>(k), vector<uint64_t>(k, 0), vector<Element>(k, 0)};
        for (unsigned ell = 1 ; ell <= k ; ++ell) {
            vector<unsigned> next = level;
            for (uint64_t a = 1 ; a < subsets ; ++a) {
                if (level[a] != ell - 1)
                    continue;
                bool good = true;
                std::iota(o.perm.begin(), o.perm.end(), 0);
                do {
                    o.masks[0] = a;
                    // odometer over inner sets (masks 1..ell-1) and elements
                    // at perm[ell..k-1]
                    vector<uint64_t> inner(ell, 1);
                    vector<Element> rest(k - ell, 0);
                    auto inner_ok = [&] () {
                        for (unsigned i = 1 ; i < ell ; ++i)
                            if (level[inner[i]] < ell - i)
                                return false;
                        return true;
                    };
                    while (good) {
                        if (inner_ok()) {
                            for (unsigned i = 1 ; i < ell ; ++i)
                                o.masks[i] = inner[i];
                            for (unsigned i = ell ; i < k ; ++i)
                                o.t[o.perm[i]] = rest[i - ell];
                            if (o.value(0, ell) == 0)
                                good = false;
                        }
                        unsigned i = 0;
                        for ( ; i < k - ell ; ++i) {
                            if (++rest[i] < n)
                                break;
                            rest[i] = 0;
                        }
                        if (i < k - ell)
                            continue;
                        unsigned j = 1;
                        for ( ; j < ell ; ++j) {
                            if (++inner[j] < subsets)
                                break;
                            inner[j] = 1;
                        }
                        if (j == ell)
                            break;
                    }
                } while (good && std::next_permutation(o.perm.begin(), o.perm.end()));
                if (good)
                    next[a] = ell;
            }
            level = next;
        }
        return level;
    }

    auto oracle_excellent(const Structure & m, const ElementSet & a, const Fraction & eps) -> bool
    {
        if (a.empty())
            throw Error("oracle: empty set");
        if (m.size() > oracle_limit)
            throw Error("oracle needs n <= 14");
        uint64_t mask = 0;
        for (auto e : a) {
            if (e >= m.size())
                throw Error("oracle: element out of range");
            mask |= uint64_t{1} << e;
        }
        for (std::size_t rel = 0 ; rel < m.signature().size() ; ++rel)
            if (oracle_good_levels(m, rel, eps)[mask] < m.arity(rel))
                return false;
        return true;
    }
}

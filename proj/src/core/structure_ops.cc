#include <srl/core/structure_ops.hh>

#include <algorithm>
#include <map>

using std::uint64_t;
using std::vector;

namespace srl
{
    namespace
    {
        void require_same_shape(const Structure & m, const Structure & n)
        {
            if (m.signature() != n.signature())
                throw Error("signature mismatch");
            if (m.size() != n.size())
                throw Error("universe size mismatch");
        }
    }

    auto edit_distance(const Structure & m, const Structure & n) -> EditDistance
    {
        require_same_shape(m, n);
        EditDistance result;
        result.normalized = 0;
        for (std::size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
            auto a = m.table(rel).codes(), b = n.table(rel).codes();
            vector<uint64_t> diff;
            std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
            result.counts.push_back(diff.size());
            if (m.cells(rel) > 0)
                result.normalized += Rational(diff.size(), m.cells(rel));
        }
        return result;
    }

    IndivisibilityError::IndivisibilityError(IndivisibilityWitness w) :
        Error("partition is not indivisible for relation index " + std::to_string(w.relation)),
        witness(std::move(w))
    {
    }

    auto is_indivisible(const Structure & m, const Partition & p) -> IndivisibilityVerdict
    {
        if (p.universe_size() != m.size() || ! p.covers_all())
            throw Error("partition does not cover the universe");

        IndivisibilityVerdict verdict;
        uint64_t q = p.size();
        for (std::size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
            unsigned k = m.arity(rel);
            uint64_t cells = checked_power(q, k);
            // per cell: 0 unseen, 1 false, 2 true; the representative code is kept for the witness
            vector<std::uint8_t> seen(cells, 0);
            vector<uint64_t> rep(cells, 0);
            Tuple t(k, 0);
            if (m.size() == 0)
                continue;
            do {
                uint64_t cell = 0;
                for (auto e : t)
                    cell = cell * q + static_cast<uint64_t>(p.block_of(e));
                auto code = m.encode(rel, t);
                std::uint8_t v = m.table(rel).get(code) ? 2 : 1;
                if (seen[cell] == 0) {
                    seen[cell] = v;
                    rep[cell] = code;
                }
                else if (seen[cell] != v) {
                    IndivisibilityWitness w;
                    w.relation = rel;
                    for (auto e : t)
                        w.blocks.push_back(p.block_of(e));
                    w.first = m.decode(rel, rep[cell]);
                    w.second = t;
                    verdict.indivisible = false;
                    verdict.witness = std::move(w);
                    return verdict;
                }
            } while (next_tuple(t, m.size()));
        }
        return verdict;
    }

    auto quotient(const Structure & m, const Partition & p) -> Structure
    {
        auto verdict = is_indivisible(m, p);
        if (! verdict.indivisible)
            throw IndivisibilityError(*verdict.witness);

        Structure result(m.signature(), p.size());
        for (std::size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
            Tuple cell(m.arity(rel), 0), rep(m.arity(rel));
            if (p.size() == 0)
                continue;
            do {
                for (std::size_t i = 0 ; i < cell.size() ; ++i)
                    rep[i] = p.block(cell[i]).front();
                if (m.holds(rel, rep))
                    result.set(rel, cell, true);
            } while (next_tuple(cell, p.size()));
        }
        return result;
    }

    auto blow_up(const Structure & n, const vector<uint64_t> & sizes) -> Structure
    {
        if (sizes.size() != n.size())
            throw Error("blow_up needs one size per element");
        vector<Element> fiber_of;
        for (uint64_t i = 0 ; i < sizes.size() ; ++i) {
            if (sizes[i] == 0)
                throw Error("blow_up size must be positive");
            fiber_of.insert(fiber_of.end(), sizes[i], static_cast<Element>(i));
        }
        auto p = Partition::fibers(sizes);

        Structure result(n.signature(), fiber_of.size());
        for (std::size_t rel = 0 ; rel < n.signature().size() ; ++rel) {
            for (auto & base : n.tuples(rel)) {
                // all tuples in the product of the fibers
                Tuple idx(base.size(), 0), t(base.size());
                bool more = true;
                while (more) {
                    for (std::size_t i = 0 ; i < base.size() ; ++i)
                        t[i] = p.block(base[i])[idx[i]];
                    result.set(rel, t, true);
                    more = false;
                    for (std::size_t pos = base.size() ; pos-- > 0 ; ) {
                        if (idx[pos] + 1 < sizes[base[pos]]) {
                            ++idx[pos];
                            more = true;
                            break;
                        }
                        idx[pos] = 0;
                    }
                }
            }
        }
        return result;
    }

    auto blow_up(const Structure & n, uint64_t p) -> Structure
    {
        return blow_up(n, vector<uint64_t>(n.size(), p));
    }

    auto check_full_homomorphism(const Structure & m, const Structure & n, const vector<Element> & map) -> bool
    {
        if (m.signature() != n.signature() || map.size() != m.size())
            return false;
        for (auto e : map)
            if (e >= n.size())
                return false;
        for (std::size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
            Tuple t(m.arity(rel), 0), image(m.arity(rel));
            if (m.size() == 0)
                continue;
            do {
                for (std::size_t i = 0 ; i < t.size() ; ++i)
                    image[i] = map[t[i]];
                if (m.holds(rel, t) != n.holds(rel, image))
                    return false;
            } while (next_tuple(t, m.size()));
        }
        return true;
    }

    auto induced_substructure(const Structure & m, const vector<Element> & elements) -> Structure
    {
        Structure result(m.signature(), elements.size());
        for (std::size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
            Tuple t(m.arity(rel), 0), image(m.arity(rel));
            if (elements.empty())
                continue;
            do {
                for (std::size_t i = 0 ; i < t.size() ; ++i)
                    image[i] = elements[t[i]];
                if (m.holds(rel, image))
                    result.set(rel, t, true);
            } while (next_tuple(t, elements.size()));
        }
        return result;
    }

    namespace
    {
        auto swap_is_automorphism(const Structure & m, Element x, Element y) -> bool
        {
            for (std::size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
                unsigned k = m.arity(rel);
                Tuple rest(k - 1, 0), t(k), s(k);
                for (unsigned p = 0 ; p < k ; ++p) {
                    bool more = true;
                    std::fill(rest.begin(), rest.end(), 0);
                    while (more) {
                        for (Element who : {x, y}) {
                            for (unsigned i = 0, r = 0 ; i < k ; ++i)
                                t[i] = (i == p) ? who : rest[r++];
                            for (unsigned i = 0 ; i < k ; ++i)
                                s[i] = t[i] == x ? y : t[i] == y ? x : t[i];
                            if (m.holds(rel, t) != m.holds(rel, s))
                                return false;
                        }
                        more = k > 1 && next_tuple(rest, m.size());
                    }
                }
            }
            return true;
        }
    }

    auto twin_classes(const Structure & m) -> vector<ElementSet>
    {
        // cheap invariant first: occurrence counts per (relation, position)
        vector<vector<uint64_t>> profile(m.size());
        for (std::size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
            unsigned k = m.arity(rel);
            for (auto & pr : profile)
                pr.resize(pr.size() + k + 1, 0);
            std::size_t base = profile.empty() ? 0 : profile[0].size() - k - 1;
            for (auto code : m.table(rel).codes()) {
                auto t = m.decode(rel, code);
                for (unsigned p = 0 ; p < k ; ++p)
                    ++profile[t[p]][base + p];
                if (std::all_of(t.begin(), t.end(), [&] (Element e) { return e == t[0]; }))
                    ++profile[t[0]][base + k];
            }
        }

        vector<ElementSet> classes;
        std::map<vector<uint64_t>, vector<std::size_t>> by_profile;
        for (Element x = 0 ; x < m.size() ; ++x) {
            auto & candidates = by_profile[profile[x]];
            bool placed = false;
            for (auto c : candidates)
                if (swap_is_automorphism(m, classes[c].front(), x)) {
                    classes[c].push_back(x);
                    placed = true;
                    break;
                }
            if (! placed) {
                candidates.push_back(classes.size());
                classes.push_back({x});
            }
        }
        return classes;
    }

    auto twin_reduction(const Structure & m) -> Structure
    {
        vector<Element> reps;
        for (auto & c : twin_classes(m))
            reps.push_back(c.front());
        return induced_substructure(m, reps);
    }

    auto complement(const Structure & m) -> Structure
    {
        Structure result(m.signature(), m.size());
        for (std::size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
            Tuple t(m.arity(rel), 0);
            if (m.size() == 0)
                continue;
            do {
                if (! m.holds(rel, t))
                    result.set(rel, t, true);
            } while (next_tuple(t, m.size()));
        }
        return result;
    }
}

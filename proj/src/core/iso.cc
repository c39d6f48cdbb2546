#include <srl/core/iso.hh>

#include <algorithm>
#include <numeric>

using std::uint64_t;
using std::vector;

namespace srl
{
    namespace
    {
        auto element_profiles(const Structure & m) -> vector<vector<uint64_t>>
        {
            vector<vector<uint64_t>> profile(m.size());
            for (std::size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
                unsigned k = m.arity(rel);
                for (auto & p : profile)
                    p.resize(p.size() + k + 1, 0);
                std::size_t base = profile.empty() ? 0 : profile[0].size() - k - 1;
                for (auto code : m.table(rel).codes()) {
                    auto t = m.decode(rel, code);
                    for (unsigned p = 0 ; p < k ; ++p)
                        ++profile[t[p]][base + p];
                    if (std::all_of(t.begin(), t.end(), [&] (Element e) { return e == t[0]; }))
                        ++profile[t[0]][base + k];
                }
            }
            return profile;
        }

        struct IsoSearch
        {
            const Structure & m;
            const Structure & n;
            vector<vector<uint64_t>> pm, pn;
            vector<Element> map;
            vector<bool> used;

            auto consistent(Element x) -> bool
            {
                for (std::size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
                    unsigned k = m.arity(rel);
                    Tuple t(k, 0), image(k);
                    do {
                        if (std::find(t.begin(), t.end(), x) == t.end())
                            continue;
                        for (unsigned i = 0 ; i < k ; ++i)
                            image[i] = map[t[i]];
                        if (m.holds(rel, t) != n.holds(rel, image))
                            return false;
                    } while (next_tuple(t, x + 1));
                }
                return true;
            }

            auto search(Element x) -> bool
            {
                if (x == m.size())
                    return true;
                for (Element y = 0 ; y < n.size() ; ++y) {
                    if (used[y] || pm[x] != pn[y])
                        continue;
                    map[x] = y;
                    used[y] = true;
                    if (consistent(x) && search(x + 1))
                        return true;
                    used[y] = false;
                }
                return false;
            }
        };
    }

    auto find_isomorphism(const Structure & m, const Structure & n) -> std::optional<vector<Element>>
    {
        if (m.signature() != n.signature() || m.size() != n.size())
            return std::nullopt;
        for (std::size_t rel = 0 ; rel < m.signature().size() ; ++rel)
            if (m.count(rel) != n.count(rel))
                return std::nullopt;

        IsoSearch s{m, n, element_profiles(m), element_profiles(n), vector<Element>(m.size()), vector<bool>(n.size(), false)};
        auto sm = s.pm, sn = s.pn;
        std::sort(sm.begin(), sm.end());
        std::sort(sn.begin(), sn.end());
        if (sm != sn)
            return std::nullopt;
        if (s.search(0))
            return s.map;
        return std::nullopt;
    }

    auto are_isomorphic(const Structure & m, const Structure & n) -> bool
    {
        return find_isomorphism(m, n).has_value();
    }

    namespace
    {
        auto key_under(const Structure & m, const vector<Element> & perm) -> vector<std::uint8_t>
        {
            // perm maps new label -> old element
            vector<std::uint8_t> key;
            for (std::size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
                unsigned k = m.arity(rel);
                Tuple t(k, 0), old(k);
                do {
                    for (unsigned i = 0 ; i < k ; ++i)
                        old[i] = perm[t[i]];
                    key.push_back(m.holds(rel, old) ? 1 : 0);
                } while (next_tuple(t, m.size()));
            }
            return key;
        }
    }

    auto canonical_key(const Structure & m) -> vector<std::uint8_t>
    {
        if (m.size() > 8)
            throw Error("canonical_key is only for structures with at most 8 elements");
        vector<Element> perm(m.size());
        std::iota(perm.begin(), perm.end(), 0);
        vector<std::uint8_t> best;
        if (m.size() == 0)
            return best;
        bool first = true;
        do {
            auto k = key_under(m, perm);
            if (first || k > best) {
                best = std::move(k);
                first = false;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }

    auto canonical_form(const Structure & m) -> Structure
    {
        auto key = canonical_key(m);
        Structure result(m.signature(), m.size());
        std::size_t pos = 0;
        for (std::size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
            Tuple t(m.arity(rel), 0);
            if (m.size() == 0)
                continue;
            do {
                if (key[pos++])
                    result.set(rel, t, true);
            } while (next_tuple(t, m.size()));
        }
        return result;
    }
}

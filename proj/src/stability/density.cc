#include <srl/stability/density.hh>
#include <srl/core/iso.hh>
#include <srl/core/structure_ops.hh>

#include <set>

using std::size_t;
using std::uint64_t;
using std::vector;

namespace srl
{
    namespace
    {
        struct Embedder
        {
            const Structure & f;
            const Structure & m;
            // checks[i]: (relation, tuple over 0..i that mentions i)
            vector<vector<std::pair<size_t, Tuple>>> checks;
            vector<Element> image;
            vector<bool> used;
            uint64_t count = 0;

            Embedder(const Structure & f_, const Structure & m_) :
                f(f_), m(m_), checks(f_.size()), image(f_.size()), used(m_.size(), false)
            {
                for (size_t rel = 0 ; rel < f.signature().size() ; ++rel) {
                    unsigned k = f.arity(rel);
                    for (Element i = 0 ; i < f.size() ; ++i) {
                        Tuple t(k, 0);
                        do {
                            bool mentions = false;
                            for (auto e : t)
                                mentions = mentions || e == i;
                            if (mentions)
                                checks[i].emplace_back(rel, t);
                        } while (next_tuple(t, i + 1));
                    }
                }
            }

            void run(Element i)
            {
                if (i == f.size()) {
                    ++count;
                    return;
                }
                Tuple mapped;
                for (Element x = 0 ; x < m.size() ; ++x) {
                    if (used[x])
                        continue;
                    image[i] = x;
                    bool ok = true;
                    for (auto & [rel, t] : checks[i]) {
                        mapped.resize(t.size());
                        for (size_t p = 0 ; p < t.size() ; ++p)
                            mapped[p] = image[t[p]];
                        if (f.holds(rel, t) != m.holds(rel, mapped)) {
                            ok = false;
                            break;
                        }
                    }
                    if (! ok)
                        continue;
                    used[x] = true;
                    run(i + 1);
                    used[x] = false;
                }
            }
        };

        void check_signatures(const Structure & f, const Structure & m)
        {
            if (! (f.signature() == m.signature()))
                throw Error("density: signatures differ");
        }
    }

    auto count_induced_embeddings(const Structure & f, const Structure & m) -> BigInt
    {
        check_signatures(f, m);
        if (f.size() > m.size())
            return 0;
        Embedder e(f, m);
        e.run(0);
        return e.count;
    }

    auto count_induced_embeddings_fast(const Structure & f, const Structure & m) -> BigInt
    {
        check_signatures(f, m);
        unsigned k = f.size();
        if (k > m.size())
            return 0;
        if (k == 0)
            return 1;
        auto classes = twin_classes(m);
        if (binomial(classes.size() + k - 1, k) > 200000)
            return count_induced_embeddings(f, m);

        BigInt automorphisms = count_induced_embeddings(f, f);
        vector<uint64_t> f_counts(f.signature().size());
        for (size_t rel = 0 ; rel < f_counts.size() ; ++rel)
            f_counts[rel] = f.count(rel);

        BigInt total = 0;
        vector<unsigned> take(classes.size(), 0);
        // distribute k elements over the classes
        auto visit = [&] (auto & self, size_t c, unsigned left) -> void {
            if (left == 0) {
                vector<Element> elems;
                BigInt ways = 1;
                for (size_t i = 0 ; i < classes.size() ; ++i) {
                    for (unsigned t = 0 ; t < take[i] ; ++t)
                        elems.push_back(classes[i][t]);
                    if (take[i])
                        ways *= binomial(classes[i].size(), take[i]);
                }
                auto sub = induced_substructure(m, elems);
                for (size_t rel = 0 ; rel < f_counts.size() ; ++rel)
                    if (sub.count(rel) != f_counts[rel])
                        return;
                if (are_isomorphic(sub, f))
                    total += ways * automorphisms;
                return;
            }
            if (c == classes.size())
                return;
            unsigned most = std::min<uint64_t>(left, classes[c].size());
            for (unsigned t = most + 1 ; t-- > 0 ; ) {
                take[c] = t;
                self(self, c + 1, left - t);
            }
            take[c] = 0;
        };
        visit(visit, 0, k);
        return total;
    }

    auto t_ind(const Structure & f, const Structure & m) -> Density
    {
        check_signatures(f, m);
        Density d;
        if (f.size() > m.size()) {
            d.oversized = true;
            d.value = 0;
            d.embeddings = 0;
            return d;
        }
        d.embeddings = count_induced_embeddings_fast(f, m);
        d.value = Rational(d.embeddings, falling_factorial(m.size(), f.size()));
        return d;
    }

    auto minimal_branching_size_bound(const Signature & sig, unsigned tauhat) -> BigInt
    {
        return (BigInt(1) << tauhat) * sig.max_arity();
    }

    auto minimal_branching_catalog(const Signature & sig, unsigned tauhat, unsigned size_cap,
            const CatalogOptions & opts) -> vector<CatalogEntry>
    {
        vector<CatalogEntry> catalog;
        if (sig.size() == 0)
            return catalog;
        if (tauhat < 1)
            throw Error("catalog: tauhat must be at least 1");
        if (BigInt(size_cap) > minimal_branching_size_bound(sig, tauhat))
            throw Error("catalog: size cap exceeds the minimal-structure size bound");

        // budget check up front
        BigInt tables = 0;
        for (unsigned n = 1 ; n <= size_cap ; ++n) {
            uint64_t cells = 0;
            for (size_t rel = 0 ; rel < sig.size() ; ++rel)
                cells += checked_power(n, sig.arity(rel));
            if (cells > 62)
                throw Error("catalog enumeration infeasible; raise the budget explicitly or lower the size cap");
            tables += BigInt(1) << cells;
        }
        if (tables > opts.table_budget)
            throw Error("catalog enumeration needs " + tables.str() + " tables, over the budget of "
                    + std::to_string(opts.table_budget) + "; pass a larger budget explicitly");

        std::set<vector<std::uint8_t>> seen;
        for (unsigned n = 1 ; n <= size_cap ; ++n) {
            // leaves on different branches are distinct elements
            if (uint64_t{n} < (uint64_t{1} << tauhat))
                continue;
            vector<std::pair<size_t, Tuple>> cells;
            for (size_t rel = 0 ; rel < sig.size() ; ++rel) {
                Tuple t(sig.arity(rel), 0);
                do
                    cells.emplace_back(rel, t);
                while (next_tuple(t, n));
            }
            for (uint64_t bits = 0 ; bits < (uint64_t{1} << cells.size()) ; ++bits) {
                Structure s(sig, n);
                for (size_t c = 0 ; c < cells.size() ; ++c)
                    if ((bits >> c) & 1)
                        s.set(cells[c].first, cells[c].second);
                for (size_t rel = 0 ; rel < sig.size() ; ++rel) {
                    bool member = false;
                    unsigned pos = 0;
                    for (unsigned j = 0 ; j < sig.arity(rel) && ! member ; ++j) {
                        if (! find_branching_witness(s, rel, j, tauhat, opts.search).witness)
                            continue;
                        bool minimal = true;
                        for (Element x = 0 ; x < n && minimal ; ++x) {
                            vector<Element> keep;
                            for (Element y = 0 ; y < n ; ++y)
                                if (y != x)
                                    keep.push_back(y);
                            auto sub = induced_substructure(s, keep);
                            if (find_branching_witness(sub, rel, j, tauhat, opts.search).witness)
                                minimal = false;
                        }
                        if (minimal) {
                            member = true;
                            pos = j;
                        }
                    }
                    if (member) {
                        if (seen.insert(canonical_key(s)).second)
                            catalog.push_back(CatalogEntry{canonical_form(s), rel, pos});
                        break;
                    }
                }
            }
        }
        return catalog;
    }

    auto has_delta_branching(const Structure & m, const Rational & delta, const vector<CatalogEntry> & catalog)
        -> DeltaBranching
    {
        DeltaBranching r;
        for (size_t i = 0 ; i < catalog.size() ; ++i) {
            if (catalog[i].structure.size() > m.size())
                continue;
            auto d = t_ind(catalog[i].structure, m);
            if (! r.best || d.value > r.best_density) {
                r.best = i;
                r.best_density = d.value;
            }
            if (d.value >= delta)
                r.holds = true;
        }
        return r;
    }
}

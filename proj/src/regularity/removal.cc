#include <srl/regularity/removal.hh>
#include <srl/core/structure_ops.hh>
#include <srl/stability/density.hh>

#include <algorithm>
#include <map>
#include <set>

using std::size_t;
using std::uint64_t;
using std::vector;

namespace srl
{
    RemovalError::RemovalError(const std::string & what, Rational r) :
        Error(what),
        residual(std::move(r))
    {
    }

    namespace
    {
        // tuples over 0..i that mention i, per i
        auto incremental_checks(const Structure & f) -> vector<vector<std::pair<size_t, Tuple>>>
        {
            unsigned k = static_cast<unsigned>(f.size());
            vector<vector<std::pair<size_t, Tuple>>> checks(k);
            for (size_t rel = 0 ; rel < f.signature().size() ; ++rel)
                for (Element i = 0 ; i < k ; ++i) {
                    Tuple t(f.arity(rel), 0);
                    do {
                        if (std::find(t.begin(), t.end(), i) != t.end())
                            checks[i].emplace_back(rel, t);
                    } while (next_tuple(t, i + 1));
                }
            return checks;
        }

        class Finder
        {
            private:
                const Structure & _m;
                vector<ElementSet> _classes;

            public:
                explicit Finder(const Structure & m) :
                    _m(m),
                    _classes(twin_classes(m))
                {
                }

                // Calls f(image) for embeddings in which every image element
                // is the least unused member of its twin class. f returns
                // false to stop; the return value says whether it stopped.
                template <typename F_>
                auto each(const Structure & f, F_ && cb) const -> bool
                {
                    unsigned k = static_cast<unsigned>(f.size());
                    if (k > _m.size() || ! (f.signature() == _m.signature()))
                        return false;
                    auto checks = incremental_checks(f);
                    vector<Element> image(k);
                    vector<size_t> used(_classes.size(), 0);
                    Tuple mapped;
                    bool stopped = false;
                    auto run = [&] (auto & self, unsigned i) -> void {
                        if (stopped)
                            return;
                        if (i == k) {
                            if (! cb(image))
                                stopped = true;
                            return;
                        }
                        for (size_t c = 0 ; c < _classes.size() && ! stopped ; ++c) {
                            if (used[c] == _classes[c].size())
                                continue;
                            image[i] = _classes[c][used[c]];
                            bool ok = true;
                            for (auto & [rel, t] : checks[i]) {
                                mapped.resize(t.size());
                                for (size_t p = 0 ; p < t.size() ; ++p)
                                    mapped[p] = image[t[p]];
                                if (f.holds(rel, t) != _m.holds(rel, mapped)) {
                                    ok = false;
                                    break;
                                }
                            }
                            if (! ok)
                                continue;
                            ++used[c];
                            self(self, i + 1);
                            --used[c];
                        }
                    };
                    if (k == 0)
                        return ! cb(image);
                    run(run, 0);
                    return stopped;
                }
        };

        // Induced embeddings of f into m whose image contains every element
        // of elems. Free positions go to the least unused twin outside elems;
        // each such choice stands for prod (avail_c)_(u_c) embeddings.
        auto count_through(const Structure & f, const Structure & m, const vector<ElementSet> & classes,
                const ElementSet & elems) -> BigInt
        {
            unsigned k = static_cast<unsigned>(f.size());
            size_t v = elems.size();
            if (v > k || k > m.size() || ! (f.signature() == m.signature()))
                return 0;
            auto checks = incremental_checks(f);
            vector<ElementSet> free(classes.size());
            for (size_t c = 0 ; c < classes.size() ; ++c)
                for (auto x : classes[c])
                    if (! std::binary_search(elems.begin(), elems.end(), x))
                        free[c].push_back(x);

            BigInt total = 0;
            vector<int> placed(k, -1);
            vector<Element> image(k);
            vector<size_t> used(classes.size(), 0);
            Tuple mapped;
            auto consistent = [&] (unsigned i) {
                for (auto & [rel, t] : checks[i]) {
                    mapped.resize(t.size());
                    for (size_t p = 0 ; p < t.size() ; ++p)
                        mapped[p] = image[t[p]];
                    if (f.holds(rel, t) != m.holds(rel, mapped))
                        return false;
                }
                return true;
            };
            auto extend = [&] (auto & self, unsigned i) -> void {
                if (i == k) {
                    BigInt mult = 1;
                    for (size_t c = 0 ; c < free.size() ; ++c)
                        mult *= falling_factorial(free[c].size(), static_cast<unsigned>(used[c]));
                    total += mult;
                    return;
                }
                if (placed[i] >= 0) {
                    image[i] = elems[static_cast<size_t>(placed[i])];
                    if (consistent(i))
                        self(self, i + 1);
                    return;
                }
                for (size_t c = 0 ; c < free.size() ; ++c) {
                    if (used[c] == free[c].size())
                        continue;
                    image[i] = free[c][used[c]];
                    if (! consistent(i))
                        continue;
                    ++used[c];
                    self(self, i + 1);
                    --used[c];
                }
            };
            // every injective placement of elems onto positions of f
            auto place = [&] (auto & self, size_t e) -> void {
                if (e == v) {
                    extend(extend, 0);
                    return;
                }
                for (unsigned pos = 0 ; pos < k ; ++pos) {
                    if (placed[pos] >= 0)
                        continue;
                    placed[pos] = static_cast<int>(e);
                    self(self, e + 1);
                    placed[pos] = -1;
                }
            };
            place(place, 0);
            return total;
        }

        auto first_embedding(const Structure & m, const vector<Structure> & forbidden) -> std::optional<vector<Element>>
        {
            Finder finder(m);
            std::optional<vector<Element>> found;
            for (auto & f : forbidden) {
                finder.each(f, [&] (const vector<Element> & img) { found = img; return false; });
                if (found)
                    return found;
            }
            return std::nullopt;
        }

        // every tuple of every relation over the image elements
        auto tuples_over(const Structure & m, const vector<Element> & image) -> vector<Flip>
        {
            vector<Flip> out;
            for (size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
                Tuple idx(m.arity(rel), 0);
                do {
                    Tuple t(idx.size());
                    for (size_t i = 0 ; i < idx.size() ; ++i)
                        t[i] = image[idx[i]];
                    out.push_back(Flip{rel, t});
                } while (next_tuple(idx, image.size()));
            }
            std::sort(out.begin(), out.end(), [] (const Flip & a, const Flip & b) {
                return std::tie(a.relation, a.tuple) < std::tie(b.relation, b.tuple);
            });
            out.erase(std::unique(out.begin(), out.end(), [] (const Flip & a, const Flip & b) {
                return a.relation == b.relation && a.tuple == b.tuple;
            }), out.end());
            return out;
        }

        void flip(Structure & m, const Flip & f)
        {
            m.flip(f.relation, f.tuple);
        }

        struct BudgetExhausted {};

        auto deepen(Structure & m, const vector<Structure> & forbidden, unsigned depth, vector<Flip> & flips,
                uint64_t & nodes, uint64_t budget) -> bool
        {
            auto emb = first_embedding(m, forbidden);
            if (! emb)
                return true;
            if (depth == 0)
                return false;
            nodes += forbidden.size();
            if (nodes > budget)
                throw BudgetExhausted{};
            for (auto & f : tuples_over(m, *emb)) {
                bool repeat = false;
                for (auto & g : flips)
                    repeat = repeat || (g.relation == f.relation && g.tuple == f.tuple);
                if (repeat)
                    continue;
                flip(m, f);
                flips.push_back(f);
                if (deepen(m, forbidden, depth - 1, flips, nodes, budget))
                    return true;
                flips.pop_back();
                flip(m, f);
            }
            return false;
        }

        auto residual(const Structure & m, const vector<Structure> & forbidden) -> Rational
        {
            Rational worst = 0;
            for (auto & f : forbidden)
                if (f.size() <= m.size())
                    worst = std::max(worst, t_ind(f, m).value);
            return worst;
        }

        auto tally(const Structure & m, const vector<Flip> & flips) -> vector<uint64_t>
        {
            vector<uint64_t> edits(m.signature().size(), 0);
            for (auto & f : flips)
                ++edits[f.relation];
            return edits;
        }
    }

    auto find_induced_embedding(const Structure & f, const Structure & m) -> std::optional<vector<Element>>
    {
        return first_embedding(m, {f});
    }

    auto remove_embeddings(const Structure & m, const vector<Structure> & forbidden, const RemovalOptions & opts) -> RemovalResult
    {
        for (auto & f : forbidden)
            if (! (f.signature() == m.signature()))
                throw Error("remove_embeddings: forbidden structure has a different signature");

        RemovalResult out;
        Structure work = m;
        vector<Flip> flips;
        try {
            for (unsigned depth = 0 ; depth <= opts.max_depth ; ++depth) {
                if (deepen(work, forbidden, depth, flips, out.nodes, opts.budget)) {
                    out.cleaned = std::move(work);
                    out.flips = flips;
                    out.edits = tally(m, flips);
                    out.exact = true;
                    return out;
                }
            }
        } catch (const BudgetExhausted &) {
        }

        // greedy: among the tuples over a few remaining embeddings, flip the
        // one that lowers the total embedding count the most
        work = m;
        flips.clear();
        while (true) {
            Finder finder(work);
            vector<vector<Element>> images;
            for (auto & f : forbidden) {
                finder.each(f, [&] (const vector<Element> & img) { images.push_back(img); return false; });
                if (images.size() >= 16)
                    break;
            }
            if (images.empty())
                break;
            if (flips.size() >= opts.max_edits)
                throw RemovalError("remove_embeddings: " + std::to_string(flips.size())
                        + " edits did not remove every forbidden embedding; residual density "
                        + to_string(residual(work, forbidden)), residual(work, forbidden));
            std::set<std::pair<size_t, Tuple>> candidates;
            for (auto & img : images)
                for (auto & t : tuples_over(work, img))
                    candidates.insert({t.relation, t.tuple});
            auto classes = twin_classes(work);
            std::optional<std::pair<BigInt, Flip>> best;
            for (auto & [rel, t] : candidates) {
                ElementSet elems(t.begin(), t.end());
                std::sort(elems.begin(), elems.end());
                elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
                BigInt before = 0, after = 0;
                for (auto & f : forbidden)
                    before += count_through(f, work, classes, elems);
                Flip c{rel, t};
                flip(work, c);
                auto flipped = twin_classes(work);
                for (auto & f : forbidden)
                    after += count_through(f, work, flipped, elems);
                flip(work, c);
                BigInt delta = after - before;
                if (! best || delta < best->first)
                    best = std::pair{delta, c};
            }
            flip(work, best->second);
            flips.push_back(best->second);
        }
        out.cleaned = std::move(work);
        out.flips = flips;
        out.edits = tally(m, flips);
        out.exact = false;
        return out;
    }

    auto almost_stable_regularize(const Structure & m, const Fraction & eps, unsigned tauhat, uint64_t seed,
            const AlmostStableOptions & opts) -> RegularityReport
    {
        check_epsilon(eps);
        const auto & sig = m.signature();
        unsigned cap = opts.catalog_cap ? *opts.catalog_cap
            : static_cast<unsigned>(minimal_branching_size_bound(sig, tauhat));
        auto catalog = minimal_branching_catalog(sig, tauhat, cap);
        vector<Structure> forbidden;
        for (auto & c : catalog)
            forbidden.push_back(c.structure);

        auto before = has_delta_branching(m, Rational(0), catalog);
        auto removal = remove_embeddings(m, forbidden, opts.removal);

        Fraction half(eps.num, 2 * eps.den);
        RegularizeOptions ro = opts.regularize;
        ro.tauhat = tauhat;
        auto report = regularize(removal.cleaned, half, Mode::opportunistic, seed, ro);
        report.almost_stable = true;
        report.global_eps = eps;
        report.removal_edits = removal.edits;
        report.cleaned = removal.cleaned;
        report.catalog_cap = cap;

        std::string diag = "catalog of " + std::to_string(catalog.size()) + " structures of size <= " + std::to_string(cap) + ", minimal " + std::to_string(tauhat)
            + "-branching structures; largest density before removal " + to_string(before.best_density);
        report.notes.insert(report.notes.begin(), diag);
        uint64_t total = 0;
        for (auto e : removal.edits)
            total += e;
        report.notes.insert(report.notes.begin() + 1, "removal: " + std::to_string(total) + " edits ("
                + (removal.exact ? "minimum" : "greedy") + ", " + std::to_string(removal.nodes) + " search nodes)");
        return report;
    }
}

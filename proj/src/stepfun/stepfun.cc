#include <srl/stepfun/stepfun.hh>
#include <srl/core/structure_io.hh>
#include <srl/core/structure_ops.hh>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

using std::size_t;
using std::uint64_t;
using std::vector;

namespace srl
{
    auto StepStructure::measure(size_t rel) const -> Rational
    {
        if (grid() == 0)
            return 0;
        return Rational(BigInt(cells.count(rel)), boost::multiprecision::pow(BigInt(grid()), cells.arity(rel)));
    }

    auto borel_blowup(const Structure & n) -> StepStructure
    {
        return StepStructure{n};
    }

    namespace
    {
        // One interval of the common refinement of two grids, in units of
        // 1/lcm.
        struct Atom
        {
            uint64_t length;
            Element first_cell;
            Element second_cell;
        };

        auto refine(uint64_t a, uint64_t b) -> std::pair<uint64_t, vector<Atom>>
        {
            uint64_t l = std::lcm(a, b);
            uint64_t sa = l / a, sb = l / b;
            std::set<uint64_t> cuts;
            for (uint64_t i = 0 ; i <= a ; ++i)
                cuts.insert(i * sa);
            for (uint64_t j = 0 ; j <= b ; ++j)
                cuts.insert(j * sb);
            vector<Atom> atoms;
            auto it = cuts.begin();
            uint64_t prev = *it;
            for (++it ; it != cuts.end() ; ++it) {
                atoms.push_back(Atom{*it - prev, static_cast<Element>(prev / sa), static_cast<Element>(prev / sb)});
                prev = *it;
            }
            return {l, atoms};
        }

        void check_same_signature(const StepStructure & s, const StepStructure & t)
        {
            if (! (s.signature() == t.signature()))
                throw Error("step structures have different signatures");
        }

        // Calls f(first cells, second cells, measure in units of 1/lcm^k) for
        // every product of atoms.
        template <typename F>
        void for_each_atom_box(const vector<Atom> & atoms, unsigned k, F && f)
        {
            vector<size_t> idx(k, 0);
            Tuple a(k), b(k);
            if (atoms.empty())
                return;
            while (true) {
                BigInt vol = 1;
                for (unsigned i = 0 ; i < k ; ++i) {
                    a[i] = atoms[idx[i]].first_cell;
                    b[i] = atoms[idx[i]].second_cell;
                    vol *= atoms[idx[i]].length;
                }
                f(a, b, vol);
                unsigned i = k;
                bool more = false;
                while (i-- > 0) {
                    if (++idx[i] < atoms.size()) {
                        more = true;
                        break;
                    }
                    idx[i] = 0;
                }
                if (! more)
                    return;
            }
        }
    }

    auto d1(const StepStructure & s, const StepStructure & t) -> Rational
    {
        check_same_signature(s, t);
        if (s.grid() == 0 || t.grid() == 0) {
            if (s.grid() != t.grid())
                throw Error("d1 of an empty step structure against a non-empty one");
            return 0;
        }
        auto [l, atoms] = refine(s.grid(), t.grid());
        Rational total = 0;
        for (size_t rel = 0 ; rel < s.signature().size() ; ++rel) {
            unsigned k = s.cells.arity(rel);
            BigInt differ = 0;
            for_each_atom_box(atoms, k, [&] (const Tuple & a, const Tuple & b, const BigInt & vol) {
                if (s.cells.holds(rel, a) != t.cells.holds(rel, b))
                    differ += vol;
            });
            total += Rational(differ, boost::multiprecision::pow(BigInt(l), k));
        }
        return total;
    }

    auto canonicalize(const StepStructure & s) -> StepStructure
    {
        uint64_t n = s.grid();
        if (n <= 1)
            return s;
        const auto & sig = s.signature();
        for (uint64_t p = n ; p > 1 ; --p) {
            if (n % p)
                continue;
            bool ok = true;
            vector<std::set<Tuple>> blocks(sig.size());
            for (size_t rel = 0 ; rel < sig.size() && ok ; ++rel) {
                for (auto & t : s.cells.tuples(rel)) {
                    Tuple b(t.size());
                    for (size_t i = 0 ; i < t.size() ; ++i)
                        b[i] = static_cast<Element>(t[i] / p);
                    blocks[rel].insert(b);
                }
                // constant on boxes iff every touched box is full
                ok = BigInt(s.cells.count(rel)) == BigInt(blocks[rel].size()) * boost::multiprecision::pow(BigInt(p), sig.arity(rel));
            }
            if (! ok)
                continue;
            Structure rep(sig, n / p);
            for (size_t rel = 0 ; rel < sig.size() ; ++rel)
                for (auto & b : blocks[rel])
                    rep.set(rel, b);
            return StepStructure{rep};
        }
        return s;
    }

    auto grid_approximate(const StepStructure & s, uint64_t n_target) -> GridApproximation
    {
        if (n_target < 1)
            throw Error("grid_approximate: target grid must be positive");
        if (s.grid() == 0)
            throw Error("grid_approximate: empty step structure");
        const auto & sig = s.signature();
        auto [l, atoms] = refine(s.grid(), n_target);
        Structure out(sig, n_target);
        for (size_t rel = 0 ; rel < sig.size() ; ++rel) {
            unsigned k = sig.arity(rel);
            std::map<Tuple, BigInt> filled;
            for_each_atom_box(atoms, k, [&] (const Tuple & a, const Tuple & b, const BigInt & vol) {
                if (s.cells.holds(rel, a))
                    filled[b] += vol;
            });
            BigInt box = boost::multiprecision::pow(BigInt(l / n_target), k);
            for (auto & [t, v] : filled)
                if (2 * v > box)
                    out.set(rel, t);
        }
        GridApproximation g{out, 0};
        g.achieved_d1 = d1(s, borel_blowup(out));
        return g;
    }

    auto t_ind_step(const Structure & f, const StepStructure & s) -> Rational
    {
        if (! (f.signature() == s.signature()))
            throw Error("t_ind_step: signatures differ");
        unsigned k = static_cast<unsigned>(f.size());
        uint64_t n = s.grid();
        if (k == 0)
            return 1;
        if (n == 0)
            return 0;

        // tuples over 0..i that mention i, checked once i is assigned
        vector<vector<std::pair<size_t, Tuple>>> checks(k);
        for (size_t rel = 0 ; rel < f.signature().size() ; ++rel)
            for (Element i = 0 ; i < k ; ++i) {
                Tuple t(f.arity(rel), 0);
                do {
                    if (std::find(t.begin(), t.end(), i) != t.end())
                        checks[i].emplace_back(rel, t);
                } while (next_tuple(t, i + 1));
            }

        vector<Element> cell(k);
        BigInt count = 0;
        Tuple mapped;
        auto run = [&] (auto & self, Element i) -> void {
            if (i == k) {
                ++count;
                return;
            }
            for (Element c = 0 ; c < n ; ++c) {
                cell[i] = c;
                bool ok = true;
                for (auto & [rel, t] : checks[i]) {
                    mapped.resize(t.size());
                    for (size_t p = 0 ; p < t.size() ; ++p)
                        mapped[p] = cell[t[p]];
                    if (f.holds(rel, t) != s.cells.holds(rel, mapped)) {
                        ok = false;
                        break;
                    }
                }
                if (ok)
                    self(self, i + 1);
            }
        };
        run(run, 0);
        return Rational(count, boost::multiprecision::pow(BigInt(n), k));
    }

    auto lift_equitable(const Structure & m, const Partition & p) -> EquitableLift
    {
        uint64_t n = m.size();
        if (p.universe_size() != n || ! p.covers_all())
            throw Error("lift_equitable: partition must cover the universe");
        if (! p.is_equitable())
            throw Error("lift_equitable: partition is not equitable");
        if (! is_indivisible(m, p).indivisible)
            throw Error("lift_equitable: partition is not indivisible");

        uint64_t q = p.size();
        uint64_t r = p.min_block_size();
        uint64_t grid = n * q;

        // owner of every fine cell; cell c lies in element c / q
        vector<uint64_t> owner(grid, 0);
        vector<bool> has_leftover(q, false);
        uint64_t t = 0;
        for (uint64_t b = 0 ; b < q ; ++b)
            if (p.block(b).size() > r) {
                has_leftover[b] = true;
                ++t;
            }
        vector<uint64_t> free_cells;
        for (uint64_t b = 0 ; b < q ; ++b) {
            const auto & blk = p.block(b);
            for (size_t i = 0 ; i < blk.size() ; ++i) {
                uint64_t x = blk[i];
                for (uint64_t sub = 0 ; sub < q ; ++sub) {
                    uint64_t c = x * q + sub;
                    if (i < r || sub < t)
                        owner[c] = b;
                    else
                        free_cells.push_back(c);
                }
            }
        }
        std::sort(free_cells.begin(), free_cells.end());
        size_t next = 0;
        for (uint64_t b = 0 ; b < q ; ++b)
            if (! has_leftover[b])
                for (uint64_t j = 0 ; j < t ; ++j)
                    owner[free_cells.at(next++)] = b;

        EquitableLift lift;
        lift.cell_blocks.assign(q, {});
        for (uint64_t c = 0 ; c < grid ; ++c)
            lift.cell_blocks[owner[c]].push_back(static_cast<Element>(c));

        Structure cells(m.signature(), grid);
        for (size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
            unsigned k = m.arity(rel);
            Tuple blocks(k, 0), reps(k);
            do {
                for (unsigned i = 0 ; i < k ; ++i)
                    reps[i] = p.block(blocks[i]).front();
                if (! m.holds(rel, reps))
                    continue;
                vector<size_t> idx(k, 0);
                Tuple t(k);
                while (true) {
                    for (unsigned i = 0 ; i < k ; ++i)
                        t[i] = lift.cell_blocks[blocks[i]][idx[i]];
                    cells.set(rel, t);
                    unsigned i = k;
                    bool more = false;
                    while (i-- > 0) {
                        if (++idx[i] < lift.cell_blocks[blocks[i]].size()) {
                            more = true;
                            break;
                        }
                        idx[i] = 0;
                    }
                    if (! more)
                        break;
                }
            } while (next_tuple(blocks, q));
        }
        lift.lifted = StepStructure{cells};
        lift.achieved_d1 = d1(borel_blowup(m), lift.lifted);
        lift.bound = Rational(BigInt(m.signature().size() * (q - 1)), BigInt(n));
        lift.within_bound = lift.achieved_d1 <= lift.bound;
        return lift;
    }

    auto has_delta_branching_step(const StepStructure & s, const Rational & delta,
            const vector<CatalogEntry> & catalog) -> DeltaBranchingStep
    {
        DeltaBranchingStep r;
        for (size_t i = 0 ; i < catalog.size() ; ++i) {
            auto d = t_ind_step(catalog[i].structure, s);
            if (! r.best || d > r.best_density) {
                r.best = i;
                r.best_density = d;
            }
            if (d >= delta)
                r.holds = true;
        }
        return r;
    }

    auto has_delta_branching_step(const StepStructure & s, const Rational & delta, unsigned tauhat) -> DeltaBranchingStep
    {
        auto cap = minimal_branching_size_bound(s.signature(), tauhat);
        auto catalog = minimal_branching_catalog(s.signature(), tauhat, static_cast<unsigned>(cap));
        return has_delta_branching_step(s, delta, catalog);
    }

    auto parse_step(const std::string & text) -> StepStructure
    {
        auto parsed = parse_structure_text(text);
        return StepStructure{parsed.structure};
    }

    auto serialize_step(const StepStructure & s) -> std::string
    {
        return serialize_grid_structure(s.cells);
    }
}

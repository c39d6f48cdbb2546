#include <srl/polling/goodness.hh>
#include <srl/core/rng.hh>

#include <algorithm>

using std::size_t;
using std::uint64_t;
using std::vector;

namespace srl
{
    auto to_string(FamilyMode m) -> const char *
    {
        switch (m) {
            case FamilyMode::all_subsets: return "ALL-SUBSETS";
            case FamilyMode::family: return "FAMILY";
            case FamilyMode::sampled: return "SAMPLED";
        }
        return "?";
    }

    auto PollContext::args_with(const ElementSet & hole) const -> vector<PollArg>
    {
        vector<PollArg> args(elements.size());
        for (size_t i = 0 ; i < elements.size() ; ++i)
            args[i] = PollArg::of(elements[i]);
        args[positions[0]] = PollArg::of(hole);
        for (unsigned i = 1 ; i < level ; ++i)
            args[positions[i]] = PollArg::of(inner[i - 1]);
        return args;
    }

    auto PollContext::order() const -> vector<unsigned>
    {
        return vector<unsigned>(positions.rbegin(), positions.rend());
    }

    auto recheck_failure(const Structure & m, const ElementSet & a, const PollContext & c, const Fraction & eps) -> bool
    {
        auto order = c.order();
        return eval_partial(m, c.relation, c.args_with(a), order, eps) == Truth::indet;
    }

    GoodnessEngine::GoodnessEngine(const Structure & m, const Fraction & eps, const GoodSetFamily & family,
            const vector<ElementSet> & extra) :
        _m(m),
        _eps(eps),
        _mode(family.mode),
        _levels(m.signature().size())
    {
        check_epsilon(eps);
        switch (family.mode) {
            case FamilyMode::all_subsets: {
                if (m.size() > all_subsets_limit)
                    throw Error("ALL-SUBSETS goodness needs n <= 14");
                uint64_t n = m.size();
                for (uint64_t bits = 1 ; bits < (uint64_t{1} << n) ; ++bits) {
                    ElementSet s;
                    for (uint64_t e = 0 ; e < n ; ++e)
                        if (bits >> e & 1)
                            s.push_back(static_cast<Element>(e));
                    add(s);
                }
                break;
            }
            case FamilyMode::sampled: {
                for (auto & s : family.pool)
                    add(s);
                Rng rng = Rng(family.seed).substream("sampled-family");
                for (size_t i = 0 ; i < family.samples && m.size() > 0 ; ++i) {
                    ElementSet s;
                    while (s.empty())
                        for (Element e = 0 ; e < m.size() ; ++e)
                            if (rng.next() & 1)
                                s.push_back(e);
                    add(s);
                }
                break;
            }
            case FamilyMode::family:
                for (auto & s : family.pool)
                    add(s);
                break;
        }
        for (auto & s : extra)
            add(s);
    }

    void GoodnessEngine::add(const ElementSet & s)
    {
        if (s.empty())
            throw Error("goodness family contains an empty set");
        if (! is_sorted_set(s))
            throw Error("goodness family set is not sorted");
        if (s.back() >= _m.size())
            throw Error("goodness family set has an element out of range");
        if (_index.contains(s))
            return;
        _index.emplace(s, _pool.size());
        _pool.push_back(s);
        _masks.emplace_back(_m.size(), s);
        for (auto & r : _levels)
            r.computed = false;
    }

    auto GoodnessEngine::index_of(const ElementSet & s) const -> std::optional<size_t>
    {
        auto i = _index.find(s);
        if (i == _index.end())
            return std::nullopt;
        return i->second;
    }

    namespace
    {
        struct InnerEval
        {
            const Structure & m;
            size_t rel;
            const Fraction & eps;
            const vector<unsigned> & positions;
            vector<const ElementSet *> sets;   // sets[i] for i >= 1
            Tuple t;

            // polls sets level-1 .. 1, with set 1 outermost
            auto eval(unsigned i) -> Truth
            {
                if (i == sets.size())
                    return m.holds(rel, t) ? Truth::top : Truth::bot;
                uint64_t top = 0, bot = 0;
                unsigned p = positions[i];
                for (auto a : *sets[i]) {
                    t[p] = a;
                    auto v = eval(i + 1);
                    if (v == Truth::top)
                        ++top;
                    else if (v == Truth::bot)
                        ++bot;
                }
                return decide(top, bot, sets[i]->size(), eps);
            }
        };
    }

    void GoodnessEngine::enumerate(size_t rel, unsigned level, const Mask & domain,
            const vector<unsigned> & lv, const ContextCallback & f)
    {
        unsigned k = _m.arity(rel);
        uint64_t n = _m.size();
        if (level < 1 || level > k || n == 0)
            return;

        vector<Element> domain_elems;
        for (Element a = 0 ; a < n ; ++a)
            if (domain.test(a))
                domain_elems.push_back(a);

        // inner candidates per inner index
        vector<vector<size_t>> cands(level);
        for (unsigned i = 1 ; i < level ; ++i) {
            for (size_t idx = 0 ; idx < _pool.size() ; ++idx)
                if (lv[idx] >= level - i)
                    cands[i].push_back(idx);
            if (cands[i].empty())
                return;
        }

        // injective placements
        vector<unsigned> placement(level, 0);
        vector<bool> used(k, false);
        Mask top(n), bot(n);

        std::function<bool (unsigned)> place = [&] (unsigned d) -> bool {
            if (d < level) {
                for (unsigned p = 0 ; p < k ; ++p) {
                    if (used[p])
                        continue;
                    used[p] = true;
                    placement[d] = p;
                    bool go = place(d + 1);
                    used[p] = false;
                    if (! go)
                        return false;
                }
                return true;
            }

            vector<unsigned> rest;
            for (unsigned p = 0 ; p < k ; ++p)
                if (! used[p])
                    rest.push_back(p);

            vector<size_t> choice(level, 0);
            while (true) {
                PollContext ctx;
                ctx.relation = rel;
                ctx.level = level;
                ctx.positions = placement;
                InnerEval ev{_m, rel, _eps, ctx.positions, vector<const ElementSet *>(level, nullptr), Tuple(k, 0)};
                for (unsigned i = 1 ; i < level ; ++i)
                    ev.sets[i] = &_pool[cands[i][choice[i]]];

                Tuple others(rest.size(), 0);
                while (true) {
                    for (size_t r = 0 ; r < rest.size() ; ++r)
                        ev.t[rest[r]] = others[r];
                    top.clear();
                    bot.clear();
                    for (auto a : domain_elems) {
                        ev.t[placement[0]] = a;
                        auto v = ev.eval(1);
                        if (v == Truth::top)
                            top.set(a);
                        else if (v == Truth::bot)
                            bot.set(a);
                    }
                    ctx.elements = ev.t;
                    for (unsigned i = 0 ; i < level ; ++i)
                        ctx.elements[placement[i]] = 0;
                    ctx.inner.clear();
                    for (unsigned i = 1 ; i < level ; ++i)
                        ctx.inner.push_back(*ev.sets[i]);
                    if (! f(ctx, top, bot))
                        return false;
                    if (rest.empty() || ! next_tuple(others, n))
                        break;
                }

                // next inner choice
                unsigned pos = level;
                bool more = false;
                while (pos > 1) {
                    --pos;
                    if (++choice[pos] < cands[pos].size()) {
                        more = true;
                        break;
                    }
                    choice[pos] = 0;
                }
                if (! more)
                    break;
            }
            return true;
        };
        place(0);
    }

    void GoodnessEngine::compute(size_t rel)
    {
        auto & r = _levels[rel];
        if (r.computed && r.level.size() == _pool.size())
            return;
        unsigned k = _m.arity(rel);
        r.level.assign(_pool.size(), 0);
        r.failure.assign(_pool.size(), std::nullopt);

        for (unsigned ell = 1 ; ell <= k ; ++ell) {
            vector<size_t> alive;
            Mask domain(_m.size());
            for (size_t idx = 0 ; idx < _pool.size() ; ++idx)
                if (r.level[idx] == ell - 1) {
                    alive.push_back(idx);
                    domain |= _masks[idx];
                }
            if (alive.empty())
                break;

            vector<bool> dead(_pool.size(), false);
            size_t remaining = alive.size();
            enumerate(rel, ell, domain, r.level, [&] (const PollContext & ctx, const Mask & top, const Mask & bot) {
                for (auto idx : alive) {
                    if (dead[idx])
                        continue;
                    auto t = _masks[idx].intersect_count(top), b = _masks[idx].intersect_count(bot);
                    if (decide(t, b, _pool[idx].size(), _eps) == Truth::indet) {
                        dead[idx] = true;
                        r.failure[idx] = ctx;
                        --remaining;
                    }
                }
                return remaining > 0;
            });
            for (auto idx : alive)
                if (! dead[idx])
                    r.level[idx] = ell;
        }
        r.computed = true;
    }

    auto GoodnessEngine::level(size_t idx, size_t rel) -> unsigned
    {
        compute(rel);
        return _levels[rel].level.at(idx);
    }

    auto GoodnessEngine::goodness(size_t idx, size_t rel, unsigned ell) -> GoodnessCertificate
    {
        if (ell < 1 || ell > _m.arity(rel))
            throw Error("goodness level out of range");
        GoodnessCertificate cert;
        cert.mode = _mode;
        if (level(idx, rel) < ell) {
            cert.good = false;
            cert.failure = _levels[rel].failure[idx];
        }
        return cert;
    }

    auto GoodnessEngine::excellence(size_t idx) -> GoodnessCertificate
    {
        for (size_t rel = 0 ; rel < _m.signature().size() ; ++rel) {
            auto c = goodness(idx, rel, _m.arity(rel));
            if (! c.good)
                return c;
        }
        GoodnessCertificate cert;
        cert.mode = _mode;
        return cert;
    }

    void GoodnessEngine::for_each_context(size_t rel, unsigned level, const Mask & domain, const ContextCallback & f)
    {
        compute(rel);
        enumerate(rel, level, domain, _levels[rel].level, f);
    }

    auto is_good(const Structure & m, size_t rel, const ElementSet & a, unsigned ell, const Fraction & eps,
            const GoodSetFamily & family) -> GoodnessCertificate
    {
        if (rel >= m.signature().size())
            throw Error("relation index out of range");
        if (ell < 1 || ell > m.arity(rel))
            throw Error("goodness level out of range");
        if (a.empty())
            throw Error("goodness of the empty set is undefined");
        GoodnessEngine engine(m, eps, family, {a});
        return engine.goodness(*engine.index_of(a), rel, ell);
    }

    auto is_excellent(const Structure & m, const ElementSet & a, const Fraction & eps,
            const GoodSetFamily & family) -> GoodnessCertificate
    {
        if (a.empty())
            throw Error("excellence of the empty set is undefined");
        GoodnessEngine engine(m, eps, family, {a});
        return engine.excellence(*engine.index_of(a));
    }
}

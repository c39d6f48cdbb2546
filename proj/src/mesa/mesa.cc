#include <srl/mesa/mesa.hh>
#include <srl/stability/witness.hh>

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>

using std::size_t;
using std::uint64_t;
using std::vector;

namespace srl
{
    auto Staircase::contains(uint64_t size) const -> bool
    {
        return std::find(m.begin(), m.end(), size) != m.end();
    }

    auto Staircase::suffix(unsigned i) const -> Staircase
    {
        if (i >= m.size())
            throw Error("staircase suffix out of range");
        return Staircase{vector<uint64_t>(m.begin() + i, m.end()), r};
    }

    auto make_staircase(const Fraction & eps, uint64_t m_top, unsigned g) -> Staircase
    {
        if (eps.num <= 0 || eps.den <= 0)
            throw Error("staircase: epsilon must be positive");
        uint64_t r = static_cast<uint64_t>(eps.den / eps.num);
        if (r < 2)
            throw Error("staircase: floor(1/epsilon) = " + std::to_string(r) + " is below 2");
        if (m_top < 1)
            throw Error("staircase: m_top must be positive");
        Staircase s;
        s.r = r;
        s.m.assign(g + 1, m_top);
        for (unsigned i = g ; i-- > 0 ; ) {
            if (s.m[i + 1] > UINT64_MAX / r)
                throw Error("staircase: sizes overflow 64 bits");
            s.m[i] = s.m[i + 1] * r;
        }
        return s;
    }

    auto Rock::order() const -> vector<unsigned>
    {
        return vector<unsigned>(beta.rbegin(), beta.rend());
    }

    auto Rock::args_with(Element x) const -> vector<PollArg>
    {
        vector<PollArg> args(b.size());
        for (size_t p = 0 ; p < b.size() ; ++p)
            args[p] = p == position ? PollArg::of(x) : PollArg::of(b[p]);
        return args;
    }

    auto Rock::eval(const Structure & m, Element x, const Fraction & eps) const -> Truth
    {
        auto o = order();
        return eval_partial(m, relation, args_with(x), o, eps);
    }

    namespace
    {
        auto rock_from_context(const PollContext & ctx, unsigned arity, const ElementSet & a) -> Rock
        {
            Rock r;
            r.a = a;
            r.relation = ctx.relation;
            r.position = ctx.positions[0];
            r.b.assign(arity, {});
            vector<bool> placed(arity, false);
            for (unsigned i = 0 ; i < ctx.level ; ++i)
                placed[ctx.positions[i]] = true;
            for (unsigned p = 0 ; p < arity ; ++p)
                if (! placed[p]) {
                    r.b[p] = {ctx.elements[p]};
                    r.beta.push_back(p);
                }
            for (unsigned i = 1 ; i < ctx.level ; ++i) {
                r.b[ctx.positions[i]] = ctx.inner[i - 1];
                r.beta.push_back(ctx.positions[i]);
            }
            return r;
        }

        auto first_of(const Mask & mask, uint64_t count) -> ElementSet
        {
            ElementSet s;
            for (size_t i = mask.first() ; i != Mask::npos && s.size() < count ; i = mask.next(i + 1))
                s.push_back(static_cast<Element>(i));
            return s;
        }

        auto with_pool(GoodSetFamily f, const vector<ElementSet> & more) -> GoodSetFamily
        {
            f.pool.insert(f.pool.end(), more.begin(), more.end());
            return f;
        }

        auto fits_ratio(uint64_t child, uint64_t parent, const Fraction & eps) -> bool
        {
            return static_cast<unsigned __int128>(child) * eps.den >= static_cast<unsigned __int128>(parent) * eps.num;
        }

        auto ceil_times(const Fraction & eps, uint64_t x) -> uint64_t
        {
            auto p = static_cast<unsigned __int128>(x) * eps.num;
            return static_cast<uint64_t>((p + eps.den - 1) / eps.den);
        }
    }

    auto find_rock(GoodnessEngine & engine, const ElementSet & a, uint64_t m_next) -> std::optional<RockSplit>
    {
        const auto & m = engine.structure();
        if (a.empty())
            throw Error("find_rock: empty set");
        if (m_next < 1 || ! fits_ratio(m_next, a.size(), engine.epsilon()))
            throw Error("find_rock: m_next must be at least eps * |A|");
        Mask domain(m.size(), a);
        std::optional<RockSplit> found;
        for (size_t rel = 0 ; rel < m.signature().size() && ! found ; ++rel)
            for (unsigned level = 1 ; level <= m.arity(rel) && ! found ; ++level)
                engine.for_each_context(rel, level, domain, [&] (const PollContext & ctx, const Mask & top, const Mask & bot) {
                    if (top.count() < m_next || bot.count() < m_next)
                        return true;
                    found = RockSplit{rock_from_context(ctx, m.arity(rel), a), first_of(bot, m_next), first_of(top, m_next)};
                    return false;
                });
        return found;
    }

    auto find_rock(const Structure & m, const ElementSet & a, const Fraction & eps, uint64_t m_next,
            const GoodSetFamily & family) -> std::optional<RockSplit>
    {
        GoodnessEngine engine(m, eps, family);
        return find_rock(engine, a, m_next);
    }

    auto Mesa::set(unsigned depth, uint64_t bits) const -> const ElementSet &
    {
        return sets.at(node_index(depth, bits));
    }

    auto Mesa::rock(unsigned depth, uint64_t bits) const -> const Rock &
    {
        return rocks.at(node_index(depth, bits));
    }

    auto grow_mesa(const Structure & m, const ElementSet & a, const Fraction & eps, const Staircase & stairs,
            const GoodSetFamily & family) -> MesaGrowth
    {
        check_epsilon(eps);
        if (stairs.m.empty())
            throw Error("grow_mesa: empty staircase");
        if (a.size() < stairs.m[0])
            throw Error("grow_mesa: |A| = " + std::to_string(a.size()) + " is below m_0 = " + std::to_string(stairs.m[0]));

        MesaGrowth g;
        Mesa & mesa = g.mesa;
        mesa.eps = eps;
        mesa.stairs = stairs;
        mesa.sizes = stairs.m;
        mesa.family = family;
        ElementSet root(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(stairs.m[0]));
        mesa.sets = {root};
        mesa.pool = {root};

        for (unsigned d = 0 ; ; ++d) {
            GoodnessEngine engine(m, eps, family, mesa.pool);
            size_t prefix = mesa.pool.size();
            uint64_t count = uint64_t{1} << d;
            mesa.height = d;

            for (uint64_t v = 0 ; v < count ; ++v) {
                const auto & s = mesa.set(d, v);
                auto cert = engine.excellence(*engine.index_of(s));
                if (cert.good) {
                    CapCertificate cap;
                    cap.depth = d;
                    cap.bits = v;
                    cap.set = s;
                    cap.m_next = d < stairs.height() ? stairs.m[d + 1] : ceil_times(eps, stairs.m[d]);
                    cap.excellence = cert;
                    g.cap = cap;
                    return g;
                }
            }
            if (d == stairs.height()) {
                g.diagnostic = "no excellent set at the last staircase step (depth " + std::to_string(d) + ")";
                return g;
            }

            vector<Rock> rocks;
            vector<ElementSet> children;
            for (uint64_t v = 0 ; v < count ; ++v) {
                auto split = find_rock(engine, mesa.set(d, v), stairs.m[d + 1]);
                if (! split) {
                    g.diagnostic = "node at depth " + std::to_string(d) + " admits no rock but is not excellent";
                    return g;
                }
                rocks.push_back(std::move(split->rock));
                children.push_back(std::move(split->bot));
                children.push_back(std::move(split->top));
            }
            for (auto & r : rocks) {
                mesa.rocks.push_back(std::move(r));
                mesa.rock_pool.push_back(prefix);
            }
            for (auto & c : children) {
                mesa.pool.push_back(c);
                mesa.sets.push_back(std::move(c));
            }
        }
    }

    auto validate_mesa(const Structure & m, const Mesa & mesa) -> vector<std::string>
    {
        vector<std::string> problems;
        auto problem = [&] (unsigned d, uint64_t v, const std::string & what) {
            problems.push_back("node (" + std::to_string(d) + ", " + std::to_string(v) + "): " + what);
        };

        size_t expected_sets = node_index(mesa.height + 1, 0), expected_rocks = node_index(mesa.height, 0);
        if (mesa.sets.size() != expected_sets || mesa.rocks.size() != expected_rocks
                || mesa.rock_pool.size() != expected_rocks) {
            problems.push_back("tree shape does not match height " + std::to_string(mesa.height));
            return problems;
        }

        std::map<size_t, std::unique_ptr<GoodnessEngine>> engines;
        for (unsigned d = 0 ; d < mesa.height ; ++d)
            for (uint64_t v = 0 ; v < (uint64_t{1} << d) ; ++v) {
                size_t i = node_index(d, v);
                const Rock & r = mesa.rocks[i];
                const ElementSet & parent = mesa.sets[i];
                if (r.a != parent)
                    problem(d, v, "rock does not cover the node set");
                if (r.relation >= m.signature().size()) {
                    problem(d, v, "relation out of range");
                    continue;
                }
                unsigned k = m.arity(r.relation);
                if (r.position >= k || r.b.size() != k || r.beta.size() + 1 != k) {
                    problem(d, v, "rock shape does not match the relation arity");
                    continue;
                }
                vector<bool> hit(k, false);
                bool shape_ok = r.b[r.position].empty();
                for (auto p : r.beta) {
                    if (p >= k || p == r.position || hit[p])
                        shape_ok = false;
                    else
                        hit[p] = true;
                }
                for (unsigned p = 0 ; p < k ; ++p)
                    if (p != r.position && (r.b[p].empty() || ! is_sorted_set(r.b[p]) || r.b[p].back() >= m.size()))
                        shape_ok = false;
                if (! shape_ok) {
                    problem(d, v, "B-sets or beta malformed");
                    continue;
                }

                // B-goodness relative to the pool in force when the rock was found
                size_t prefix = mesa.rock_pool[i];
                auto & engine = engines[prefix];
                if (! engine) {
                    vector<ElementSet> extra(mesa.pool.begin(), mesa.pool.begin() + static_cast<std::ptrdiff_t>(std::min(prefix, mesa.pool.size())));
                    engine = std::make_unique<GoodnessEngine>(m, mesa.eps, mesa.family, extra);
                }
                for (unsigned t = 1 ; t < k ; ++t) {
                    const auto & bs = r.b[r.beta[t - 1]];
                    if (bs.size() == 1)
                        continue;
                    auto idx = engine->index_of(bs);
                    if (! idx) {
                        problem(d, v, "B-set outside the recorded family");
                        continue;
                    }
                    if (engine->level(*idx, r.relation) < k - t)
                        problem(d, v, "B-set at step " + std::to_string(t) + " is not good at level " + std::to_string(k - t));
                }

                Mask in_parent(m.size(), parent), seen(m.size());
                for (unsigned s = 0 ; s < 2 ; ++s) {
                    const auto & child = mesa.sets[node_index(d + 1, 2 * v + s)];
                    if (child.empty() || ! is_sorted_set(child)) {
                        problem(d, v, "child set empty or unsorted");
                        continue;
                    }
                    if (std::find(mesa.sizes.begin(), mesa.sizes.end(), child.size()) == mesa.sizes.end())
                        problem(d, v, "child size " + std::to_string(child.size()) + " not in the staircase");
                    if (! mesa.substructure && ! fits_ratio(child.size(), parent.size(), mesa.eps))
                        problem(d, v, "child smaller than eps times its parent");
                    Truth want = s == 0 ? Truth::bot : Truth::top;
                    for (auto x : child) {
                        if (x >= m.size() || ! in_parent.test(x)) {
                            problem(d, v, "child element outside the parent set");
                            break;
                        }
                        if (seen.test(x))
                            problem(d, v, "children overlap");
                        seen.set(x);
                        if (r.eval(m, x, mesa.eps) != want) {
                            problem(d, v, "element " + std::to_string(x) + " of child " + std::to_string(s)
                                    + " does not poll " + to_string(want));
                            break;
                        }
                    }
                }
            }
        return problems;
    }

    namespace
    {
        auto profile_distances(const Structure & m, Element pivot, const ElementSet & a) -> vector<uint64_t>
        {
            vector<uint64_t> dist(a.size(), 0);
            for (size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
                unsigned k = m.arity(rel);
                for (unsigned p = 0 ; p < k ; ++p) {
                    Tuple b(k - 1, 0);
                    do {
                        bool ref = m.holds(rel, splice(pivot, b, p));
                        for (size_t i = 0 ; i < a.size() ; ++i)
                            if (m.holds(rel, splice(a[i], b, p)) != ref)
                                ++dist[i];
                    } while (! b.empty() && next_tuple(b, m.size()));
                }
            }
            return dist;
        }
    }

    auto extract_excellent(const Structure & m, const ElementSet & a, const Fraction & eps, const Staircase & stairs,
            const GoodSetFamily & family, const ExtractOptions & opts) -> MesaGrowth
    {
        if (stairs.m.empty() || a.size() < stairs.m[0])
            throw Error("extract_excellent: |A| is below m_0");
        unsigned pivots = std::max(1u, std::min<unsigned>(opts.pivots, static_cast<unsigned>(a.size())));
        MesaGrowth last;
        for (unsigned q = 0 ; q < pivots ; ++q) {
            Element pivot = a[static_cast<size_t>(q) * a.size() / pivots];
            auto dist = profile_distances(m, pivot, a);
            vector<size_t> idx(a.size());
            for (size_t i = 0 ; i < idx.size() ; ++i)
                idx[i] = i;
            std::stable_sort(idx.begin(), idx.end(), [&] (size_t x, size_t y) { return dist[x] < dist[y]; });
            ElementSet root;
            for (size_t i = 0 ; i < stairs.m[0] ; ++i)
                root.push_back(a[idx[i]]);
            std::sort(root.begin(), root.end());
            last = grow_mesa(m, root, eps, stairs, family);
            if (last.cap)
                return last;
        }
        last.diagnostic = "no pivot produced an excellent cap; last attempt: " + last.diagnostic;
        return last;
    }

    auto excellent_partition(const Structure & m, const Fraction & eps, const Staircase & stairs,
            const GoodSetFamily & family, const PartitionOptions & opts) -> ExcellentPartition
    {
        if (stairs.m.empty() || m.size() < stairs.m[0])
            throw Error("excellent_partition: |M| is below m_0");
        ExcellentPartition result;
        vector<ElementSet> blocks;
        Mask remaining(m.size());
        for (Element x = 0 ; x < m.size() ; ++x)
            remaining.set(x);

        unsigned last_step = opts.descend ? stairs.height() : 0;
        for (unsigned step = 0 ; step <= last_step ; ++step) {
            Staircase st = stairs.suffix(step);
            while (remaining.count() >= st.m[0]) {
                auto rest = first_of(remaining, m.size());
                auto growth = extract_excellent(m, rest, eps, st, with_pool(family, blocks), opts.extract);
                if (! growth.cap)
                    throw Error("excellent_partition: " + growth.diagnostic);
                for (auto x : growth.cap->set)
                    remaining.reset(x);
                blocks.push_back(growth.cap->set);
                result.growths.push_back(std::move(growth));
            }
        }
        result.leftover = first_of(remaining, m.size());
        for (auto & b : blocks)
            result.covered.insert(result.covered.end(), b.begin(), b.end());
        std::sort(result.covered.begin(), result.covered.end());
        result.partition = Partition(m.size(), blocks);
        return result;
    }

    namespace
    {
        auto set_text(const ElementSet & s) -> std::string
        {
            std::string t = "{";
            for (size_t i = 0 ; i < s.size() ; ++i)
                t += (i ? " " : "") + std::to_string(s[i]);
            return t + "}";
        }

        auto bits_text(unsigned depth, uint64_t bits) -> std::string
        {
            if (depth == 0)
                return "<>";
            std::string t;
            for (unsigned i = depth ; i-- > 0 ; )
                t += ((bits >> i) & 1) ? '1' : '0';
            return t;
        }
    }

    auto format_rock(const Structure & m, const Rock & r) -> std::string
    {
        std::ostringstream out;
        out << "rock " << m.signature().name(r.relation) << " position " << r.position << " beta <";
        for (size_t t = 0 ; t < r.beta.size() ; ++t)
            out << (t ? " " : "") << r.beta[t];
        out << ">";
        for (size_t p = 0 ; p < r.b.size() ; ++p)
            if (p != r.position)
                out << " B" << p << "=" << set_text(r.b[p]);
        return out.str();
    }

    auto dump_mesa(const Structure & m, const Mesa & mesa) -> std::string
    {
        std::ostringstream out;
        out << "mesa height " << mesa.height << " eps " << mesa.eps.str() << " staircase";
        for (auto s : mesa.sizes)
            out << " " << s;
        out << "\n";
        for (unsigned d = 0 ; d <= mesa.height ; ++d)
            for (uint64_t v = 0 ; v < (uint64_t{1} << d) ; ++v) {
                std::string indent(2 * d, ' ');
                const auto & s = mesa.set(d, v);
                out << indent << bits_text(d, v) << " |A|=" << s.size() << " A=" << set_text(s) << "\n";
                if (d < mesa.height)
                    out << indent << "  " << format_rock(m, mesa.rock(d, v)) << "\n";
                else
                    out << indent << "  pre-cap\n";
            }
        return out.str();
    }
}

#include <srl/regularity/pipeline.hh>
#include <srl/core/rng.hh>
#include <srl/core/structure_ops.hh>
#include <srl/mesa/mesa.hh>
#include <srl/stability/search.hh>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

using std::size_t;
using std::uint64_t;
using std::vector;

namespace srl
{
    auto to_string(Mode m) -> const char *
    {
        return m == Mode::guaranteed ? "guaranteed" : "opportunistic";
    }

    auto parse_mode(const std::string & s) -> Mode
    {
        if (s == "guaranteed")
            return Mode::guaranteed;
        if (s == "opportunistic")
            return Mode::opportunistic;
        throw Error("unknown mode '" + s + "'");
    }

    PreconditionError::PreconditionError(const std::string & what, vector<std::string> f, std::optional<BigInt> k) :
        Error(what),
        failing(std::move(f)),
        k_eps(std::move(k))
    {
    }

    RefineError::RefineError(const std::string & what, RefineStats s) :
        Error(what),
        stats(std::move(s))
    {
    }

    IndeterminateCell::IndeterminateCell(const std::string & what, size_t rel, vector<int> b) :
        Error(what),
        relation(rel),
        blocks(std::move(b))
    {
    }

    namespace
    {
        auto with_pool(const GoodSetFamily & family, const vector<ElementSet> & extra) -> GoodSetFamily
        {
            GoodSetFamily f = family;
            f.pool.insert(f.pool.end(), extra.begin(), extra.end());
            return f;
        }

        auto count_failing(const Structure & m, const vector<ElementSet> & parts, const Fraction & eps,
                const GoodSetFamily & family) -> unsigned
        {
            GoodnessEngine engine(m, eps, family, parts);
            unsigned bad = 0;
            for (auto & p : parts)
                if (! engine.excellence(*engine.index_of(p)).good)
                    ++bad;
            return bad;
        }

        auto first_failing(const Structure & m, const vector<ElementSet> & parts, const Fraction & eps,
                const GoodSetFamily & family) -> std::optional<size_t>
        {
            GoodnessEngine engine(m, eps, family, parts);
            for (size_t i = 0 ; i < parts.size() ; ++i)
                if (! engine.excellence(*engine.index_of(parts[i])).good)
                    return i;
            return std::nullopt;
        }

        auto cell_text(const Structure & m, size_t rel, const vector<int> & blocks) -> std::string
        {
            std::string t = m.signature().name(rel) + "(";
            for (size_t i = 0 ; i < blocks.size() ; ++i)
                t += (i ? "," : "") + std::string("p") + std::to_string(blocks[i]);
            return t + ")";
        }

        auto half(const Fraction & f) -> Fraction { return Fraction(f.num, 2 * f.den); }

        auto sorted_chunks(const vector<Element> & order, uint64_t r) -> vector<ElementSet>
        {
            uint64_t size = order.size() / r;
            vector<ElementSet> parts(r);
            for (uint64_t i = 0 ; i < r ; ++i) {
                parts[i].assign(order.begin() + static_cast<long>(i * size), order.begin() + static_cast<long>((i + 1) * size));
                std::sort(parts[i].begin(), parts[i].end());
            }
            return parts;
        }
    }

    auto equitable_refine(const Structure & m, const ElementSet & a, uint64_t r, const Fraction & eps,
            const Fraction & zeta, const GoodSetFamily & family, const RefineOptions & opts) -> Refinement
    {
        if (r == 0 || a.empty() || a.size() % r)
            throw Error("equitable_refine: r must divide |A|");
        Refinement out;
        if (r == 1) {
            out.parts = {a};
            return out;
        }
        Fraction target = eps + zeta;
        check_epsilon(target);

        Rng rng = Rng(opts.seed).substream("equitable-refine");
        vector<Element> order(a.begin(), a.end());
        vector<ElementSet> best;
        unsigned best_bad = ~0u;
        for (unsigned attempt = 0 ; attempt < opts.attempts ; ++attempt) {
            rng.shuffle(order);
            auto parts = sorted_chunks(order, r);
            unsigned bad = count_failing(m, parts, target, family);
            out.stats.attempts = attempt + 1;
            out.stats.failing_parts.push_back(bad);
            if (bad == 0) {
                out.parts = std::move(parts);
                return out;
            }
            if (bad < best_bad) {
                best_bad = bad;
                best = std::move(parts);
            }
        }

        // greedy swaps: move elements between a failing part and the others
        // while the number of failing parts drops
        out.stats.fallback = true;
        if (opts.attempts == 0) {
            best = sorted_chunks(order, r);
            best_bad = count_failing(m, best, target, family);
        }
        bool improved = true;
        while (best_bad > 0 && improved && out.stats.swaps < opts.swap_budget) {
            improved = false;
            auto i = *first_failing(m, best, target, family);
            for (size_t j = 0 ; j < best.size() && ! improved && out.stats.swaps < opts.swap_budget ; ++j) {
                if (j == i)
                    continue;
                for (size_t xi = 0 ; xi < best[i].size() && ! improved && out.stats.swaps < opts.swap_budget ; ++xi)
                    for (size_t yi = 0 ; yi < best[j].size() && out.stats.swaps < opts.swap_budget ; ++yi) {
                        auto trial = best;
                        std::swap(trial[i][xi], trial[j][yi]);
                        std::sort(trial[i].begin(), trial[i].end());
                        std::sort(trial[j].begin(), trial[j].end());
                        ++out.stats.swaps;
                        unsigned bad = count_failing(m, trial, target, family);
                        if (bad < best_bad) {
                            best_bad = bad;
                            best = std::move(trial);
                            improved = true;
                            break;
                        }
                    }
            }
        }
        if (best_bad == 0) {
            out.parts = std::move(best);
            return out;
        }
        std::ostringstream msg;
        msg << "equitable_refine: no partition of " << a.size() << " elements into " << r
            << " excellent parts after " << out.stats.attempts << " attempts and " << out.stats.swaps
            << " swaps (best had " << best_bad << " failing parts)";
        throw RefineError(msg.str(), out.stats);
    }

    auto equitable_excellent_partition(const Structure & m, const Fraction & eps, const Fraction & zeta,
            uint64_t part_size, unsigned g, const GoodSetFamily & family, const RefineOptions & opts,
            bool descend) -> EquitableExcellent
    {
        if (part_size == 0)
            throw Error("equitable_excellent_partition: part size must be positive");
        auto stairs = make_staircase(eps, part_size, g);
        if (m.size() < stairs.m[0])
            throw Error("equitable_excellent_partition: needs |M| >= m floor(1/eps)^g = "
                    + std::to_string(stairs.m[0]) + ", have " + std::to_string(m.size()));

        PartitionOptions popts;
        popts.descend = descend;
        auto ep = excellent_partition(m, eps, stairs, family, popts);

        EquitableExcellent out;
        out.leftover = ep.leftover;
        auto pool = with_pool(family, ep.partition.blocks());
        Rng rng(opts.seed);
        for (size_t b = 0 ; b < ep.partition.size() ; ++b) {
            const auto & block = ep.partition.block(b);
            RefineOptions o = opts;
            o.seed = rng.substream(b).next();
            auto ref = equitable_refine(m, block, block.size() / part_size, eps, zeta, pool, o);
            out.notes.push_back("block " + std::to_string(b) + " of size " + std::to_string(block.size())
                    + " split into " + std::to_string(ref.parts.size()) + " parts after "
                    + std::to_string(ref.stats.attempts) + " attempts" + (ref.stats.fallback ? " and swaps" : ""));
            for (auto & p : ref.parts)
                out.parts.push_back(std::move(p));
        }
        for (auto & p : out.parts)
            out.covered.insert(out.covered.end(), p.begin(), p.end());
        std::sort(out.covered.begin(), out.covered.end());
        return out;
    }

    auto DefectTable::violations(const Signature & sig, const Fraction & eps) const -> vector<CellDefect>
    {
        vector<CellDefect> out;
        for (auto & c : cells) {
            // defect <= arity * eps * size
            BigInt lhs = BigInt(c.defect) * eps.den;
            BigInt rhs = BigInt(sig.arity(c.relation)) * eps.num * c.size;
            if (lhs > rhs)
                out.push_back(c);
        }
        return out;
    }

    auto DefectTable::total(size_t rel) const -> uint64_t
    {
        uint64_t t = 0;
        for (auto & c : cells)
            if (c.relation == rel)
                t += c.defect;
        return t;
    }

    auto compute_defects(const Structure & m, const Structure & n, const Partition & p) -> DefectTable
    {
        if (! (m.signature() == n.signature()) || m.size() != n.size())
            throw Error("compute_defects: structures differ in signature or size");
        DefectTable t;
        for (size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
            unsigned k = m.arity(rel);
            std::map<vector<int>, uint64_t> counts;
            Tuple x(k, 0);
            if (m.size() == 0)
                continue;
            do {
                if (m.holds(rel, x) != n.holds(rel, x)) {
                    vector<int> key(k);
                    for (unsigned i = 0 ; i < k ; ++i)
                        key[i] = p.block_of(x[i]);
                    ++counts[key];
                }
            } while (next_tuple(x, m.size()));
            for (auto & [key, d] : counts) {
                CellDefect c;
                c.relation = rel;
                c.blocks = key;
                c.defect = d;
                c.size = 1;
                for (auto b : key)
                    c.size *= b < 0 ? 0 : p.block(static_cast<size_t>(b)).size();
                t.cells.push_back(std::move(c));
            }
        }
        return t;
    }

    auto poll_cells(const Structure & m, const vector<ElementSet> & cores, const Fraction & eps) -> CellValues
    {
        check_epsilon(eps);
        CellValues v;
        v.blocks = cores.size();
        uint64_t q = cores.size();
        for (size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
            unsigned k = m.arity(rel);
            uint64_t cells = checked_power(q, k);
            v.value.emplace_back(cells, false);
            vector<unsigned> order(k);
            for (unsigned i = 0 ; i < k ; ++i)
                order[i] = i;
            vector<PollArg> args(k);
            for (uint64_t code = 0 ; code < cells ; ++code) {
                uint64_t c = code;
                vector<int> blocks(k);
                for (unsigned i = k ; i-- > 0 ; ) {
                    blocks[i] = static_cast<int>(c % q);
                    c /= q;
                }
                for (unsigned i = 0 ; i < k ; ++i)
                    args[i] = PollArg::of(cores[static_cast<size_t>(blocks[i])]);
                auto t = eval_partial(m, rel, args, order, eps);
                if (t == Truth::indet)
                    throw IndeterminateCell("cell " + cell_text(m, rel, blocks) + " polls INDET at eps "
                            + eps.str(), rel, blocks);
                v.value[rel][code] = t == Truth::top;
            }
        }
        return v;
    }

    auto apply_cells(const Structure & m, const Partition & p, const CellValues & values) -> Structure
    {
        if (! p.covers_all() || p.universe_size() != m.size())
            throw Error("apply_cells: partition must cover the universe");
        if (values.blocks != p.size())
            throw Error("apply_cells: block count mismatch");
        Structure n(m.signature(), m.size());
        uint64_t q = p.size();
        for (size_t rel = 0 ; rel < m.signature().size() ; ++rel) {
            unsigned k = m.arity(rel);
            Tuple x(k, 0);
            if (m.size() == 0)
                continue;
            do {
                uint64_t code = 0;
                for (unsigned i = 0 ; i < k ; ++i)
                    code = code * q + static_cast<uint64_t>(p.block_of(x[i]));
                if (values.value[rel][code])
                    n.set(rel, x);
            } while (next_tuple(x, m.size()));
        }
        return n;
    }

    auto indivisible_modification(const Structure & m, const Partition & p, const Fraction & eps) -> Modification
    {
        if (! p.covers_all() || p.universe_size() != m.size())
            throw Error("indivisible_modification: partition must cover the universe");
        auto values = poll_cells(m, p.blocks(), eps);
        Modification out{apply_cells(m, p, values), {}};
        out.defects = compute_defects(m, out.modified, p);
        return out;
    }

    auto extend_round_robin(uint64_t n, const vector<ElementSet> & cores, const ElementSet & leftover) -> Partition
    {
        if (cores.empty())
            throw Error("extend_round_robin: no blocks");
        auto blocks = cores;
        for (size_t i = 0 ; i < leftover.size() ; ++i)
            blocks[i % blocks.size()].push_back(leftover[i]);
        for (auto & b : blocks)
            std::sort(b.begin(), b.end());
        return Partition(n, std::move(blocks));
    }

    namespace
    {
        // A finished candidate: cores, the extended partition and the
        // modified structure.
        struct Candidate
        {
            uint64_t part_size = 0;
            Fraction eps_cert;
            Fraction zeta;
            vector<ElementSet> cores;
            Partition partition;
            Structure modified;
            DefectTable defects;
            vector<BlockCertificate> certificates;
            vector<std::string> notes;
        };

        auto certify(const Structure & m, const vector<ElementSet> & cores, const Fraction & eps) -> vector<BlockCertificate>
        {
            vector<BlockCertificate> out;
            GoodnessEngine engine(m, eps, GoodSetFamily::of({}), cores);
            for (size_t i = 0 ; i < cores.size() ; ++i)
                out.push_back(BlockCertificate{i, cores[i], engine.excellence(*engine.index_of(cores[i])).good});
            return out;
        }

        auto zeta_for(const Fraction & e) -> Fraction
        {
            // half of eps, capped so that eps + zeta stays below 1/4
            Fraction a = half(e);
            Fraction room(e.den - 4 * e.num, 8 * e.den);
            return room < a ? room : a;
        }

        auto singleton_candidate(const Structure & m, const Fraction & eps) -> Candidate
        {
            Candidate c;
            c.part_size = 1;
            c.eps_cert = eps;
            c.zeta = Fraction(0, 1);
            for (Element x = 0 ; x < m.size() ; ++x)
                c.cores.push_back({x});
            c.partition = Partition::singletons(m.size());
            c.modified = m;
            c.certificates = certify(m, c.cores, eps);
            c.notes.push_back("singleton partition");
            return c;
        }

        auto try_candidate(const Structure & m, const Fraction & eps, uint64_t part_size, const Fraction & eps_cert,
                unsigned g_max, uint64_t seed, const RegularizeOptions & opts, std::string & why) -> std::optional<Candidate>
        {
            uint64_t n = m.size();
            uint64_t r = static_cast<uint64_t>(eps_cert.den / eps_cert.num);
            unsigned g = 0;
            for (uint64_t top = part_size ; g < g_max && top <= n / r && top * r <= n ; top *= r)
                ++g;

            Candidate c;
            c.part_size = part_size;
            c.zeta = zeta_for(eps_cert);
            c.eps_cert = eps_cert + c.zeta;
            RefineOptions ro = opts.refine;
            ro.seed = seed;
            EquitableExcellent ee;
            try {
                ee = equitable_excellent_partition(m, eps_cert, c.zeta, part_size, g, GoodSetFamily::of({}), ro, true);
            } catch (const Error & e) {
                why = e.what();
                return std::nullopt;
            }
            if (ee.parts.empty()) {
                why = "no excellent parts";
                return std::nullopt;
            }
            c.cores = ee.parts;
            c.notes = ee.notes;
            c.partition = extend_round_robin(n, c.cores, ee.leftover);
            CellValues values;
            try {
                values = poll_cells(m, c.cores, c.eps_cert);
            } catch (const IndeterminateCell & e) {
                why = e.what();
                return std::nullopt;
            }
            c.modified = apply_cells(m, c.partition, values);
            c.defects = compute_defects(m, c.modified, c.partition);
            auto bad = c.defects.violations(m.signature(), eps);
            if (! bad.empty()) {
                why = std::to_string(bad.size()) + " cells exceed the defect bound";
                return std::nullopt;
            }
            c.certificates = certify(m, c.cores, c.eps_cert);
            for (auto & cert : c.certificates)
                if (! cert.excellent) {
                    why = "core " + std::to_string(cert.block) + " fails re-certification";
                    return std::nullopt;
                }
            return c;
        }

        auto to_fraction(const Rational & r) -> std::optional<Fraction>
        {
            BigInt num = boost::multiprecision::numerator(r), den = boost::multiprecision::denominator(r);
            BigInt limit = BigInt(std::numeric_limits<std::int64_t>::max() / 16);
            if (num > limit || den > limit)
                return std::nullopt;
            return Fraction(num.convert_to<std::int64_t>(), den.convert_to<std::int64_t>());
        }

        auto finish(const Structure & m, Mode mode, Params params, uint64_t seed, Candidate c) -> RegularityReport
        {
            RegularityReport r;
            r.mode = mode;
            r.params = std::move(params);
            r.seed = seed;
            r.eps_cert = c.eps_cert;
            r.family = FamilyMode::family;
            r.partition = std::move(c.partition);
            r.cores = std::move(c.cores);
            r.modified = std::move(c.modified);
            r.quotient = quotient(r.modified, r.partition);
            r.defects = compute_defects(m, r.modified, r.partition);
            r.certificates = std::move(c.certificates);
            r.notes = std::move(c.notes);
            r.global_eps = r.params.epsilon;
            return r;
        }
    }

    auto guaranteed_bound_violations(const RegularityReport & r) -> vector<std::string>
    {
        vector<std::string> out;
        for (auto & c : r.defects.violations(r.modified.signature(), r.params.epsilon))
            out.push_back("cell " + cell_text(r.modified, c.relation, c.blocks) + " defect " + std::to_string(c.defect)
                    + " exceeds " + std::to_string(r.modified.arity(c.relation)) + "*" + r.params.epsilon.str()
                    + "*" + std::to_string(c.size));
        if (Rational(r.partition.size()) > r.params.partition_size_bound())
            out.push_back("|P| = " + std::to_string(r.partition.size()) + " exceeds eps^(-g-2)");
        return out;
    }

    auto regularize(const Structure & m, const Fraction & eps, Mode mode, uint64_t seed,
            const RegularizeOptions & opts) -> RegularityReport
    {
        check_epsilon(eps);
        uint64_t n = m.size();
        if (n == 0)
            throw Error("regularize: empty structure");
        const auto & sig = m.signature();
        uint64_t g = compute_g(sig, opts.tauhat);

        if (mode == Mode::guaranteed) {
            auto main = derive_main(sig, opts.tauhat, eps, g, n);
            vector<std::string> failing;
            for (auto & c : main.conditions)
                if (! c.satisfied)
                    failing.push_back(format_condition(c));
            auto br = has_branching(m, opts.tauhat);
            if (br.witness)
                failing.push_back("branching witness found for " + sig.name(br.witness->relation) + " position "
                        + std::to_string(br.witness->position) + " at height " + std::to_string(opts.tauhat));
            else if (br.tag != SearchTag::exact)
                failing.push_back("absence of " + std::to_string(opts.tauhat) + "-branching not proven (search budget exhausted)");

            auto eps1 = to_fraction(main.eps1), zeta1 = to_fraction(main.zeta1);
            if (failing.empty() && (! eps1 || ! zeta1))
                failing.push_back("internal epsilon " + to_string(main.eps1) + " is not representable");
            if (! failing.empty()) {
                std::string msg = "guaranteed mode preconditions unmet; k_eps = "
                    + (main.k_eps ? main.k_eps->str() : std::string("unbounded"));
                for (auto & f : failing)
                    msg += "\n  " + f;
                throw PreconditionError(msg, failing, main.k_eps);
            }

            auto params = compute_parameters(sig, opts.tauhat, eps, n, main.eta1, main.zeta1);
            uint64_t part = main.m.convert_to<uint64_t>();
            RefineOptions ro = opts.refine;
            ro.seed = seed;
            auto ee = equitable_excellent_partition(m, *eps1, *zeta1, part, static_cast<unsigned>(g),
                    GoodSetFamily::of({}), ro, false);
            Candidate c;
            c.eps_cert = *eps1 + *zeta1;
            c.cores = ee.parts;
            c.partition = extend_round_robin(n, c.cores, ee.leftover);
            c.modified = apply_cells(m, c.partition, poll_cells(m, c.cores, c.eps_cert));
            c.certificates = certify(m, c.cores, c.eps_cert);
            c.notes = ee.notes;
            auto report = finish(m, mode, params, seed, std::move(c));
            auto bad = guaranteed_bound_violations(report);
            if (! bad.empty())
                throw Error("regularize: guaranteed bound violated: " + bad.front());
            return report;
        }

        vector<Fraction> ladder;
        for (auto f : {eps, Fraction(3 * eps.num, 2 * eps.den), Fraction(2 * eps.num, eps.den)})
            if (f < Fraction(1, 4) && (ladder.empty() || ! (f == ladder.back())))
                ladder.push_back(f);

        vector<uint64_t> sizes;
        for (uint64_t q = 1 ; q <= n && sizes.size() < opts.max_candidates ; ++q) {
            uint64_t s = n / q;
            if (s < 2)
                break;
            if (sizes.empty() || sizes.back() != s)
                sizes.push_back(s);
        }

        vector<std::string> log;
        Rng rng(seed);
        std::optional<Candidate> found;
        for (auto s : sizes) {
            for (size_t li = 0 ; li < ladder.size() && ! found ; ++li) {
                std::string why;
                found = try_candidate(m, eps, s, ladder[li], static_cast<unsigned>(g),
                        rng.substream(s * 8 + li).next(), opts, why);
                if (! found)
                    log.push_back("candidate m=" + std::to_string(s) + " eps_cert=" + ladder[li].str() + ": " + why);
                else
                    log.push_back("candidate m=" + std::to_string(s) + " eps_cert=" + ladder[li].str() + ": accepted");
            }
            if (found)
                break;
        }
        if (! found) {
            found = singleton_candidate(m, eps);
            log.push_back("fallback to singletons");
        }
        auto params = compute_parameters(sig, opts.tauhat, eps, n, Rational(found->part_size, n),
                found->zeta.to_rational());
        found->notes.insert(found->notes.begin(), log.begin(), log.end());
        return finish(m, mode, params, seed, std::move(*found));
    }
}

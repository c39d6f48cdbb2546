#include <srl/polling/polling.hh>

#include <algorithm>
#include <numeric>
#include <optional>

using std::uint64_t;
using std::vector;

namespace srl
{
    auto to_string(Truth t) -> const char *
    {
        switch (t) {
            case Truth::top: return "TOP";
            case Truth::bot: return "BOT";
            case Truth::indet: return "INDET";
        }
        return "?";
    }

    void check_epsilon(const Fraction & eps)
    {
        if (eps.num <= 0 || ! (eps < Fraction(1, 4)))
            throw Error("epsilon must lie in (0, 1/4), got " + eps.str());
    }

    auto decide(uint64_t top, uint64_t bot, uint64_t size, const Fraction & eps) -> Truth
    {
        using I = unsigned __int128;
        I rhs = static_cast<I>(eps.den - eps.num) * size;
        if (static_cast<I>(top) * eps.den > rhs)
            return Truth::top;
        if (static_cast<I>(bot) * eps.den > rhs)
            return Truth::bot;
        return Truth::indet;
    }

    namespace
    {
        struct Evaluator
        {
            const Structure & m;
            std::size_t rel;
            const vector<PollArg> & args;
            std::span<const unsigned> order;
            const Fraction & eps;
            Tuple t;

            auto eval(std::size_t depth) -> Truth
            {
                if (depth == 0)
                    return m.holds(rel, t) ? Truth::top : Truth::bot;
                unsigned j = order[depth - 1];
                uint64_t top = 0, bot = 0;
                for (auto a : args[j].set) {
                    t[j] = a;
                    switch (eval(depth - 1)) {
                        case Truth::top: ++top; break;
                        case Truth::bot: ++bot; break;
                        case Truth::indet: break;
                    }
                }
                return decide(top, bot, args[j].set.size(), eps);
            }
        };
    }

    auto eval_partial(const Structure & m, std::size_t rel, const vector<PollArg> & args,
            std::span<const unsigned> order, const Fraction & eps) -> Truth
    {
        check_epsilon(eps);
        unsigned k = m.arity(rel);
        if (args.size() != k)
            throw Error("eval_partial: argument count does not match arity");

        vector<bool> in_order(k, false);
        for (auto j : order) {
            if (j >= k)
                throw Error("eval_partial: order position out of range");
            if (in_order[j])
                throw Error("eval_partial: repeated position in order");
            if (! args[j].is_set)
                throw Error("eval_partial: order names an element-valued position");
            in_order[j] = true;
        }

        Tuple t(k, 0);
        bool complete = true;
        for (unsigned i = 0 ; i < k ; ++i) {
            if (args[i].is_set) {
                if (args[i].set.empty())
                    throw Error("eval_partial: empty set argument");
                for (auto e : args[i].set)
                    if (e >= m.size())
                        throw Error("eval_partial: set element out of range");
                if (! in_order[i])
                    complete = false;
            }
            else {
                if (args[i].element >= m.size())
                    throw Error("eval_partial: element out of range");
                t[i] = args[i].element;
            }
        }
        if (! complete)
            return Truth::indet;

        Evaluator ev{m, rel, args, order, eps, std::move(t)};
        return ev.eval(order.size());
    }

    namespace
    {
        auto build_args(unsigned k, const vector<ElementSet> & sets, const vector<Element> & fixed,
                const vector<unsigned> & sigma) -> vector<PollArg>
        {
            if (sigma.size() != k)
                throw Error("sigma must be a permutation of the positions");
            vector<bool> seen(k, false);
            for (auto s : sigma) {
                if (s >= k || seen[s])
                    throw Error("sigma must be a permutation of the positions");
                seen[s] = true;
            }
            if (sets.size() + fixed.size() != k)
                throw Error("sets and fixed elements must fill the arity");
            vector<PollArg> args(k);
            for (std::size_t i = 0 ; i < sets.size() ; ++i)
                args[sigma[i]] = PollArg::of(sets[i]);
            for (std::size_t i = 0 ; i < fixed.size() ; ++i)
                args[sigma[sets.size() + i]] = PollArg::of(fixed[i]);
            return args;
        }

        auto identity(unsigned k) -> vector<unsigned>
        {
            vector<unsigned> v(k);
            std::iota(v.begin(), v.end(), 0);
            return v;
        }
    }

    auto dissent_count(const Structure & m, std::size_t rel, const vector<ElementSet> & sets,
            const vector<Element> & fixed, const vector<unsigned> & sigma, const Fraction & eps) -> DissentResult
    {
        unsigned k = m.arity(rel);
        auto args = build_args(k, sets, fixed, sigma);
        unsigned ell = sets.size();
        vector<unsigned> order(ell);
        for (unsigned i = 0 ; i < ell ; ++i)
            order[i] = sigma[ell - 1 - i];

        DissentResult result;
        result.value = eval_partial(m, rel, args, order, eps);
        result.cell_size = 1;
        for (auto & s : sets)
            result.cell_size *= s.size();
        if (result.value == Truth::indet) {
            result.flagged = true;
            return result;
        }

        // walk Z
        Tuple t(k);
        for (unsigned i = 0 ; i < k ; ++i)
            if (! args[i].is_set)
                t[i] = args[i].element;
        vector<std::size_t> idx(ell, 0);
        bool want = result.value == Truth::top;
        while (true) {
            for (unsigned i = 0 ; i < ell ; ++i)
                t[sigma[i]] = sets[i][idx[i]];
            if (m.holds(rel, t) != want)
                ++result.dissenters;
            unsigned pos = ell;
            while (pos > 0) {
                --pos;
                if (++idx[pos] < sets[pos].size())
                    break;
                idx[pos] = 0;
                if (pos == 0) {
                    pos = ell + 1;
                    break;
                }
            }
            if (pos == ell + 1 || ell == 0)
                break;
        }
        return result;
    }

    auto dissent_within_bound(const DissentResult & d, unsigned ell, const Fraction & eps) -> bool
    {
        if (d.flagged)
            return false;
        return BigInt(d.dissenters) * eps.den <= BigInt(ell) * eps.num * d.cell_size;
    }

    auto check_unraveling_invariance(const Structure & m, std::size_t rel, const vector<ElementSet> & sets,
            const vector<Element> & fixed, const Fraction & eps, vector<unsigned> sigma) -> UnravelingResult
    {
        unsigned k = m.arity(rel);
        if (sigma.empty())
            sigma = identity(k);
        auto args = build_args(k, sets, fixed, sigma);

        vector<unsigned> positions(sigma.begin(), sigma.begin() + sets.size());
        std::sort(positions.begin(), positions.end());

        UnravelingResult result;
        std::optional<Truth> first;
        do {
            auto v = eval_partial(m, rel, args, positions, eps);
            result.evaluations.emplace_back(positions, v);
            if (v == Truth::indet || (first && *first != v))
                result.invariant = false;
            if (! first)
                first = v;
        } while (std::next_permutation(positions.begin(), positions.end()));
        return result;
    }
}

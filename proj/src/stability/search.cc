#include <srl/stability/search.hh>
#include <srl/core/bitset.hh>
#include <srl/core/rng.hh>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

using std::size_t;
using std::uint64_t;
using std::vector;

namespace srl
{
    auto to_string(SearchTag t) -> const char *
    {
        return t == SearchTag::exact ? "EXACT" : "HEURISTIC-NONE";
    }

    namespace
    {
        // phi(a; b) as a 0/1 matrix with duplicate rows and columns removed.
        struct Matrix
        {
            vector<Element> rows;
            vector<Tuple> cols;
            vector<Mask> col_mask;   // over rows
            vector<Mask> row_mask;   // over cols
            bool complete = true;
        };

        auto build_matrix(const Structure & m, size_t rel, unsigned j, const SearchOptions & opts) -> Matrix
        {
            unsigned k = m.arity(rel);
            if (j >= k)
                throw Error("isolated position out of range");
            uint64_t n = m.size();
            Matrix mx;
            if (n == 0)
                return mx;

            uint64_t params = 1;
            bool too_many = false;
            for (unsigned i = 0 ; i + 1 < k ; ++i) {
                if (params > opts.max_parameter_tuples / n) {
                    too_many = true;
                    break;
                }
                params *= n;
            }

            std::map<Mask, size_t> seen;
            vector<Mask> full_cols;
            auto add_column = [&] (const Tuple & b) {
                Mask c(n);
                for (Element a = 0 ; a < n ; ++a)
                    if (m.holds(rel, splice(a, b, j)))
                        c.set(a);
                if (seen.emplace(c, full_cols.size()).second) {
                    full_cols.push_back(c);
                    mx.cols.push_back(b);
                }
            };

            if (! too_many) {
                Tuple b(k - 1, 0);
                do
                    add_column(b);
                while (! b.empty() && next_tuple(b, n));
            }
            else {
                mx.complete = false;
                Rng rng = Rng(opts.seed).substream("parameter-sample");
                Tuple b(k - 1, 0);
                for (uint64_t s = 0 ; s < opts.max_parameter_tuples ; ++s) {
                    for (auto & e : b)
                        e = static_cast<Element>(rng.below(n));
                    add_column(b);
                }
            }

            // rows deduplicated by profile over the distinct columns
            std::map<vector<bool>, size_t> row_seen;
            for (Element a = 0 ; a < n ; ++a) {
                vector<bool> profile(full_cols.size());
                for (size_t c = 0 ; c < full_cols.size() ; ++c)
                    profile[c] = full_cols[c].test(a);
                if (row_seen.emplace(profile, mx.rows.size()).second)
                    mx.rows.push_back(a);
            }
            mx.col_mask.assign(mx.cols.size(), Mask(mx.rows.size()));
            mx.row_mask.assign(mx.rows.size(), Mask(mx.cols.size()));
            for (size_t c = 0 ; c < mx.cols.size() ; ++c)
                for (size_t r = 0 ; r < mx.rows.size() ; ++r)
                    if (full_cols[c].test(mx.rows[r])) {
                        mx.col_mask[c].set(r);
                        mx.row_mask[r].set(c);
                    }
            return mx;
        }

        struct BranchSearch
        {
            const Matrix & mx;
            uint64_t budget;
            uint64_t nodes = 0;
            bool aborted = false;
            std::map<std::pair<Mask, unsigned>, long> memo;   // chosen column or -1

            BranchSearch(const Matrix & m, uint64_t b) : mx(m), budget(b) {}

            auto has(const Mask & s, unsigned k) -> bool
            {
                if (k == 0)
                    return s.any();
                if (s.count() < (size_t{1} << std::min(k, 63u)))
                    return false;
                auto key = std::make_pair(s, k);
                if (auto i = memo.find(key) ; i != memo.end())
                    return i->second >= 0;
                std::set<Mask> splits;
                long found = -1;
                for (size_t c = 0 ; c < mx.cols.size() && found < 0 ; ++c) {
                    Mask one = s & mx.col_mask[c];
                    if (! one.any() || one == s || ! splits.insert(one).second)
                        continue;
                    if (++nodes > budget) {
                        aborted = true;
                        return false;
                    }
                    if (has(s - mx.col_mask[c], k - 1) && has(one, k - 1))
                        found = static_cast<long>(c);
                    if (aborted)
                        return false;
                }
                memo[key] = found;
                return found >= 0;
            }

            void build(const Mask & s, unsigned depth, uint64_t bits, BranchingWitness & w)
            {
                if (depth == w.height) {
                    w.leaves[bits] = mx.rows[s.first()];
                    return;
                }
                long c = memo.at(std::make_pair(s, w.height - depth));
                w.nodes[node_index(depth, bits)] = mx.cols[c];
                build(s - mx.col_mask[c], depth + 1, bits << 1, w);
                build(s & mx.col_mask[c], depth + 1, (bits << 1) | 1, w);
            }
        };

        struct OrderDfs
        {
            const Matrix & mx;
            unsigned tau;
            uint64_t budget;
            Rng * rng = nullptr;
            uint64_t nodes = 0;
            bool aborted = false;
            vector<size_t> a, b;

            OrderDfs(const Matrix & m, unsigned t, uint64_t bud, Rng * r = nullptr) :
                mx(m), tau(t), budget(bud), rng(r) {}

            auto members(const Mask & s, size_t size) -> vector<size_t>
            {
                vector<size_t> v;
                for (size_t i = s.first() ; i != Mask::npos && i < size ; i = s.next(i + 1))
                    v.push_back(i);
                if (rng)
                    rng->shuffle(v);
                return v;
            }

            // rows: false on all chosen b; cols: true on all chosen a
            auto dfs(const Mask & rows, const Mask & cols) -> bool
            {
                unsigned i = a.size();
                if (i == tau)
                    return true;
                if (rows.count() < tau - i || cols.count() < tau - i)
                    return false;
                for (auto c : members(cols, mx.cols.size())) {
                    Mask next_rows = rows - mx.col_mask[c];
                    if (next_rows.count() < tau - i)
                        continue;
                    for (auto r : members(next_rows, mx.rows.size())) {
                        if (++nodes > budget) {
                            aborted = true;
                            return false;
                        }
                        Mask next_cols = cols & mx.row_mask[r];
                        a.push_back(r);
                        b.push_back(c);
                        if (dfs(next_rows, next_cols))
                            return true;
                        a.pop_back();
                        b.pop_back();
                        if (aborted)
                            return false;
                    }
                }
                return false;
            }
        };

        auto full_mask(size_t n) -> Mask
        {
            Mask s(n);
            for (size_t i = 0 ; i < n ; ++i)
                s.set(i);
            return s;
        }
    }

    auto find_order_witness(const Structure & m, size_t rel, unsigned j, unsigned tau,
            const SearchOptions & opts) -> OrderSearch
    {
        if (tau < 1)
            throw Error("tau must be at least 1");
        OrderSearch result;
        Matrix mx = build_matrix(m, rel, j, opts);
        if (! mx.complete)
            result.tag = SearchTag::heuristic_none;

        auto accept = [&] (const OrderDfs & d) {
            OrderWitness w;
            w.relation = rel;
            w.position = j;
            for (unsigned i = 0 ; i < tau ; ++i) {
                w.a.push_back(mx.rows[d.a[i]]);
                w.b.push_back(mx.cols[d.b[i]]);
            }
            result.witness = w;
            result.tag = SearchTag::exact;
        };

        OrderDfs exact(mx, tau, opts.node_budget);
        if (exact.dfs(full_mask(mx.rows.size()), full_mask(mx.cols.size()))) {
            accept(exact);
            return result;
        }
        if (! exact.aborted)
            return result;

        result.tag = SearchTag::heuristic_none;
        Rng rng = Rng(opts.seed).substream("order-restarts");
        for (unsigned r = 0 ; r < opts.restarts ; ++r) {
            OrderDfs d(mx, tau, opts.node_budget / std::max(1u, opts.restarts), &rng);
            if (d.dfs(full_mask(mx.rows.size()), full_mask(mx.cols.size()))) {
                accept(d);
                return result;
            }
        }
        return result;
    }

    auto find_branching_witness(const Structure & m, size_t rel, unsigned j, unsigned tauhat,
            const SearchOptions & opts) -> BranchingSearch
    {
        if (tauhat < 1)
            throw Error("tauhat must be at least 1");
        if (tauhat > 30)
            throw Error("tauhat too large");
        BranchingSearch result;
        Matrix mx = build_matrix(m, rel, j, opts);
        if (! mx.complete)
            result.tag = SearchTag::heuristic_none;
        if (mx.rows.size() < (size_t{1} << tauhat))
            return result;

        BranchSearch s(mx, opts.node_budget);
        Mask all = full_mask(mx.rows.size());
        if (s.has(all, tauhat)) {
            BranchingWitness w;
            w.relation = rel;
            w.position = j;
            w.height = tauhat;
            w.leaves.assign(size_t{1} << tauhat, 0);
            w.nodes.assign((size_t{1} << tauhat) - 1, Tuple());
            s.build(all, 0, 0, w);
            result.witness = w;
            result.tag = SearchTag::exact;
        }
        else if (s.aborted)
            result.tag = SearchTag::heuristic_none;
        return result;
    }

    auto has_branching(const Structure & m, unsigned tauhat, const SearchOptions & opts) -> BranchingSearch
    {
        BranchingSearch total;
        for (size_t rel = 0 ; rel < m.signature().size() ; ++rel)
            for (unsigned j = 0 ; j < m.arity(rel) ; ++j) {
                auto r = find_branching_witness(m, rel, j, tauhat, opts);
                if (r.witness)
                    return r;
                if (r.tag == SearchTag::heuristic_none)
                    total.tag = SearchTag::heuristic_none;
            }
        return total;
    }

    auto has_order(const Structure & m, unsigned tau, const SearchOptions & opts) -> OrderSearch
    {
        OrderSearch total;
        for (size_t rel = 0 ; rel < m.signature().size() ; ++rel)
            for (unsigned j = 0 ; j < m.arity(rel) ; ++j) {
                auto r = find_order_witness(m, rel, j, tau, opts);
                if (r.witness)
                    return r;
                if (r.tag == SearchTag::heuristic_none)
                    total.tag = SearchTag::heuristic_none;
            }
        return total;
    }

    auto order_branching_bounds(BoundDirection dir, unsigned value) -> BoundPair
    {
        if (value < 1)
            throw Error("bound argument must be at least 1");
        BoundPair p;
        BigInt one = 1;
        if (dir == BoundDirection::order_to_branching)
            p.value = (one << (value + 2)) - 2;
        else
            p.value = one << (value + 1);
        if (p.value <= 1 << 20)
            p.power = one << static_cast<unsigned>(p.value);
        return p;
    }

    auto definable_trace_count(const Structure & m, size_t rel, unsigned j, const ElementSet & a,
            const SearchOptions & opts) -> TraceCount
    {
        unsigned k = m.arity(rel);
        if (j >= k)
            throw Error("isolated position out of range");
        for (auto e : a)
            if (e >= m.size())
                throw Error("trace set element out of range");

        TraceCount result;
        std::set<vector<bool>> traces;
        Tuple b(k - 1, 0);
        if (m.size() > 0) {
            do {
                vector<bool> trace(a.size());
                for (size_t i = 0 ; i < a.size() ; ++i)
                    trace[i] = m.holds(rel, splice(a[i], b, j));
                traces.insert(std::move(trace));
            } while (! b.empty() && next_tuple(b, m.size()));
        }
        result.count = traces.size();

        for (unsigned tau = 1 ; tau <= m.size() + 1 ; ++tau) {
            auto r = find_order_witness(m, rel, j, tau, opts);
            if (r.witness)
                continue;
            if (r.tag == SearchTag::exact) {
                result.tau = tau;
                result.bound = boost::multiprecision::pow(BigInt(a.size()), tau);
                result.within_bound = BigInt(result.count) <= *result.bound;
            }
            break;
        }
        return result;
    }
}

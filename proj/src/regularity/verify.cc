#include <srl/regularity/verify.hh>
#include <srl/polling/goodness.hh>
#include <srl/stability/density.hh>

#include <algorithm>
#include <map>

using std::size_t;
using std::uint64_t;
using std::vector;

namespace srl
{
    namespace
    {
        auto name_cell(const Signature & sig, size_t rel, const vector<int> & key) -> std::string
        {
            std::string t = sig.name(rel) + "(";
            for (size_t i = 0 ; i < key.size() ; ++i)
                t += (i ? "," : "") + std::string("p") + std::to_string(key[i]);
            return t + ")";
        }

        auto name_tuple(const Tuple & t) -> std::string
        {
            std::string s = "(";
            for (size_t i = 0 ; i < t.size() ; ++i)
                s += (i ? "," : "") + std::to_string(t[i]);
            return s + ")";
        }

        // Visits every tuple over 0..n-1 of length k in lexicographic order.
        template <typename F_>
        void all_tuples(uint64_t n, unsigned k, F_ && f)
        {
            if (n == 0)
                return;
            Tuple t(k, 0);
            while (true) {
                f(t);
                unsigned i = k;
                while (i > 0 && t[i - 1] + 1 == n)
                    t[--i] = 0;
                if (i == 0)
                    return;
                ++t[i - 1];
            }
        }
    }

    auto verify_report(const Structure & m, const RegularityReport & r) -> Verdict
    {
        Verdict v;
        auto fail = [&] (std::string s) {
            v.pass = false;
            v.violations.push_back(std::move(s));
        };
        const auto & sig = m.signature();
        uint64_t n = m.size();
        const Structure & nn = r.modified;

        v.checks.push_back("universe and signature");
        if (! (nn.signature() == sig) || nn.size() != n || r.partition.universe_size() != n) {
            fail("modified structure or partition does not match the input universe");
            return v;
        }
        const Structure & ref = r.almost_stable && r.cleaned ? *r.cleaned : m;
        if (r.almost_stable && ! r.cleaned)
            fail("almost-stable report without a cleaned structure");
        if (! (ref.signature() == sig) || ref.size() != n) {
            fail("cleaned structure does not match the input universe");
            return v;
        }

        // block of every element, from the listed blocks only
        v.checks.push_back("partition covers the universe exactly once");
        vector<int> owner(n, -1);
        size_t q = r.partition.size();
        for (size_t b = 0 ; b < q ; ++b)
            for (auto x : r.partition.block(b)) {
                if (x >= n) {
                    fail("block p" + std::to_string(b) + " lists element " + std::to_string(x) + " outside the universe");
                    continue;
                }
                if (owner[x] >= 0)
                    fail("element " + std::to_string(x) + " lies in p" + std::to_string(owner[x]) + " and p" + std::to_string(b));
                owner[x] = static_cast<int>(b);
            }
        for (uint64_t x = 0 ; x < n ; ++x)
            if (owner[x] < 0)
                fail("element " + std::to_string(x) + " is in no block");
        if (! v.pass)
            return v;

        v.checks.push_back("equitable");
        size_t lo = n, hi = 0;
        for (size_t b = 0 ; b < q ; ++b) {
            lo = std::min(lo, r.partition.block(b).size());
            hi = std::max(hi, r.partition.block(b).size());
        }
        if (q > 0 && hi - lo > 1)
            fail("partition is not equitable: block sizes range over " + std::to_string(lo) + ".." + std::to_string(hi));

        v.checks.push_back("cores inside their blocks");
        if (r.cores.size() != q)
            fail("report lists " + std::to_string(r.cores.size()) + " cores for " + std::to_string(q) + " blocks");
        for (size_t b = 0 ; b < r.cores.size() && b < q ; ++b)
            for (auto x : r.cores[b])
                if (x >= n || owner[x] != static_cast<int>(b))
                    fail("core of p" + std::to_string(b) + " contains " + std::to_string(x) + " from another block");

        v.checks.push_back("indivisible, per-cell defects, recorded defect table");
        std::map<std::pair<size_t, vector<int>>, uint64_t> recorded;
        for (auto & c : r.defects.cells)
            recorded[{c.relation, c.blocks}] = c.defect;
        for (size_t rel = 0 ; rel < sig.size() ; ++rel) {
            unsigned k = sig.arity(rel);
            std::map<vector<int>, std::pair<bool, Tuple>> first;
            std::map<vector<int>, uint64_t> defect;
            bool indivisible = true;
            all_tuples(n, k, [&] (const Tuple & t) {
                vector<int> key(k);
                for (unsigned i = 0 ; i < k ; ++i)
                    key[i] = owner[t[i]];
                bool val = nn.holds(rel, t);
                auto [it, fresh] = first.emplace(key, std::pair{val, t});
                if (! fresh && it->second.first != val && indivisible) {
                    fail("modified structure is not constant on cell " + name_cell(sig, rel, key) + ": "
                            + name_tuple(it->second.second) + " vs " + name_tuple(t));
                    indivisible = false;
                }
                if (ref.holds(rel, t) != val)
                    ++defect[key];
            });
            for (auto & [key, d] : defect) {
                BigInt size = 1;
                for (auto b : key)
                    size *= r.partition.block(static_cast<size_t>(b)).size();
                // d <= k * eps * size
                if (BigInt(d) * r.params.epsilon.den > BigInt(k) * r.params.epsilon.num * size)
                    fail("cell " + name_cell(sig, rel, key) + " defect " + std::to_string(d) + " exceeds "
                            + std::to_string(k) + "*" + r.params.epsilon.str() + "*" + size.str());
                auto it = recorded.find({rel, key});
                if (it == recorded.end() || it->second != d)
                    fail("recorded defect of cell " + name_cell(sig, rel, key) + " disagrees with the recount "
                            + std::to_string(d));
                if (it != recorded.end())
                    recorded.erase(it);
            }
        }
        for (auto & [key, d] : recorded)
            if (d != 0)
                fail("recorded defect of cell " + name_cell(sig, key.first, key.second) + " is "
                        + std::to_string(d) + " but the recount is 0");

        v.checks.push_back("quotient");
        if (r.quotient.size() != q || ! (r.quotient.signature() == sig))
            fail("quotient has the wrong size or signature");
        else
            for (size_t rel = 0 ; rel < sig.size() ; ++rel)
                all_tuples(q, sig.arity(rel), [&] (const Tuple & bt) {
                    Tuple reps(bt.size());
                    for (size_t i = 0 ; i < bt.size() ; ++i)
                        reps[i] = r.partition.block(bt[i]).front();
                    if (r.quotient.holds(rel, bt) != nn.holds(rel, reps))
                        fail("quotient disagrees with the modified structure at " + sig.name(rel) + name_tuple(bt));
                });

        v.checks.push_back("partition size at most eps^(-g-2)");
        {
            auto g2 = static_cast<unsigned>(r.params.g + 2);
            BigInt lhs = BigInt(q) * boost::multiprecision::pow(BigInt(r.params.epsilon.num), g2);
            BigInt rhs = boost::multiprecision::pow(BigInt(r.params.epsilon.den), g2);
            if (lhs > rhs)
                fail("|P| = " + std::to_string(q) + " exceeds eps^(-g-2)");
        }

        v.checks.push_back("cores excellent at eps_cert over the family of cores");
        if (! r.cores.empty() && r.cores.size() == q) {
            try {
                GoodnessEngine engine(ref, r.eps_cert, GoodSetFamily::of({}), r.cores);
                for (size_t b = 0 ; b < q ; ++b) {
                    auto idx = engine.index_of(r.cores[b]);
                    if (r.cores[b].empty() || ! idx || ! engine.excellence(*idx).good)
                        fail("core of p" + std::to_string(b) + " is not " + r.eps_cert.str() + "-excellent");
                }
            } catch (const Error & e) {
                fail(std::string("excellence re-certification failed: ") + e.what());
            }
        }

        if (r.almost_stable) {
            v.checks.push_back("global edit bound against the original structure");
            for (size_t rel = 0 ; rel < sig.size() ; ++rel) {
                unsigned k = sig.arity(rel);
                uint64_t diff = 0;
                all_tuples(n, k, [&] (const Tuple & t) {
                    if (m.holds(rel, t) != nn.holds(rel, t))
                        ++diff;
                });
                BigInt total = boost::multiprecision::pow(BigInt(n), k);
                if (BigInt(diff) * r.global_eps.den > BigInt(k) * r.global_eps.num * total)
                    fail("relation " + sig.name(rel) + " has " + std::to_string(diff) + " edits, over "
                            + std::to_string(k) + "*" + r.global_eps.str() + "*|M|^" + std::to_string(k));
            }

            v.checks.push_back("cleaned structure has no minimal branching embeddings");
            try {
                unsigned cap = r.catalog_cap ? r.catalog_cap
                    : static_cast<unsigned>(minimal_branching_size_bound(sig, r.params.tauhat));
                for (auto & c : minimal_branching_catalog(sig, r.params.tauhat, cap))
                    if (c.structure.size() <= n && count_induced_embeddings_fast(c.structure, ref) != 0) {
                        fail("cleaned structure still embeds a minimal branching structure of size "
                                + std::to_string(c.structure.size()));
                        break;
                    }
            } catch (const Error & e) {
                fail(std::string("catalog check failed: ") + e.what());
            }
        }
        return v;
    }
}

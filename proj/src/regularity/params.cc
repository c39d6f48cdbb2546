#include <srl/regularity/params.hh>

#include <functional>
#include <sstream>

using std::size_t;
using std::uint64_t;

namespace srl
{
    namespace
    {
        auto exact(double d) -> Rational
        {
            return Rational(d);
        }

        auto log_lo(const Rational & x) -> Rational { return exact(log2_bounds(x).lo); }
        auto log_hi(const Rational & x) -> Rational { return exact(log2_bounds(x).hi); }

        auto power_of_two(uint64_t e) -> BigInt
        {
            return BigInt(1) << static_cast<unsigned>(e);
        }

        // Smallest size found by doubling then bisection. Exact for conditions
        // that are monotone in the size.
        auto smallest(const std::function<bool (const BigInt &)> & holds, unsigned max_bits = 16384) -> std::optional<BigInt>
        {
            if (holds(BigInt(1)))
                return BigInt(1);
            BigInt hi = 2;
            while (! holds(hi)) {
                if (boost::multiprecision::msb(hi) > max_bits)
                    return std::nullopt;
                hi *= 2;
            }
            BigInt lo = hi / 2;     // fails
            while (hi - lo > 1) {
                BigInt mid = (lo + hi) / 2;
                if (holds(mid))
                    hi = mid;
                else
                    lo = mid;
            }
            return hi;
        }

        // floor(x) + 1, the least integer strictly above x
        auto above(const Rational & x) -> BigInt
        {
            auto f = floor_of(x) + 1;
            return f < 1 ? BigInt(1) : f;
        }

        auto constant_log_term(const Signature & sig) -> Rational
        {
            // log(2 |L| (q_L!))
            BigInt c = BigInt(2) * sig.size() * factorial(sig.max_arity());
            return log_hi(Rational(c));
        }

        auto fixed(std::string name, std::string formula, Rational lhs, Rational rhs, bool sat) -> Condition
        {
            Condition c{std::move(name), std::move(formula), std::move(lhs), std::move(rhs), sat, std::nullopt, false};
            return c;
        }
    }

    auto Params::satisfied() const -> bool
    {
        for (auto & c : conditions)
            if (! c.satisfied)
                return false;
        return true;
    }

    auto Params::partition_size_bound() const -> Rational
    {
        return pow(Rational(epsilon.den, epsilon.num), static_cast<unsigned>(g + 2));
    }

    auto compute_g(const Signature & sig, unsigned tauhat) -> uint64_t
    {
        if (tauhat == 0)
            throw Error("compute_g: tauhat must be positive");
        uint64_t c = 5ull * sig.n_l() * tauhat;
        if ((tauhat & (tauhat - 1)) == 0) {
            uint64_t lg = 0;
            while ((1u << lg) < tauhat)
                ++lg;
            return c * lg;
        }
        auto b = log2_bounds(BigInt(tauhat));
        auto lo = ceil_of(Rational(c) * exact(b.lo)), hi = ceil_of(Rational(c) * exact(b.hi));
        // the interval straddles an integer only if log is extremely close to a
        // rational with small denominator; take the larger value
        return static_cast<uint64_t>(hi > lo ? hi : lo);
    }

    auto derive_main(const Signature & sig, unsigned tauhat, const Fraction & eps, uint64_t g, uint64_t n) -> MainRecipe
    {
        MainRecipe r;
        Rational e = eps.to_rational();
        r.gamma1 = Rational(3, 2);
        Rational gg = pow(r.gamma1, static_cast<unsigned>(g));
        Rational p_lo = gg * (1 + e);
        BigInt p_hi = power_of_two(g + 1);
        r.p = floor_of((p_lo + Rational(p_hi)) / 2);
        bool p_ok = Rational(r.p) > p_lo && r.p < p_hi && r.p > 4;
        if (r.p < 5)
            r.p = 5;

        r.eps1 = e / ((Rational(r.p) + 2) * r.gamma1);
        r.zeta1 = r.eps1 * (r.gamma1 - 1);
        r.eta1 = pow(r.eps1 + r.zeta1, static_cast<unsigned>(g + 1));
        Rational eg = pow(r.eps1, static_cast<unsigned>(g));
        r.beta = eg - (r.eta1 + Rational(1, n == 0 ? 1 : n));
        r.m = ceil_of(Rational(n) * r.eta1);

        BigInt eps_limit = power_of_two((g + 1) * (g + 2));
        r.conditions.push_back(fixed("eps-main", "eps < 2^-((g+1)(g+2))", e, Rational(1, eps_limit),
                    e < Rational(1, eps_limit)));
        r.conditions.push_back(fixed("p", "4 < p and gamma1^g (1 + eps) < p < 2^(g+1)", Rational(r.p), p_lo, p_ok));

        auto add = [&] (std::string name, std::string formula, const std::function<std::pair<Rational, Rational> (const BigInt &)> & sides,
                std::optional<BigInt> minimal) {
            auto [lhs, rhs] = sides(BigInt(n));
            Condition c{std::move(name), std::move(formula), lhs, rhs, lhs > rhs, std::move(minimal), true};
            r.conditions.push_back(std::move(c));
        };

        Rational z2e2 = r.zeta1 * r.zeta1 * r.eta1 * r.eta1;
        Rational tau_term = Rational(power_of_two(tauhat + 1));
        Rational c_log = constant_log_term(sig);

        add("(1)", "k eta1 > 2",
                [&] (const BigInt & k) { return std::pair{Rational(k) * r.eta1, Rational(2)}; },
                above(2 / r.eta1));

        auto cond2 = [&] (const BigInt & k) {
            Rational ke = Rational(k) * r.eta1;
            Rational lhs = 2 * Rational(k) * z2e2 - tau_term * log_hi(ke);
            Rational rhs = r.eta1 * c_log - log_lo(r.eta1);
            return std::pair{lhs, rhs};
        };
        add("(2)", "2 k zeta1^2 eta1^2 - 2^(tauhat+1) log(k eta1) > eta1 log(2|L|(q_L!)) - log eta1", cond2,
                smallest([&] (const BigInt & k) { auto [l, h] = cond2(k); return l > h; }));

        Rational rhs3 = tau_term / (2 * z2e2);
        add("(3)", "k > 2^(tauhat+1) / (2 zeta1^2 eta1^2)",
                [&] (const BigInt & k) { return std::pair{Rational(k), rhs3}; }, above(rhs3));

        // gamma^g / (1 - eps gamma^g / (p+1) - 1/(eps1^g k)) < p
        Rational d = 1 - e * gg / (Rational(r.p) + 1) - gg / Rational(r.p);
        std::optional<BigInt> min4;
        if (d > 0)
            min4 = above(1 / (eg * d));
        add("(4)", "gamma1^g / (1 - eps gamma1^g / (p+1) - 1/(eps1^g k)) < p",
                [&] (const BigInt & k) {
                    Rational den = 1 - e * gg / (Rational(r.p) + 1) - 1 / (eg * Rational(k));
                    // stored as p > gamma^g / den; a non-positive denominator fails
                    if (den <= 0)
                        return std::pair{Rational(0), Rational(r.p)};
                    return std::pair{Rational(r.p), Rational(gg / den)};
                }, min4);

        Rational rhs5 = 1 / (eg * r.eps1);
        add("(5)", "k > eps1^(-g-1)",
                [&] (const BigInt & k) { return std::pair{Rational(k), rhs5}; }, above(rhs5));

        BigInt k = 0;
        bool all = true;
        for (auto & c : r.conditions) {
            if (! c.size_dependent)
                continue;
            if (! c.minimal_n) {
                all = false;
                break;
            }
            k = std::max(k, *c.minimal_n);
        }
        if (all)
            r.k_eps = k;
        return r;
    }

    auto compute_parameters(const Signature & sig, unsigned tauhat, const Fraction & eps, uint64_t n,
            const Rational & eta, const Rational & zeta, std::optional<uint64_t> g_override) -> Params
    {
        if (eps.num <= 0 || eps.num >= eps.den)
            throw Error("compute_parameters: epsilon must lie in (0, 1)");
        Params p;
        p.epsilon = eps;
        p.zeta = zeta;
        p.eta = eta;
        p.tauhat = tauhat;
        p.n_l = sig.n_l();
        p.n = n;
        p.g = g_override ? *g_override : compute_g(sig, tauhat);
        p.g_overridden = g_override.has_value();
        p.r = static_cast<uint64_t>(eps.den / eps.num);

        Rational e = eps.to_rational();
        Rational eg = pow(e, static_cast<unsigned>(p.g));
        Rational inv_n = n == 0 ? Rational(1) : Rational(1, n);
        p.beta = eg - (eta + inv_n);
        p.m = ceil_of(Rational(n) * eta);
        BigInt rg = boost::multiprecision::pow(BigInt(p.r), static_cast<unsigned>(p.g));

        p.conditions.push_back(fixed("eps-range", "0 < eps < 1/4", e, Rational(1, 4), e < Rational(1, 4)));
        Rational eps_bound = Rational(1, power_of_two(tauhat) * std::max(1u, p.n_l));
        p.conditions.push_back(fixed("eps-size", "eps < 2^-tauhat / n_L", e, eps_bound, e < eps_bound));

        auto m_of = [&] (const BigInt & k) { return ceil_of(Rational(k) * eta); };

        Condition cm{"m", "m = ceil(|M| eta) > 2", Rational(p.m), Rational(2), p.m > 2, std::nullopt, true};
        if (eta > 0)
            cm.minimal_n = above(2 / eta);
        p.conditions.push_back(cm);

        Condition cc{"(c)", "beta = eps^g - (eta + 1/|M|) > 0", p.beta, Rational(0), p.beta > 0, std::nullopt, true};
        if (eg > eta)
            cc.minimal_n = above(1 / (eg - eta));
        p.conditions.push_back(cc);

        Rational tau_term = Rational(power_of_two(tauhat + 1));
        Rational c_log = constant_log_term(sig);
        auto cond_d = [&] (const BigInt & k) -> std::pair<Rational, Rational> {
            BigInt m = m_of(k);
            if (m < 1 || eta <= 0)
                return {Rational(0), Rational(1)};
            Rational lhs = 2 * zeta * zeta * eta * Rational(m) - tau_term * log_hi(Rational(m));
            Rational rhs = eta * c_log - log_lo(eta);
            return {lhs, rhs};
        };
        auto [dl, dr] = cond_d(BigInt(n));
        Condition cd{"(d)", "2 zeta^2 eta m - 2^(tauhat+1) log m > eta log(2|L|(q_L!)) - log eta", dl, dr, dl > dr,
            std::nullopt, true};
        if (eta > 0 && zeta > 0)
            cd.minimal_n = smallest([&] (const BigInt & k) { auto [l, h] = cond_d(k); return l > h; });
        p.conditions.push_back(cd);

        // m r^g <= |M|, stored as |M| >= m r^g
        Condition cs{"staircase", "m floor(1/eps)^g <= |M|", Rational(n), Rational(p.m * rg), BigInt(n) >= p.m * rg,
            std::nullopt, true};
        if (eta > 0 && Rational(rg) * eta < 1)
            cs.minimal_n = smallest([&] (const BigInt & k) { return k >= m_of(k) * rg; });
        p.conditions.push_back(cs);

        p.main = derive_main(sig, tauhat, eps, p.g, n);
        return p;
    }

    auto format_condition(const Condition & c) -> std::string
    {
        std::ostringstream o;
        o << c.name << ": " << c.formula << " | lhs=" << to_string(c.lhs) << " rhs=" << to_string(c.rhs)
            << " | " << (c.satisfied ? "holds" : "fails");
        if (c.size_dependent) {
            if (c.minimal_n)
                o << " | minimal |M|=" << c.minimal_n->str();
            else
                o << " | minimal |M|=none";
        }
        return o.str();
    }
}

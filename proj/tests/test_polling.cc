#include <doctest.h>

#include <srl/core/rng.hh>
#include <srl/core/structure_ops.hh>
#include <srl/polling/goodness.hh>
#include <srl/polling/polling.hh>
#include <srl/toolkit/generators.hh>
#include <srl/toolkit/oracle.hh>

using namespace srl;

namespace
{
    auto k4() -> Structure
    {
        Structure m(binary_signature(), 4);
        for (Element a = 0 ; a < 4 ; ++a)
            for (Element b = 0 ; b < 4 ; ++b)
                if (a != b)
                    m.set(0, {a, b});
        return m;
    }

    auto edge_blowup(std::uint64_t p) -> Structure
    {
        Structure n(binary_signature(), 2);
        n.set(0, {0, 1});
        return blow_up(n, p);
    }

    const std::vector<unsigned> order0{0};
}

TEST_CASE("polling a unanimous set")
{
    auto m = k4();
    std::vector<PollArg> args{PollArg::of(ElementSet{0, 1}), PollArg::of(Element(3))};
    CHECK(eval_partial(m, 0, args, order0, Fraction(1, 10)) == Truth::top);

    Structure empty(binary_signature(), 4);
    CHECK(eval_partial(empty, 0, args, order0, Fraction(1, 10)) == Truth::bot);
}

TEST_CASE("polling the left side of a half-graph against b_2 is indeterminate")
{
    auto h = gen_half_graph(4);
    std::vector<PollArg> args{PollArg::of(ElementSet{0, 1, 2, 3}), PollArg::of(Element(6))};
    CHECK(eval_partial(h, 0, args, order0, Fraction(1, 5)) == Truth::indet);
}

TEST_CASE("epsilon outside (0, 1/4) is rejected")
{
    auto h = gen_half_graph(4);
    std::vector<PollArg> args{PollArg::of(ElementSet{0, 1, 2, 3}), PollArg::of(Element(6))};
    CHECK_THROWS_AS(eval_partial(h, 0, args, order0, Fraction(1, 4)), Error);
    CHECK_THROWS_AS(eval_partial(h, 0, args, order0, Fraction(0, 1)), Error);
}

TEST_CASE("malformed polling arguments")
{
    auto m = k4();
    std::vector<PollArg> args{PollArg::of(ElementSet{0, 1}), PollArg::of(Element(3))};
    std::vector<unsigned> element_pos{1}, repeated{0, 0}, none{};
    CHECK_THROWS_AS(eval_partial(m, 0, args, element_pos, Fraction(1, 10)), Error);
    CHECK_THROWS_AS(eval_partial(m, 0, args, repeated, Fraction(1, 10)), Error);
    std::vector<PollArg> empty_set{PollArg::of(ElementSet{}), PollArg::of(Element(3))};
    CHECK_THROWS_AS(eval_partial(m, 0, empty_set, order0, Fraction(1, 10)), Error);
    // a set-valued position missing from the order
    CHECK(eval_partial(m, 0, args, none, Fraction(1, 10)) == Truth::indet);
}

TEST_CASE("decisions use exact cross-multiplication")
{
    // 9 of 10 agree: 9/10 > 1 - 1/10 fails, > 1 - 1/9 holds
    CHECK(decide(9, 1, 10, Fraction(1, 10)) == Truth::indet);
    CHECK(decide(9, 1, 10, Fraction(1, 9)) == Truth::top);
    CHECK(decide(1, 9, 10, Fraction(1, 9)) == Truth::bot);
}

TEST_CASE("element-only polling equals the membership bit")
{
    for (std::uint64_t seed = 0 ; seed < 10 ; ++seed) {
        auto m = gen_random(Signature({{"E", 2}, {"R", 3}}), 4 + seed % 5, 0.5, seed);
        for (std::size_t rel = 0 ; rel < 2 ; ++rel) {
            Tuple t(m.arity(rel), 0);
            do {
                std::vector<PollArg> args;
                for (auto e : t)
                    args.push_back(PollArg::of(e));
                std::vector<unsigned> no_order;
                auto v = eval_partial(m, rel, args, no_order, Fraction(1, 10));
                CHECK((v == Truth::top) == m.holds(rel, t));
                CHECK(v != Truth::indet);
            } while (next_tuple(t, m.size()));
        }
    }
}

TEST_CASE("singletons are 1-good")
{
    auto m = gen_random(binary_signature(), 7, 0.5, 3);
    for (Element x = 0 ; x < 7 ; ++x)
        CHECK(is_good(m, 0, {x}, 1, Fraction(1, 10), GoodSetFamily::all_subsets()).good);
}

TEST_CASE("half-graph left side is not 1-good")
{
    auto h = gen_half_graph(4);
    ElementSet left{0, 1, 2, 3};
    Fraction eps(1, 5);
    auto cert = is_good(h, 0, left, 1, eps, GoodSetFamily::all_subsets());
    CHECK(! cert.good);
    REQUIRE(cert.failure);
    CHECK(recheck_failure(h, left, *cert.failure, eps));
    // b_2 is a witness as well; the search reports the first failing element
    PollContext b2;
    b2.relation = 0;
    b2.level = 1;
    b2.positions = {0};
    b2.elements = {0, 6};
    CHECK(recheck_failure(h, left, b2, eps));

    auto ex = is_excellent(h, left, eps, GoodSetFamily::all_subsets());
    CHECK(! ex.good);
    CHECK(! oracle_excellent(h, left, eps));
}

TEST_CASE("a fiber of a blown-up edge is 2-good")
{
    auto m = edge_blowup(3);
    ElementSet part{0, 1, 2};
    Fraction eps(1, 5);
    CHECK(is_good(m, 0, part, 2, eps, GoodSetFamily::all_subsets()).good);
    CHECK(is_excellent(m, part, eps, GoodSetFamily::all_subsets()).good);
    CHECK(oracle_excellent(m, part, eps));
}

TEST_CASE("total relation: the universe is excellent")
{
    Structure m(Signature({{"R", 3}}), 5);
    Tuple t(3, 0);
    do
        m.set(0, t);
    while (next_tuple(t, 5));
    CHECK(is_excellent(m, range_set(0, 5), Fraction(1, 10), GoodSetFamily::all_subsets()).good);
    CHECK(is_excellent(m, range_set(0, 5), Fraction(1, 10), GoodSetFamily::of({})).good);
}

TEST_CASE("goodness level range is checked")
{
    auto m = k4();
    CHECK_THROWS_AS(is_good(m, 0, {0}, 0, Fraction(1, 10), GoodSetFamily::all_subsets()), Error);
    CHECK_THROWS_AS(is_good(m, 0, {0}, 3, Fraction(1, 10), GoodSetFamily::all_subsets()), Error);
    CHECK_THROWS_AS(is_excellent(m, {}, Fraction(1, 10), GoodSetFamily::all_subsets()), Error);
    CHECK_THROWS_AS(is_excellent(gen_random(binary_signature(), 15, 0.5, 1), {0}, Fraction(1, 10),
                GoodSetFamily::all_subsets()), Error);
}

TEST_CASE("goodness is monotone in level and epsilon")
{
    for (std::uint64_t seed = 0 ; seed < 12 ; ++seed) {
        auto m = gen_blowup_noise(gen_random(binary_signature(), 2, 0.5, seed), 3, 0.1, seed);
        GoodnessEngine small(m, Fraction(1, 10), GoodSetFamily::all_subsets());
        GoodnessEngine large(m, Fraction(1, 5), GoodSetFamily::all_subsets());
        for (std::size_t idx = 0 ; idx < small.pool().size() ; ++idx) {
            auto l = small.level(idx, 0);
            if (l >= 2)
                CHECK(small.goodness(idx, 0, 1).good);
            CHECK(large.level(idx, 0) >= l);
        }
    }
}

TEST_CASE("engine levels agree with the oracle")
{
    for (std::uint64_t seed = 0 ; seed < 30 ; ++seed) {
        std::uint64_t n = 3 + seed % 4;
        auto m = gen_random(binary_signature(), n, 0.3 + 0.02 * seed, seed);
        for (auto eps : {Fraction(1, 10), Fraction(1, 5)}) {
            auto oracle = oracle_good_levels(m, 0, eps);
            GoodnessEngine engine(m, eps, GoodSetFamily::all_subsets());
            for (std::uint64_t mask = 1 ; mask < (std::uint64_t{1} << n) ; ++mask) {
                ElementSet s;
                for (Element e = 0 ; e < n ; ++e)
                    if ((mask >> e) & 1)
                        s.push_back(e);
                CHECK(engine.level(*engine.index_of(s), 0) == oracle[mask]);
            }
        }
    }
}

TEST_CASE("family mode uses the pool and the tested set")
{
    auto m = edge_blowup(4);
    GoodnessEngine engine(m, Fraction(1, 10), GoodSetFamily::of({{0, 1, 2, 3}, {4, 5, 6, 7}}));
    CHECK(engine.pool().size() == 2);
    CHECK(engine.excellence(0).good);
    CHECK(engine.excellence(1).good);
    // mixing the fibers breaks goodness
    CHECK(! is_excellent(m, {0, 1, 4, 5}, Fraction(1, 10), GoodSetFamily::of({})).good);
}

TEST_CASE("sampled family is reproducible")
{
    auto m = gen_random(binary_signature(), 10, 0.5, 2);
    GoodnessEngine a(m, Fraction(1, 10), GoodSetFamily::sampled({}, 20, 9));
    GoodnessEngine b(m, Fraction(1, 10), GoodSetFamily::sampled({}, 20, 9));
    CHECK(a.pool() == b.pool());
    CHECK(! a.pool().empty());
}

TEST_CASE("dissent count")
{
    auto m = edge_blowup(10);
    ElementSet p0 = range_set(0, 10), p1 = range_set(10, 20);
    Fraction eps(1, 5);
    auto d = dissent_count(m, 0, {p0, p1}, {}, {0, 1}, eps);
    CHECK(d.value == Truth::top);
    CHECK(d.dissenters == 0);

    // two flips in different rows, far fewer than eps * 100
    auto noisy = m;
    noisy.flip(0, Tuple{0, 15});
    noisy.flip(0, Tuple{3, 18});
    d = dissent_count(noisy, 0, {p0, p1}, {}, {0, 1}, eps);
    CHECK(d.value == Truth::top);
    CHECK(d.dissenters == 2);
    CHECK(dissent_within_bound(d, 2, eps));

    auto h = gen_half_graph(4);
    d = dissent_count(h, 0, {{0, 1, 2, 3}}, {6}, {0, 1}, eps);
    CHECK(d.value == Truth::indet);
    CHECK(d.flagged);
}

TEST_CASE("unraveling order does not matter on blow-up fibers")
{
    auto m = edge_blowup(4);
    auto r = check_unraveling_invariance(m, 0, {{0, 1, 2, 3}, {4, 5, 6, 7}}, {}, Fraction(1, 10));
    CHECK(r.invariant);
    CHECK(r.evaluations.size() == 2);

    // half-graph sides as a negative control
    auto h = gen_half_graph(4);
    auto bad = check_unraveling_invariance(h, 0, {{0, 1, 2, 3}, {4, 5, 6, 7}}, {}, Fraction(1, 5));
    CHECK(! bad.invariant);
}

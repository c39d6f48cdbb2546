#include <doctest.h>

#include <srl/core/rng.hh>
#include <srl/core/structure_ops.hh>
#include <srl/stability/density.hh>
#include <srl/stepfun/stepfun.hh>
#include <srl/toolkit/generators.hh>

using namespace srl;

namespace
{
    auto edge2() -> Structure
    {
        Structure n(binary_signature(), 2);
        n.set(0, {0, 1});
        return n;
    }

    auto symmetric_complete(std::uint64_t n) -> Structure
    {
        Structure m(binary_signature(), n);
        for (Element a = 0 ; a < n ; ++a)
            for (Element b = 0 ; b < n ; ++b)
                if (a != b)
                    m.set(0, {a, b});
        return m;
    }

    auto binary_table(std::uint64_t n, std::uint64_t bits) -> Structure
    {
        Structure m(binary_signature(), n);
        for (Element a = 0 ; a < n ; ++a)
            for (Element b = 0 ; b < n ; ++b)
                if ((bits >> (a * n + b)) & 1)
                    m.set(0, {a, b});
        return m;
    }
}

TEST_CASE("borel blow-up measures")
{
    auto s = borel_blowup(edge2());
    CHECK(s.grid() == 2);
    CHECK(s.measure(0) == Rational(1, 4));
    CHECK(borel_blowup(Structure(binary_signature(), 3)).measure(0) == 0);
}

TEST_CASE("d1 examples")
{
    auto s = borel_blowup(edge2());
    CHECK(d1(s, s) == 0);
    CHECK(d1(borel_blowup(symmetric_complete(2)), borel_blowup(Structure(binary_signature(), 2))) == Rational(1, 2));
    auto other = edge2();
    other.set(0, {1, 1});
    CHECK(d1(s, borel_blowup(other)) == Rational(1, 4));
    // different grids
    CHECK(d1(s, borel_blowup(blow_up(edge2(), 3))) == 0);
    CHECK_THROWS_AS(d1(s, borel_blowup(Structure(Signature({{"R", 3}}), 2))), Error);
}

TEST_CASE("d1 equals normalized edit distance on equal sizes")
{
    for (std::uint64_t n = 1 ; n <= 2 ; ++n)
        for (std::uint64_t a = 0 ; a < (1u << (n * n)) ; ++a)
            for (std::uint64_t b = 0 ; b < (1u << (n * n)) ; ++b) {
                auto x = binary_table(n, a), y = binary_table(n, b);
                CHECK(d1(borel_blowup(x), borel_blowup(y)) == edit_distance(x, y).normalized);
            }
    for (std::uint64_t seed = 0 ; seed < 30 ; ++seed) {
        Signature sig({{"E", 2}, {"R", 3}});
        auto x = gen_random(sig, 4, 0.5, seed), y = gen_random(sig, 4, 0.5, seed + 1000);
        CHECK(d1(borel_blowup(x), borel_blowup(y)) == edit_distance(x, y).normalized);
    }
}

TEST_CASE("d1 is a metric on random step structures")
{
    Rng rng(4);
    for (int i = 0 ; i < 40 ; ++i) {
        auto g = [&] { return gen_random(binary_signature(), 1 + rng.below(8), 0.5, rng.next()); };
        auto a = borel_blowup(g()), b = borel_blowup(g()), c = borel_blowup(g());
        CHECK(d1(a, b) == d1(b, a));
        CHECK(d1(a, c) <= d1(a, b) + d1(b, c));
        CHECK((d1(a, b) == 0) == (canonicalize(a) == canonicalize(b)));
    }
}

TEST_CASE("canonicalize")
{
    auto s = borel_blowup(blow_up(edge2(), 2));
    auto c = canonicalize(s);
    CHECK(c.grid() == 2);
    CHECK(c == borel_blowup(edge2()));
    CHECK(d1(s, c) == 0);

    auto aperiodic = borel_blowup(gen_half_graph(3));
    CHECK(canonicalize(aperiodic) == aperiodic);
    CHECK(canonicalize(canonicalize(s)) == canonicalize(s));

    for (std::uint64_t seed = 0 ; seed < 20 ; ++seed) {
        auto n = gen_random(binary_signature(), 1 + seed % 4, 0.5, seed);
        auto p = 1 + seed % 3;
        CHECK(canonicalize(borel_blowup(blow_up(n, p))) == canonicalize(borel_blowup(n)));
    }
}

TEST_CASE("grid approximation")
{
    auto s = borel_blowup(gen_random(binary_signature(), 4, 0.5, 3));
    auto same = grid_approximate(s, 4);
    CHECK(same.achieved_d1 == 0);
    CHECK(grid_approximate(s, 8).achieved_d1 == 0);

    // coarse cell (0,0) is 3/4 full
    Structure fine(binary_signature(), 4);
    fine.set(0, {0, 0});
    fine.set(0, {0, 1});
    fine.set(0, {1, 0});
    auto g = grid_approximate(borel_blowup(fine), 2);
    CHECK(g.structure.holds(0, {0, 0}));
    CHECK(g.structure.count(0) == 1);
    CHECK(g.achieved_d1 == Rational(1, 16));

    // exactly half full rounds to absent
    Structure half(binary_signature(), 2);
    half.set(0, {0, 0});
    half.set(0, {0, 1});
    CHECK(grid_approximate(borel_blowup(half), 1).structure.count(0) == 0);
}

TEST_CASE("step densities")
{
    Structure vertex(binary_signature(), 1);
    CHECK(t_ind_step(vertex, borel_blowup(symmetric_complete(3))) == 1);
    // on a step structure with loops every diagonal point carries the edge
    Structure loops(binary_signature(), 2);
    loops.set(0, {0, 0});
    CHECK(t_ind_step(vertex, borel_blowup(loops)) == Rational(1, 2));

    // both points in one cell land on the (empty) diagonal cell
    auto k2 = symmetric_complete(2);
    CHECK(t_ind_step(k2, borel_blowup(symmetric_complete(3))) == Rational(2, 3));
    CHECK(t_ind(k2, symmetric_complete(3)).value == 1);

    // injective embeddings are valid cell assignments
    for (std::uint64_t seed = 0 ; seed < 50 ; ++seed) {
        auto f = gen_random(binary_signature(), 1 + seed % 3, 0.5, seed);
        auto n = gen_random(binary_signature(), 1 + seed % 6, 0.5, seed + 500);
        if (f.size() > n.size())
            continue;
        auto finite = t_ind(f, n).value;
        Rational scale(falling_factorial(n.size(), f.size()),
                boost::multiprecision::pow(BigInt(n.size()), static_cast<unsigned>(f.size())));
        CHECK(finite * scale <= t_ind_step(f, borel_blowup(n)));
    }
}

TEST_CASE("equitable lift")
{
    auto m = blow_up(edge2(), 3);
    auto l = lift_equitable(m, Partition::fibers({3, 3}));
    CHECK(l.achieved_d1 == 0);
    CHECK(l.within_bound);

    // |M| = 5, two blocks
    Structure base = edge2();
    auto m5 = blow_up(base, {3, 2});
    auto l5 = lift_equitable(m5, Partition::fibers({3, 2}));
    CHECK(l5.bound == Rational(1, 5));
    CHECK(l5.achieved_d1 <= Rational(1, 5));
    CHECK(l5.achieved_d1 > 0);
    CHECK(is_indivisible(l5.lifted.cells, Partition(l5.lifted.grid(), l5.cell_blocks)).indivisible);
    CHECK(l5.cell_blocks[0].size() == l5.cell_blocks[1].size());

    auto single = lift_equitable(Structure(binary_signature(), 5), Partition(5, {range_set(0, 5)}));
    CHECK(single.achieved_d1 == 0);
    CHECK_THROWS_AS(lift_equitable(gen_half_graph(2), Partition(4, {{0, 1}, {2, 3}})), Error);
}

TEST_CASE("equitable lift can exceed the stated bound for ternary relations")
{
    // parity of the number of coordinates in block 1
    Structure m(Signature({{"R", 3}}), 3);
    Tuple t(3, 0);
    do {
        unsigned ones = 0;
        for (auto e : t)
            ones += e == 2;
        if (ones % 2)
            m.set(0, t);
    } while (next_tuple(t, 3));
    auto l = lift_equitable(m, Partition(3, {{0, 1}, {2}}));
    CHECK(l.bound == Rational(1, 3));
    CHECK(l.achieved_d1 == Rational(19, 54));
    CHECK(! l.within_bound);
}

TEST_CASE("step delta branching")
{
    auto catalog = minimal_branching_catalog(binary_signature(), 1, 4);
    Structure total(binary_signature(), 3);
    for (Element a = 0 ; a < 3 ; ++a)
        for (Element b = 0 ; b < 3 ; ++b)
            total.set(0, {a, b});
    CHECK(! has_delta_branching_step(borel_blowup(total), Rational(1, 1000), catalog).holds);
    CHECK(has_delta_branching_step(borel_blowup(gen_half_graph(4)), Rational(1, 1000), catalog).holds);
    CHECK(has_delta_branching_step(borel_blowup(gen_half_graph(4)), Rational(1, 1000), 1u).holds);
    CHECK(has_delta_branching_step(borel_blowup(total), Rational(0), catalog).holds);
}

TEST_CASE("step file round trip")
{
    auto s = borel_blowup(gen_random(binary_signature(), 5, 0.4, 9));
    auto text = serialize_step(s);
    CHECK(text.find("grid 5") != std::string::npos);
    CHECK(parse_step(text) == s);
}

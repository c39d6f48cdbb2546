#include <doctest.h>

#include <srl/core/structure_ops.hh>
#include <srl/mesa/mesa.hh>
#include <srl/mesa/ramsey.hh>
#include <srl/mesa/yellow.hh>
#include <srl/stability/witness.hh>
#include <srl/toolkit/generators.hh>
#include <srl/toolkit/oracle.hh>

using namespace srl;

namespace
{
    auto total(std::uint64_t n) -> Structure
    {
        Structure m(binary_signature(), n);
        for (Element a = 0 ; a < n ; ++a)
            for (Element b = 0 ; b < n ; ++b)
                m.set(0, {a, b});
        return m;
    }

    auto edge_blowup(std::uint64_t p) -> Structure
    {
        Structure n(binary_signature(), 2);
        n.set(0, {0, 1});
        return blow_up(n, p);
    }

    auto base4() -> Structure
    {
        Structure n(binary_signature(), 4);
        for (auto [a, b] : {std::pair{0u, 1u}, {1u, 2u}, {2u, 3u}, {3u, 0u}, {1u, 1u}, {2u, 0u}})
            n.set(0, {a, b});
        return n;
    }

    auto mesa_sets_family(const Mesa & y) -> GoodSetFamily
    {
        std::vector<ElementSet> pool(y.sets.begin(), y.sets.end());
        for (auto & r : y.rocks)
            for (std::size_t p = 0 ; p < r.b.size() ; ++p)
                if (p != r.position)
                    pool.push_back(r.b[p]);
        return GoodSetFamily::of(pool);
    }

    // Leaves 0..7, parameters 8..14 (one per node of a height-3 tree). The node
    // at index i uses relation labels[i]; the other relation stays empty.
    auto labelled_tree_mesa(const std::vector<unsigned> & labels) -> std::pair<Structure, Mesa>
    {
        Structure m(Signature({{"E", 2}, {"F", 2}}), 15);
        Mesa y;
        y.eps = Fraction(1, 5);
        y.height = 3;
        y.sizes = {8, 4, 2, 1};
        y.family = GoodSetFamily::of({});
        for (unsigned d = 0 ; d <= 3 ; ++d)
            for (std::uint64_t v = 0 ; v < (1u << d) ; ++v) {
                ElementSet s;
                for (std::uint64_t eta = v << (3 - d) ; eta < (v + 1) << (3 - d) ; ++eta)
                    s.push_back(static_cast<Element>(eta));
                y.sets.push_back(s);
                if (d == 3)
                    continue;
                std::size_t i = node_index(d, v);
                Element b = static_cast<Element>(8 + i);
                for (auto eta : s)
                    if ((eta >> (2 - d)) & 1)
                        m.set(labels[i], {eta, b});
                Rock r;
                r.a = s;
                r.relation = labels[i];
                r.position = 0;
                r.b = {{}, {b}};
                r.beta = {1};
                y.rocks.push_back(r);
                y.rock_pool.push_back(0);
            }
        return {m, y};
    }
}

TEST_CASE("staircases")
{
    auto s = make_staircase(Fraction(1, 4), 4, 2);
    CHECK(s.m == std::vector<std::uint64_t>{64, 16, 4});
    CHECK(s.r == 4);
    CHECK(make_staircase(Fraction(1, 5), 7, 0).m == std::vector<std::uint64_t>{7});
    CHECK_THROWS_AS(make_staircase(Fraction(3, 5), 4, 2), Error);
    auto t = make_staircase(Fraction(3, 10), 2, 3);
    CHECK(t.m == std::vector<std::uint64_t>{54, 18, 6, 2});
    CHECK(t.suffix(2).m == std::vector<std::uint64_t>{6, 2});
}

TEST_CASE("find_rock")
{
    Fraction eps(1, 5);
    CHECK(! find_rock(total(6), range_set(0, 6), eps, 2, GoodSetFamily::of({})));

    auto h = gen_half_graph(8);
    auto left = range_set(0, 8);
    auto split = find_rock(h, left, eps, 2, GoodSetFamily::of({}));
    REQUIRE(split);
    CHECK(split->bot.size() == 2);
    CHECK(split->top.size() == 2);
    for (auto x : split->bot)
        CHECK(split->rock.eval(h, x, eps) == Truth::bot);
    for (auto x : split->top)
        CHECK(split->rock.eval(h, x, eps) == Truth::top);

    auto b = edge_blowup(5);
    auto fibers = GoodSetFamily::of({range_set(0, 5), range_set(5, 10)});
    CHECK(! find_rock(b, range_set(0, 5), eps, 1, fibers));

    CHECK_THROWS_AS(find_rock(h, left, eps, 1, GoodSetFamily::of({})), Error);
}

TEST_CASE("mesa on a constant relation has height 0")
{
    auto m = total(12);
    auto st = make_staircase(Fraction(1, 5), 2, 1);
    auto g = grow_mesa(m, range_set(0, 12), Fraction(1, 5), st, GoodSetFamily::of({}));
    REQUIRE(g.cap);
    CHECK(g.mesa.height == 0);
    CHECK(g.cap->set == range_set(0, 10));
    CHECK(validate_mesa(m, g.mesa).empty());
    CHECK_THROWS_AS(grow_mesa(m, range_set(0, 5), Fraction(1, 5), st, GoodSetFamily::of({})), Error);
}

TEST_CASE("half-graph mesa splits and yields a branching witness")
{
    auto h = gen_half_graph(16);
    Fraction eps(1, 5);
    auto st = make_staircase(eps, 1, 1);
    auto g = grow_mesa(h, range_set(0, 16), eps, st, GoodSetFamily::of({}));
    REQUIRE(g.cap);
    CHECK(g.mesa.height >= 1);
    CHECK(validate_mesa(h, g.mesa).empty());
    CHECK(st.contains(g.cap->set.size()));
    CHECK(is_excellent(h, g.cap->set, eps, mesa_sets_family(g.mesa)).good);

    auto w = mesa_to_branching(h, g.mesa);
    CHECK(check_branching_witness(h, w) == "");
    CHECK(w.height == g.mesa.height);
    CHECK(dump_mesa(h, g.mesa).find("rock E") != std::string::npos);
}

TEST_CASE("blow-up mesa caps on a fiber")
{
    auto m = edge_blowup(5);
    Fraction eps(1, 5);
    auto st = make_staircase(eps, 1, 1);
    auto g = grow_mesa(m, range_set(0, 10), eps, st, GoodSetFamily::of({}));
    REQUIRE(g.cap);
    CHECK(g.mesa.height <= 1);
    CHECK(g.cap->set == range_set(0, 5));
    CHECK(oracle_excellent(m, g.cap->set, eps));
}

TEST_CASE("a corrupted mesa fails validation")
{
    auto h = gen_half_graph(16);
    Fraction eps(1, 5);
    auto g = grow_mesa(h, range_set(0, 16), eps, make_staircase(eps, 1, 1), GoodSetFamily::of({}));
    REQUIRE(g.mesa.height >= 1);
    auto bad = g.mesa;
    std::swap(bad.sets[1], bad.sets[2]);
    CHECK(! validate_mesa(h, bad).empty());
}

TEST_CASE("grown mesas validate on random structures")
{
    Fraction eps(1, 5);
    auto st = make_staircase(eps, 1, 2);
    for (std::uint64_t seed = 0 ; seed < 8 ; ++seed) {
        auto m = gen_blowup_noise(gen_random(binary_signature(), 3, 0.5, seed), 10, 0.05, seed);
        auto g = grow_mesa(m, range_set(0, 30), eps, st, GoodSetFamily::of({}));
        CHECK(validate_mesa(m, g.mesa).empty());
        if (g.cap) {
            CHECK(st.contains(g.cap->set.size()));
            CHECK(is_excellent(m, g.cap->set, eps, mesa_sets_family(g.mesa)).good);
        }
    }
}

TEST_CASE("extract_excellent")
{
    Fraction eps(1, 5);
    auto t = total(10);
    auto g = extract_excellent(t, range_set(0, 10), eps, make_staircase(eps, 2, 1), GoodSetFamily::of({}));
    REQUIRE(g.cap);
    CHECK(g.cap->set.size() == 10);

    auto b = blow_up(base4(), 25);
    std::vector<ElementSet> fibers;
    for (Element i = 0 ; i < 4 ; ++i)
        fibers.push_back(range_set(25 * i, 25 * i + 25));
    auto st = make_staircase(eps, 1, 2);
    g = extract_excellent(b, range_set(0, 100), eps, st, GoodSetFamily::of({}));
    REQUIRE(g.cap);
    CHECK(st.contains(g.cap->set.size()));
    CHECK(is_excellent(b, g.cap->set, eps, GoodSetFamily::of(fibers)).good);

    auto h = gen_half_graph(16);
    g = extract_excellent(h, range_set(0, 32), eps, st, GoodSetFamily::of({}));
    REQUIRE(g.cap);
    CHECK(st.contains(g.cap->set.size()));
    REQUIRE(g.cap->set.size() <= 12);
    auto restricted = induced_substructure(h, g.cap->set);
    CHECK(oracle_excellent(restricted, range_set(0, static_cast<Element>(g.cap->set.size())), eps));
}

TEST_CASE("excellent partition")
{
    Fraction eps(1, 5);
    auto m = edge_blowup(5);
    auto p = excellent_partition(m, eps, make_staircase(eps, 5, 0), GoodSetFamily::of({}));
    CHECK(p.partition.size() == 2);
    CHECK(p.leftover.empty());
    CHECK(is_indivisible(m, p.partition).indivisible);

    auto t = total(8);
    p = excellent_partition(t, eps, make_staircase(eps, 8, 0), GoodSetFamily::of({}));
    CHECK(p.partition.size() == 1);
    CHECK(p.leftover.empty());
    CHECK_THROWS_AS(excellent_partition(t, eps, make_staircase(eps, 9, 0), GoodSetFamily::of({})), Error);

    // peeling leaves fewer than m_0 behind; descending leaves fewer than m_g
    auto b = gen_blowup_noise(base4(), 7, 0.0, 1);
    auto st = make_staircase(eps, 1, 1);
    p = excellent_partition(b, eps, st, GoodSetFamily::of({}));
    CHECK(p.leftover.size() < 5);
    for (auto & blk : p.partition.blocks())
        CHECK(st.contains(blk.size()));
    PartitionOptions all;
    all.descend = true;
    p = excellent_partition(b, eps, st, GoodSetFamily::of({}), all);
    CHECK(p.leftover.empty());
}

TEST_CASE("monochromatic subtrees")
{
    auto flat = LabeledTree::from_labels(4, 1, std::vector<unsigned>(15, 0));
    auto e = monochromatic_subtree(flat, 3);
    REQUIRE(e);
    CHECK(e->levels == std::vector<unsigned>{0, 1, 2});
    CHECK(check_subtree_embedding(flat, *e) == "");

    LabeledTree alternating{21, 2, [] (const TreeNode & n) { return n.depth % 2; }};
    e = monochromatic_subtree(alternating, 2);
    REQUIRE(e);
    CHECK(check_subtree_embedding(alternating, *e) == "");
    CHECK(e->levels[1] - e->levels[0] == 2);

    LabeledTree tiny{1, 2, [] (const TreeNode &) { return 0u; }};
    CHECK(! monochromatic_subtree(tiny, 2));

    CHECK_THROWS_AS(LabeledTree::from_labels(3, 2, std::vector<unsigned>(6, 0)), Error);
    CHECK(ramsey_height(2, 2) == 21);

    for (std::uint64_t seed = 0 ; seed < 5 ; ++seed) {
        auto t = LabeledTree::random(ramsey_height(3, 3), 3, seed);
        auto r = monochromatic_subtree(t, 3);
        REQUIRE(r);
        CHECK(check_subtree_embedding(t, *r) == "");
        // corrupting an image breaks the recheck
        auto bad = *r;
        std::swap(bad.images[3], bad.images[4]);
        CHECK(check_subtree_embedding(t, bad) != "");
    }
}

TEST_CASE("constant substructure of a two-label mesa")
{
    // root E; depth 1: F, E; depth 2: E, F, F, E
    auto [m, y] = labelled_tree_mesa({0, 1, 0, 0, 1, 1, 0});
    REQUIRE(validate_mesa(m, y).empty());
    auto c = constant_substructure(m, y, 2);
    REQUIRE(c.mesa);
    CHECK(! c.height_sufficient);
    CHECK(c.required_height == 41);
    CHECK(c.mesa->height == 2);
    CHECK(validate_mesa(m, *c.mesa).empty());
    for (auto & r : c.mesa->rocks)
        CHECK(r.relation == 0);

    auto w = mesa_to_branching(m, *c.mesa);
    CHECK(check_branching_witness(m, w) == "");
    CHECK(w.height == 2);

    // the original mixes relations
    CHECK_THROWS_AS(mesa_to_branching(m, y), Error);

    auto [m2, same] = labelled_tree_mesa({0, 0, 0, 0, 0, 0, 0});
    auto c2 = constant_substructure(m2, same, 2);
    REQUIRE(c2.mesa);
    CHECK(c2.mesa->height == 3);
    CHECK(! c2.embedding);
}

TEST_CASE("constant substructure and branching preconditions")
{
    auto h = gen_half_graph(16);
    Fraction eps(1, 5);
    auto g = grow_mesa(h, range_set(0, 16), eps, make_staircase(eps, 1, 1), GoodSetFamily::of({}));
    REQUIRE(g.mesa.height == 1);
    auto c = constant_substructure(h, g.mesa, 2);
    CHECK(! c.mesa);
    CHECK(c.diagnostic.find("below the target height") != std::string::npos);

    Mesa flat;
    flat.height = 0;
    flat.eps = eps;
    flat.sets = {range_set(0, 4)};
    CHECK_THROWS_AS(mesa_to_branching(h, flat), Error);

    // 2^3 * 1 * 1/5 >= 1
    auto [m, y] = labelled_tree_mesa({0, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(mesa_to_branching(m, y), Error);
}

#include <doctest.h>

#include <srl/core/iso.hh>
#include <srl/core/partition.hh>
#include <srl/core/rational.hh>
#include <srl/core/rng.hh>
#include <srl/core/structure.hh>
#include <srl/core/structure_io.hh>
#include <srl/core/structure_ops.hh>
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
}

TEST_CASE("parse a single tuple")
{
    auto m = parse_structure("signature E/2\nuniverse 3\nE 0 1");
    CHECK(m.size() == 3);
    CHECK(m.count(0) == 1);
    CHECK(m.holds(0, {0, 1}));
    CHECK(! m.holds(0, {1, 0}));
}

TEST_CASE("parse an empty relation")
{
    auto m = parse_structure("signature E/2\nuniverse 3\n");
    CHECK(m.size() == 3);
    CHECK(m.count(0) == 0);
}

TEST_CASE("parse errors name the line")
{
    try {
        parse_structure("signature E/2\nuniverse 3\nE 0 3\n");
        FAIL("no error");
    }
    catch (const ParseError & e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("element 3 out of range") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_structure("signature E/2\nuniverse 3\nE 0\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("universe 3\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("signature E/2\nuniverse x\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("signature E/2\nuniverse 3\nF 0 1\n"), ParseError);
}

TEST_CASE("serializer and parser round trip")
{
    Signature sig({{"E", 2}, {"R", 3}});
    for (std::uint64_t seed = 0 ; seed < 20 ; ++seed) {
        auto m = gen_random(sig, 5, 0.3, seed);
        auto text = serialize_structure(m);
        auto back = parse_structure(text);
        CHECK(back == m);
        CHECK(serialize_structure(back) == text);
    }
    // comments and unsorted tuples canonicalize
    auto m = parse_structure("# hi\nsignature E/2\nuniverse 3\nE 2 1\n\nE 0 1 # trailing\n");
    CHECK(serialize_structure(m) == "signature E/2\nuniverse 3\nE 0 1\nE 2 1\n");
}

TEST_CASE("edit distance")
{
    auto m = edge2();
    Structure empty(binary_signature(), 2);
    auto d = edit_distance(m, m);
    CHECK(d.counts[0] == 0);
    d = edit_distance(m, empty);
    CHECK(d.counts[0] == 1);
    CHECK(d.normalized == Rational(1, 4));

    Structure full(binary_signature(), 3), none(binary_signature(), 3);
    for (Element a = 0 ; a < 3 ; ++a)
        for (Element b = 0 ; b < 3 ; ++b)
            full.set(0, {a, b});
    CHECK(edit_distance(full, none).counts[0] == 9);

    CHECK_THROWS_AS(edit_distance(full, m), Error);
}

TEST_CASE("edit distance is a metric on random triples")
{
    for (std::uint64_t seed = 0 ; seed < 100 ; ++seed) {
        std::uint64_t n = 2 + seed % 7;
        auto a = gen_random(binary_signature(), n, 0.5, 3 * seed);
        auto b = gen_random(binary_signature(), n, 0.5, 3 * seed + 1);
        auto c = gen_random(binary_signature(), n, 0.5, 3 * seed + 2);
        auto ab = edit_distance(a, b).counts[0], bc = edit_distance(b, c).counts[0], ac = edit_distance(a, c).counts[0];
        CHECK((ab == 0) == (a == b));
        CHECK(ab == edit_distance(b, a).counts[0]);
        CHECK(ac <= ab + bc);
    }
}

TEST_CASE("blow-up and indivisibility")
{
    auto n = edge2();
    auto m = blow_up(n, {3, 3});
    CHECK(m.size() == 6);
    CHECK(m.count(0) == 9);
    auto fibers = Partition::fibers({3, 3});
    CHECK(is_indivisible(m, fibers).indivisible);
    CHECK(are_isomorphic(quotient(m, fibers), n));

    CHECK(are_isomorphic(blow_up(n, {1, 1}), n));
    CHECK(blow_up(blow_up(n, 2), 3) == blow_up(n, 6));
    CHECK_THROWS_AS(blow_up(n, {0, 1}), Error);

    // single flip breaks indivisibility, witness includes the flipped tuple
    auto flipped = m;
    flipped.flip(0, Tuple{1, 4});
    auto v = is_indivisible(flipped, fibers);
    CHECK(! v.indivisible);
    REQUIRE(v.witness);
    bool mentions = v.witness->first == Tuple{1, 4} || v.witness->second == Tuple{1, 4};
    CHECK(mentions);
    CHECK_THROWS_AS(quotient(flipped, fibers), IndivisibilityError);

    CHECK(is_indivisible(flipped, Partition::singletons(6)).indivisible);
    CHECK(are_isomorphic(quotient(flipped, Partition::singletons(6)), flipped));
}

TEST_CASE("partial partition is rejected by the indivisibility check")
{
    auto m = blow_up(edge2(), 2);
    Partition p(4, {{0, 1}});
    CHECK_THROWS_AS(is_indivisible(m, p), Error);
}

TEST_CASE("partition construction validates blocks")
{
    CHECK_THROWS_AS(Partition(4, {{0, 1}, {1, 2}}), Error);
    CHECK_THROWS_AS(Partition(4, {{0, 4}}), Error);
    CHECK_THROWS_AS(Partition(4, {{}}), Error);
    Partition p(5, {{0, 1}, {2, 3, 4}});
    CHECK(p.is_equitable());
    CHECK(p.covers_all());
    CHECK(p.block_of(3) == 1);
    CHECK(! Partition(5, {{0}, {2, 3, 4}}).is_equitable());
}

TEST_CASE("blow-up round trip for random bases")
{
    Rng rng(11);
    for (std::uint64_t seed = 0 ; seed < 30 ; ++seed) {
        auto n = gen_random(Signature({{"E", 2}, {"U", 1}}), 1 + seed % 5, 0.5, seed);
        std::vector<std::uint64_t> sizes;
        for (std::size_t i = 0 ; i < n.size() ; ++i)
            sizes.push_back(1 + rng.below(4));
        auto m = blow_up(n, sizes);
        auto fibers = Partition::fibers(sizes);
        CHECK(is_indivisible(m, fibers).indivisible);
        CHECK(quotient(m, fibers) == n);
    }
}

TEST_CASE("full homomorphisms")
{
    auto n = edge2();
    auto m = blow_up(n, {3, 3});
    CHECK(check_full_homomorphism(n, n, {0, 1}));
    CHECK(check_full_homomorphism(m, n, {0, 0, 0, 1, 1, 1}));
    CHECK(! check_full_homomorphism(n, n, {0, 0}));
}

TEST_CASE("twin classes of a blow-up are its fibers")
{
    Structure base(binary_signature(), 3);
    base.set(0, {0, 1});
    base.set(0, {1, 2});
    base.set(0, {2, 2});
    auto m = blow_up(base, 4);
    auto classes = twin_classes(m);
    CHECK(classes.size() == 3);
    CHECK(are_isomorphic(twin_reduction(m), base));
}

TEST_CASE("canonical form identifies isomorphic structures")
{
    for (std::uint64_t seed = 0 ; seed < 20 ; ++seed) {
        auto m = gen_random(binary_signature(), 5, 0.4, seed);
        std::vector<Element> perm{3, 0, 4, 1, 2};
        Structure p(binary_signature(), 5);
        for (auto & t : m.tuples(0))
            p.set(0, {perm[t[0]], perm[t[1]]});
        CHECK(canonical_key(p) == canonical_key(m));
        CHECK(are_isomorphic(p, m));
    }
}

TEST_CASE("rational helpers")
{
    CHECK(parse_fraction("0.15") == Fraction(3, 20));
    CHECK(parse_fraction("1/4") == Fraction(1, 4));
    CHECK(parse_rational("14/100") == Rational(7, 50));
    auto b = log2_bounds(BigInt(1) << 100);
    CHECK(b.lo <= 100.0);
    CHECK(b.hi >= 100.0);
    CHECK(binomial(5, 2) == 10);
    CHECK(falling_factorial(5, 3) == 60);
}

TEST_CASE("rng streams are reproducible")
{
    Rng a(5), b(5);
    for (int i = 0 ; i < 10 ; ++i)
        CHECK(a.next() == b.next());
    Rng c = Rng(5).substream("x"), d = Rng(5).substream("y");
    CHECK(c.next() != d.next());
}

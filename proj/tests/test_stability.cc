#include <doctest.h>

#include <srl/core/structure_ops.hh>
#include <srl/stability/density.hh>
#include <srl/stability/search.hh>
#include <srl/stability/witness.hh>
#include <srl/toolkit/generators.hh>

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

    auto directed_cycle3() -> Structure
    {
        Structure m(binary_signature(), 3);
        m.set(0, {0, 1});
        m.set(0, {1, 2});
        m.set(0, {2, 0});
        return m;
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
}

TEST_CASE("half-graph order witness")
{
    auto h = gen_half_graph(4);
    auto r = find_order_witness(h, 0, 0, 4);
    REQUIRE(r.witness);
    CHECK(check_order_witness(h, *r.witness) == "");
    CHECK(! find_order_witness(h, 0, 0, 5).witness);
    CHECK(find_order_witness(h, 0, 0, 5).tag == SearchTag::exact);

    // the literal a_i, b_j assignment
    OrderWitness w{0, 0, {0, 1, 2, 3}, {{4}, {5}, {6}, {7}}};
    CHECK(check_order_witness(h, w) == "");
}

TEST_CASE("no order witness in total or empty relations")
{
    auto t = total(5);
    auto r = find_order_witness(t, 0, 0, 2);
    CHECK(! r.witness);
    CHECK(r.tag == SearchTag::exact);
    Structure e(binary_signature(), 5);
    CHECK(! find_order_witness(e, 0, 0, 2).witness);
}

TEST_CASE("half-graph 1-branching witness")
{
    auto h = gen_half_graph(4);
    // node b_1; leaf <0> = a_1 (phi false), leaf <1> = a_0 (phi true)
    BranchingWitness w{0, 0, 1, {1, 0}, {{5}}};
    CHECK(check_branching_witness(h, w) == "");
    auto r = find_branching_witness(h, 0, 0, 1);
    REQUIRE(r.witness);
    CHECK(check_branching_witness(h, *r.witness) == "");
    CHECK(format_witness(h, *r.witness).find("branching witness") == 0);
}

TEST_CASE("total relation has no 1-branching")
{
    auto r = has_branching(total(4), 1);
    CHECK(! r.witness);
    CHECK(r.tag == SearchTag::exact);
}

TEST_CASE("blow-up of a base without 2-branching has none")
{
    Structure base(binary_signature(), 2);
    base.set(0, {0, 1});
    CHECK(! has_branching(base, 2).witness);
    auto m = blow_up(base, 5);
    auto r = has_branching(m, 2);
    CHECK(! r.witness);
    CHECK(r.tag == SearchTag::exact);
}

TEST_CASE("branch tree generator carries its witness")
{
    for (unsigned t = 1 ; t <= 4 ; ++t) {
        auto m = gen_branch_tree(t);
        auto r = find_branching_witness(m, 0, 0, t);
        REQUIRE(r.witness);
        CHECK(check_branching_witness(m, *r.witness) == "");
    }
}

TEST_CASE("verifier rejects a corrupted witness")
{
    auto h = gen_half_graph(4);
    BranchingWitness w{0, 0, 1, {0, 1}, {{5}}};
    CHECK(check_branching_witness(h, w) != "");
    OrderWitness o{0, 0, {0, 1}, {{4}, {4}}};
    CHECK(check_order_witness(h, o) != "");
}

TEST_CASE("order and branching conversion bounds")
{
    CHECK(order_branching_bounds(BoundDirection::order_to_branching, 1).value == 6);
    CHECK(order_branching_bounds(BoundDirection::branching_to_order, 1).value == 4);
    CHECK(order_branching_bounds(BoundDirection::order_to_branching, 2).value == 14);
    CHECK(*order_branching_bounds(BoundDirection::order_to_branching, 1).power == 64);
    CHECK(order_branching_bounds(BoundDirection::branching_to_order, 30).value == BigInt(1) << 31);
    CHECK(! order_branching_bounds(BoundDirection::branching_to_order, 30).power);
    CHECK_THROWS_AS(order_branching_bounds(BoundDirection::branching_to_order, 0), Error);
}

TEST_CASE("induced densities")
{
    auto k2 = symmetric_complete(2);
    CHECK(t_ind(k2, symmetric_complete(3)).value == 1);
    CHECK(t_ind(k2, Structure(binary_signature(), 3)).value == 0);

    Structure edge(binary_signature(), 2);
    edge.set(0, {0, 1});
    CHECK(t_ind(edge, directed_cycle3()).value == Rational(1, 2));

    auto big = t_ind(symmetric_complete(4), symmetric_complete(3));
    CHECK(big.oversized);
    CHECK(big.value == 0);
}

TEST_CASE("fast embedding count matches backtracking")
{
    for (std::uint64_t seed = 0 ; seed < 30 ; ++seed) {
        auto base = gen_random(binary_signature(), 3, 0.5, seed);
        auto m = gen_blowup_noise(base, 3 + seed % 3, seed % 2 ? 0.05 : 0.0, seed);
        auto f = gen_random(binary_signature(), 2 + seed % 3, 0.5, seed + 100);
        CHECK(count_induced_embeddings_fast(f, m) == count_induced_embeddings(f, m));
    }
}

TEST_CASE("minimal branching catalog for one binary relation")
{
    auto catalog = minimal_branching_catalog(binary_signature(), 1, 4);
    CHECK(! catalog.empty());
    for (auto & e : catalog) {
        CHECK(e.structure.size() <= 4);
        CHECK(find_branching_witness(e.structure, e.relation, e.position, 1).witness);
        for (Element x = 0 ; x < e.structure.size() ; ++x) {
            std::vector<Element> keep;
            for (Element y = 0 ; y < e.structure.size() ; ++y)
                if (y != x)
                    keep.push_back(y);
            CHECK(! find_branching_witness(induced_substructure(e.structure, keep), e.relation, e.position, 1).witness);
        }
    }
    CHECK(minimal_branching_catalog(Signature(), 1, 2).empty());
    CHECK_THROWS_AS(minimal_branching_catalog(binary_signature(), 1, 5), Error);
    CatalogOptions tight;
    tight.table_budget = 100;
    CHECK_THROWS_AS(minimal_branching_catalog(binary_signature(), 1, 4, tight), Error);
}

TEST_CASE("delta branching")
{
    auto catalog = minimal_branching_catalog(binary_signature(), 1, 4);
    auto h = gen_half_graph(8);
    auto r = has_delta_branching(h, Rational(1, 1000), catalog);
    CHECK(r.holds);
    REQUIRE(r.best);
    CHECK(r.best_density > 0);

    // a total relation embeds no 1-branching configuration
    CHECK(! has_delta_branching(total(6), Rational(1, 1000000), catalog).holds);
    CHECK(has_delta_branching(total(6), Rational(0), catalog).holds);
}

TEST_CASE("definable traces")
{
    auto t = total(5);
    auto r = definable_trace_count(t, 0, 0, {0, 1, 2});
    CHECK(r.count == 1);

    std::uint64_t n = 6;
    auto h = gen_half_graph(n);
    auto left = range_set(0, n);
    auto hr = definable_trace_count(h, 0, 0, left);
    // b_0 .. b_{n-1} cut the prefixes of length 0 .. n-1
    CHECK(hr.count == n);
    REQUIRE(hr.tau);
    CHECK(*hr.tau == n + 1);
    CHECK(hr.within_bound);

    Structure base(binary_signature(), 3);
    base.set(0, {0, 1});
    base.set(0, {1, 2});
    auto b = blow_up(base, 3);
    auto br = definable_trace_count(b, 0, 0, range_set(0, 9));
    CHECK(br.count <= 8);
    CHECK(br.within_bound);
}

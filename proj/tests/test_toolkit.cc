#include <doctest.h>

#include <srl/core/structure_io.hh>
#include <srl/core/structure_ops.hh>
#include <srl/polling/goodness.hh>
#include <srl/stability/search.hh>
#include <srl/toolkit/generators.hh>
#include <srl/toolkit/hypergeometric.hh>
#include <srl/toolkit/oracle.hh>

#include <cmath>

using namespace srl;

namespace
{
    auto data(const std::string & name) -> std::string
    {
        return std::string(SRL_TEST_DATA_DIR) + "/" + name;
    }
}

TEST_CASE("noise-free blow-up and full flip")
{
    auto base = load_structure(data("base4.rst"));
    auto exact = blow_up(base, 5);
    CHECK(gen_blowup_noise(base, 5, 0.0, 1) == exact);
    CHECK(gen_blowup_noise(base, 5, 1.0, 1) == complement(exact));
    CHECK(is_indivisible(gen_blowup_noise(base, 5, 0.0, 1), Partition::fibers({5, 5, 5, 5})).indivisible);
}

TEST_CASE("noisy blow-up matches the golden file")
{
    auto base = load_structure(data("base4.rst"));
    auto m = gen_blowup_noise(base, 25, 0.01, 7);
    CHECK(serialize_structure(m) == read_file(data("blowup_noise_p25_f001_s7.rst")));
    auto flips = edit_distance(m, blow_up(base, 25)).counts[0];
    double mean = 0.01 * 10000, sigma = std::sqrt(10000 * 0.01 * 0.99);
    CHECK(std::abs(double(flips) - mean) <= 3 * sigma);
}

TEST_CASE("generators are reproducible")
{
    CHECK(gen_random(binary_signature(), 9, 0.4, 5) == gen_random(binary_signature(), 9, 0.4, 5));
    CHECK(! (gen_random(binary_signature(), 9, 0.4, 5) == gen_random(binary_signature(), 9, 0.4, 6)));
    CHECK_THROWS_AS(gen_blowup_noise(Structure(binary_signature(), 2), 0, 0.1, 1), Error);
}

TEST_CASE("half-graph generator")
{
    CHECK(gen_half_graph(2).count(0) == 1);
    CHECK(gen_half_graph(2).holds(0, {0, 3}));
    CHECK(gen_half_graph(1).count(0) == 0);
    CHECK(find_order_witness(gen_half_graph(4), 0, 0, 4).witness);
}

TEST_CASE("oracle excellence basics")
{
    auto m = gen_random(binary_signature(), 6, 0.5, 4);
    for (Element x = 0 ; x < 6 ; ++x)
        CHECK(oracle_good_levels(m, 0, Fraction(1, 10))[std::uint64_t{1} << x] >= 1);
    CHECK_THROWS_AS(oracle_excellent(m, {}, Fraction(1, 10)), Error);
    CHECK_THROWS_AS(oracle_excellent(gen_random(binary_signature(), 15, 0.5, 1), {0}, Fraction(1, 10)), Error);
}

TEST_CASE("oracle agrees with the polling engine on n <= 5")
{
    for (std::uint64_t seed = 0 ; seed < 40 ; ++seed) {
        std::uint64_t n = 2 + seed % 4;
        auto m = gen_random(binary_signature(), n, 0.5, seed);
        for (auto eps : {Fraction(1, 10), Fraction(1, 5)}) {
            GoodnessEngine engine(m, eps, GoodSetFamily::all_subsets());
            for (std::size_t idx = 0 ; idx < engine.pool().size() ; ++idx)
                CHECK(engine.excellence(idx).good == oracle_excellent(m, engine.pool()[idx], eps));
        }
    }
}

TEST_CASE("hypergeometric tail")
{
    auto r = mc_hypergeometric(20, 10, 5, Rational(3, 10), 20000, 1);
    CHECK(r.bound == doctest::Approx(std::exp(-0.9)));
    CHECK(r.within_bound);
    CHECK(std::abs(r.empirical - to_double(r.exact_tail)) <= 4 * r.sigma + 1e-9);

    auto zero = mc_hypergeometric(20, 10, 5, Rational(0), 100, 1);
    CHECK(zero.bound == 1.0);
    CHECK(zero.within_bound);

    auto all = mc_hypergeometric(20, 10, 20, Rational(1, 10), 100, 1);
    CHECK(all.exact_tail == 0);
    CHECK(all.empirical == 0.0);
}

#ifndef SRL_POLLING_GOODNESS_HH
#define SRL_POLLING_GOODNESS_HH

#include <srl/core/bitset.hh>
#include <srl/core/rational.hh>
#include <srl/core/structure.hh>
#include <srl/polling/polling.hh>

#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace srl
{
    // Which sets the goodness quantifier ranges over. ALL_SUBSETS is the
    // literal definition and is limited to n <= 14. FAMILY ranges over the
    // pool plus the sets being tested; singletons need not be listed since a
    // singleton argument polls exactly like the element itself. SAMPLED adds
    // seeded uniformly random subsets to the pool.
    enum class FamilyMode
    {
        all_subsets,
        family,
        sampled
    };

    auto to_string(FamilyMode m) -> const char *;

    inline constexpr std::uint64_t all_subsets_limit = 14;

    struct GoodSetFamily
    {
        FamilyMode mode = FamilyMode::family;
        std::vector<ElementSet> pool;
        std::size_t samples = 0;
        std::uint64_t seed = 0;

        static auto all_subsets() -> GoodSetFamily { return GoodSetFamily{FamilyMode::all_subsets, {}, 0, 0}; }
        static auto of(std::vector<ElementSet> pool) -> GoodSetFamily { return GoodSetFamily{FamilyMode::family, std::move(pool), 0, 0}; }
        static auto sampled(std::vector<ElementSet> pool, std::size_t k, std::uint64_t seed)
            -> GoodSetFamily { return GoodSetFamily{FamilyMode::sampled, std::move(pool), k, seed}; }
    };

    // One quantifier instance of the goodness definition: the tested set (the
    // "hole") sits at positions[0], inner set i at positions[i], elements fill
    // the remaining positions. Polling order is <positions[level-1], ...,
    // positions[0]>, so the hole is polled outermost.
    struct PollContext
    {
        std::size_t relation = 0;
        unsigned level = 0;
        std::vector<unsigned> positions;
        std::vector<ElementSet> inner;   // inner[i-1] is set i
        Tuple elements;

        auto args_with(const ElementSet & hole) const -> std::vector<PollArg>;
        auto order() const -> std::vector<unsigned>;
    };

    struct GoodnessCertificate
    {
        bool good = true;
        FamilyMode mode = FamilyMode::family;
        std::optional<PollContext> failure;
    };

    // Re-evaluates a failure context from scratch with eval_partial; true iff
    // the evaluation is INDET as the certificate claims.
    auto recheck_failure(const Structure & m, const ElementSet & a, const PollContext & c, const Fraction & eps) -> bool;

    class GoodnessEngine
    {
        public:
            using ContextCallback = std::function<bool (const PollContext &, const Mask & top, const Mask & bot)>;

        private:
            const Structure & _m;
            Fraction _eps;
            FamilyMode _mode;
            std::vector<ElementSet> _pool;
            std::vector<Mask> _masks;
            std::map<ElementSet, std::size_t> _index;

            struct RelationLevels
            {
                bool computed = false;
                std::vector<unsigned> level;
                std::vector<std::optional<PollContext>> failure;
            };
            std::vector<RelationLevels> _levels;

            void add(const ElementSet & s);
            void compute(std::size_t rel);
            void enumerate(std::size_t rel, unsigned level, const Mask & domain,
                    const std::vector<unsigned> & inner_levels, const ContextCallback & f);

        public:
            GoodnessEngine(const Structure & m, const Fraction & eps, const GoodSetFamily & family,
                    const std::vector<ElementSet> & extra = {});

            auto structure() const -> const Structure & { return _m; }
            auto epsilon() const -> const Fraction & { return _eps; }
            auto mode() const -> FamilyMode { return _mode; }
            auto pool() const -> const std::vector<ElementSet> & { return _pool; }
            auto index_of(const ElementSet & s) const -> std::optional<std::size_t>;

            // largest ell <= arity such that pool[idx] is (eps, ell, rel)-good
            auto level(std::size_t idx, std::size_t rel) -> unsigned;

            auto goodness(std::size_t idx, std::size_t rel, unsigned ell) -> GoodnessCertificate;
            auto excellence(std::size_t idx) -> GoodnessCertificate;

            // Visits every context of the given level whose inner sets are
            // pool members good at the required levels; masks cover `domain`.
            // The callback returns false to stop.
            void for_each_context(std::size_t rel, unsigned level, const Mask & domain, const ContextCallback & f);
    };

    auto is_good(const Structure & m, std::size_t rel, const ElementSet & a, unsigned ell, const Fraction & eps,
            const GoodSetFamily & family) -> GoodnessCertificate;

    auto is_excellent(const Structure & m, const ElementSet & a, const Fraction & eps,
            const GoodSetFamily & family) -> GoodnessCertificate;
}

#endif

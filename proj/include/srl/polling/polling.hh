#ifndef SRL_POLLING_POLLING_HH
#define SRL_POLLING_POLLING_HH

#include <srl/core/rational.hh>
#include <srl/core/structure.hh>

#include <span>
#include <vector>

namespace srl
{
    enum class Truth : std::uint8_t
    {
        bot,
        top,
        indet
    };

    auto to_string(Truth t) -> const char *;

    struct PollArg
    {
        bool is_set = false;
        Element element = 0;
        ElementSet set;

        static auto of(Element e) -> PollArg { return PollArg{false, e, {}}; }
        static auto of(ElementSet s) -> PollArg { return PollArg{true, 0, std::move(s)}; }
    };

    // Throws unless 0 < eps < 1/4.
    void check_epsilon(const Fraction & eps);

    // TOP iff top/size > 1 - eps, BOT iff bot/size > 1 - eps, exact.
    auto decide(std::uint64_t top, std::uint64_t bot, std::uint64_t size, const Fraction & eps) -> Truth;

    // order lists distinct set-valued positions; the last entry is polled
    // outermost. If the set-valued positions are not exactly range(order) the
    // value is INDET.
    auto eval_partial(const Structure & m, std::size_t rel, const std::vector<PollArg> & args,
            std::span<const unsigned> order, const Fraction & eps) -> Truth;

    struct DissentResult
    {
        Truth value;
        std::uint64_t dissenters = 0;  // meaningful only when value is determinate
        bool flagged = false;          // set when value is INDET
        BigInt cell_size;              // product of the set sizes
    };

    // Sets A_i sit at position sigma[i]; fixed elements fill positions
    // sigma[ell..n-1] in order. Polling order is <sigma(ell-1), ..., sigma(0)>.
    auto dissent_count(const Structure & m, std::size_t rel, const std::vector<ElementSet> & sets,
            const std::vector<Element> & fixed, const std::vector<unsigned> & sigma, const Fraction & eps) -> DissentResult;

    // dissenters <= ell * eps * prod |A_i|, exact
    auto dissent_within_bound(const DissentResult & d, unsigned ell, const Fraction & eps) -> bool;

    struct UnravelingResult
    {
        bool invariant = true;
        std::vector<std::pair<std::vector<unsigned>, Truth>> evaluations;
    };

    // Sets at positions sigma[0..ell-1], fixed elements after; evaluates under
    // every ordering of the set positions.
    auto check_unraveling_invariance(const Structure & m, std::size_t rel, const std::vector<ElementSet> & sets,
            const std::vector<Element> & fixed, const Fraction & eps, std::vector<unsigned> sigma = {}) -> UnravelingResult;
}

#endif

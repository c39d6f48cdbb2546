#ifndef SRL_CORE_RNG_HH
#define SRL_CORE_RNG_HH

#include <cstdint>
#include <string_view>
#include <vector>

namespace srl
{
    // Counter-based generator: output i is the SplitMix64 finalizer applied to
    // key + i * golden_gamma. The stream is fully determined by (seed, name),
    // independent of platform and standard library.
    class Rng
    {
        private:
            std::uint64_t _key;
            std::uint64_t _counter = 0;

        public:
            static constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

            static auto mix(std::uint64_t z) -> std::uint64_t
            {
                z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
                z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
                return z ^ (z >> 31);
            }

            explicit Rng(std::uint64_t seed) : _key(mix(seed ^ 0x5eed5eed5eed5eedULL)) {}

            // independent named substream
            auto substream(std::string_view name) const -> Rng
            {
                std::uint64_t h = 0xcbf29ce484222325ULL;
                for (unsigned char c : name)
                    h = (h ^ c) * 0x100000001b3ULL;
                Rng r(0);
                r._key = mix(_key ^ mix(h));
                return r;
            }

            auto substream(std::uint64_t index) const -> Rng
            {
                Rng r(0);
                r._key = mix(_key + mix(index + 0x1234567ULL));
                return r;
            }

            auto next() -> std::uint64_t
            {
                return mix(_key + (++_counter) * golden_gamma);
            }

            // uniform in [0, bound), bound > 0, unbiased by rejection
            auto below(std::uint64_t bound) -> std::uint64_t
            {
                std::uint64_t limit = bound * (UINT64_MAX / bound);
                std::uint64_t x;
                do
                    x = next();
                while (x >= limit);
                return x % bound;
            }

            // uniform in [0, 1) with 53 bits
            auto uniform01() -> double
            {
                return static_cast<double>(next() >> 11) * 0x1.0p-53;
            }

            auto bernoulli(double p) -> bool
            {
                return uniform01() < p;
            }

            template <typename T_>
            void shuffle(std::vector<T_> & v)
            {
                for (std::size_t i = v.size() ; i > 1 ; --i)
                    std::swap(v[i - 1], v[below(i)]);
            }
    };
}

#endif

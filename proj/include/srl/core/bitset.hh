#ifndef SRL_CORE_BITSET_HH
#define SRL_CORE_BITSET_HH

#include <srl/core/structure.hh>

#include <algorithm>
#include <cstdint>
#include <vector>

namespace srl
{
    // Fixed-width set of universe elements.
    class Mask
    {
        private:
            std::vector<std::uint64_t> _w;

        public:
            Mask() = default;
            explicit Mask(std::size_t n) : _w((n + 63) / 64, 0) {}
            Mask(std::size_t n, const ElementSet & s) : Mask(n)
            {
                for (auto e : s)
                    set(e);
            }

            void set(std::size_t i) { _w[i >> 6] |= std::uint64_t{1} << (i & 63); }
            void reset(std::size_t i) { _w[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
            auto test(std::size_t i) const -> bool { return (_w[i >> 6] >> (i & 63)) & 1; }
            void clear() { std::fill(_w.begin(), _w.end(), 0); }

            auto count() const -> std::size_t
            {
                std::size_t c = 0;
                for (auto w : _w)
                    c += __builtin_popcountll(w);
                return c;
            }

            auto intersect_count(const Mask & o) const -> std::size_t
            {
                std::size_t c = 0;
                for (std::size_t i = 0 ; i < _w.size() ; ++i)
                    c += __builtin_popcountll(_w[i] & o._w[i]);
                return c;
            }

            auto operator|= (const Mask & o) -> Mask &
            {
                for (std::size_t i = 0 ; i < _w.size() ; ++i)
                    _w[i] |= o._w[i];
                return *this;
            }

            auto operator&= (const Mask & o) -> Mask &
            {
                for (std::size_t i = 0 ; i < _w.size() ; ++i)
                    _w[i] &= o._w[i];
                return *this;
            }

            // this minus o
            auto operator-= (const Mask & o) -> Mask &
            {
                for (std::size_t i = 0 ; i < _w.size() ; ++i)
                    _w[i] &= ~o._w[i];
                return *this;
            }

            friend auto operator& (Mask a, const Mask & b) -> Mask { return a &= b; }
            friend auto operator- (Mask a, const Mask & b) -> Mask { return a -= b; }

            auto any() const -> bool
            {
                for (auto w : _w)
                    if (w)
                        return true;
                return false;
            }

            // index of the lowest set bit, or npos
            static constexpr std::size_t npos = ~std::size_t{0};
            auto first() const -> std::size_t { return next(0); }
            auto next(std::size_t from) const -> std::size_t
            {
                std::size_t i = from >> 6;
                if (i >= _w.size())
                    return npos;
                std::uint64_t w = _w[i] & (~std::uint64_t{0} << (from & 63));
                while (true) {
                    if (w)
                        return (i << 6) + __builtin_ctzll(w);
                    if (++i >= _w.size())
                        return npos;
                    w = _w[i];
                }
            }

            auto words() const -> const std::vector<std::uint64_t> & { return _w; }

            auto operator== (const Mask &) const -> bool = default;
            auto operator< (const Mask & o) const -> bool { return _w < o._w; }
    };
}

#endif

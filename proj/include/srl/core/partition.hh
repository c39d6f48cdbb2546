#ifndef SRL_CORE_PARTITION_HH
#define SRL_CORE_PARTITION_HH

#include <srl/core/structure.hh>

#include <cstdint>
#include <vector>

namespace srl
{
    // Blocks over a subset of 0..n-1. Block membership is kept as an array so
    // lookups are O(1).
    class Partition
    {
        private:
            std::uint64_t _n = 0;
            std::vector<ElementSet> _blocks;
            std::vector<int> _block_of;
            std::uint64_t _covered = 0;

        public:
            Partition() = default;
            Partition(std::uint64_t n, std::vector<ElementSet> blocks);

            static auto singletons(std::uint64_t n) -> Partition;
            static auto fibers(const std::vector<std::uint64_t> & sizes) -> Partition;

            auto universe_size() const -> std::uint64_t { return _n; }
            auto blocks() const -> const std::vector<ElementSet> & { return _blocks; }
            auto block(std::size_t i) const -> const ElementSet & { return _blocks.at(i); }
            auto size() const -> std::size_t { return _blocks.size(); }

            // -1 for elements outside the partition's universe
            auto block_of(Element e) const -> int { return _block_of.at(e); }

            auto universe() const -> ElementSet;
            auto covers_all() const -> bool { return _covered == _n; }
            auto is_equitable() const -> bool;
            auto min_block_size() const -> std::size_t;
            auto max_block_size() const -> std::size_t;

            auto operator== (const Partition & other) const -> bool { return _n == other._n && _blocks == other._blocks; }
    };
}

#endif

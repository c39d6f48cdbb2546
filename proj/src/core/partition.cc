#include <srl/core/partition.hh>

#include <algorithm>

using std::uint64_t;
using std::vector;

namespace srl
{
    Partition::Partition(uint64_t n, vector<ElementSet> blocks) :
        _n(n),
        _blocks(std::move(blocks)),
        _block_of(n, -1)
    {
        for (std::size_t b = 0 ; b < _blocks.size() ; ++b) {
            auto & block = _blocks[b];
            if (block.empty())
                throw Error("partition block " + std::to_string(b) + " is empty");
            std::sort(block.begin(), block.end());
            for (auto e : block) {
                if (e >= n)
                    throw Error("partition element " + std::to_string(e) + " out of range");
                if (_block_of[e] != -1)
                    throw Error("partition blocks overlap at element " + std::to_string(e));
                _block_of[e] = static_cast<int>(b);
                ++_covered;
            }
        }
    }

    auto Partition::singletons(uint64_t n) -> Partition
    {
        vector<ElementSet> blocks;
        for (uint64_t e = 0 ; e < n ; ++e)
            blocks.push_back({static_cast<Element>(e)});
        return Partition(n, std::move(blocks));
    }

    auto Partition::fibers(const vector<uint64_t> & sizes) -> Partition
    {
        vector<ElementSet> blocks;
        Element next = 0;
        for (auto s : sizes) {
            if (s == 0)
                throw Error("zero fiber size");
            blocks.push_back(range_set(next, next + static_cast<Element>(s)));
            next += static_cast<Element>(s);
        }
        return Partition(next, std::move(blocks));
    }

    auto Partition::universe() const -> ElementSet
    {
        ElementSet u;
        for (uint64_t e = 0 ; e < _n ; ++e)
            if (_block_of[e] != -1)
                u.push_back(static_cast<Element>(e));
        return u;
    }

    auto Partition::is_equitable() const -> bool
    {
        return _blocks.empty() || max_block_size() - min_block_size() <= 1;
    }

    auto Partition::min_block_size() const -> std::size_t
    {
        std::size_t m = _blocks.empty() ? 0 : _blocks[0].size();
        for (auto & b : _blocks)
            m = std::min(m, b.size());
        return m;
    }

    auto Partition::max_block_size() const -> std::size_t
    {
        std::size_t m = 0;
        for (auto & b : _blocks)
            m = std::max(m, b.size());
        return m;
    }
}

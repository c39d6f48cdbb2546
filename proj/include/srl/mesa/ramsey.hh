#ifndef SRL_MESA_RAMSEY_HH
#define SRL_MESA_RAMSEY_HH

#include <srl/core/structure.hh>
#include <srl/mesa/mesa.hh>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace srl
{
    using NodeBits = unsigned __int128;

    struct TreeNode
    {
        unsigned depth = 0;
        NodeBits bits = 0;

        auto operator== (const TreeNode &) const -> bool = default;
    };

    // Perfect binary tree with nodes at depths 0 .. height-1, labelled from
    // {0, ..., symbols-1}. Labels may be computed lazily so very tall trees
    // never materialize.
    struct LabeledTree
    {
        unsigned height = 0;
        unsigned symbols = 0;
        std::function<unsigned (const TreeNode &)> label;

        // labels[node_index(d, v)]; the size must be 2^height - 1
        static auto from_labels(unsigned height, unsigned symbols, std::vector<unsigned> labels) -> LabeledTree;
        static auto random(unsigned height, unsigned symbols, std::uint64_t seed) -> LabeledTree;
    };

    // images[node_index(h, v)] is the image of node v at depth h; every image
    // at depth h sits at depth levels[h].
    struct SubtreeEmbedding
    {
        unsigned height = 0;
        unsigned label = 0;
        std::vector<unsigned> levels;
        std::vector<TreeNode> images;
    };

    struct SubtreeOptions
    {
        std::uint64_t budget = 50'000'000;
        unsigned max_gap = 24;
    };

    // Smallest height H for which a constant subtree of height k is promised
    // with q labels: the least integer above 5 q k log2 k.
    auto ramsey_height(unsigned q, unsigned k) -> unsigned;

    auto monochromatic_subtree(const LabeledTree & t, unsigned k, const SubtreeOptions & opts = {})
        -> std::optional<SubtreeEmbedding>;

    auto check_subtree_embedding(const LabeledTree & t, const SubtreeEmbedding & e) -> std::string;

    struct ConstantSubstructure
    {
        std::optional<Mesa> mesa;
        std::optional<SubtreeEmbedding> embedding;
        unsigned required_height = 0;
        bool height_sufficient = false;
        std::string diagnostic;
    };

    // Labels rock nodes by (relation, position) and extracts a constant
    // substructure mesa of height k_star. A mesa whose rocks already agree is
    // returned as is.
    auto constant_substructure(const Structure & m, const Mesa & mesa, unsigned k_star) -> ConstantSubstructure;
}

#endif

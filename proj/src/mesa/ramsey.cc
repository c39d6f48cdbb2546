#include <srl/mesa/ramsey.hh>
#include <srl/core/rng.hh>
#include <srl/stability/witness.hh>

#include <algorithm>
#include <cmath>
#include <set>

using std::size_t;
using std::uint64_t;
using std::vector;

namespace srl
{
    auto LabeledTree::from_labels(unsigned height, unsigned symbols, vector<unsigned> labels) -> LabeledTree
    {
        if (height > 40)
            throw Error("labelled tree too tall to store explicitly");
        if (labels.size() != (size_t{1} << height) - 1)
            throw Error("labelled tree is not perfect: expected " + std::to_string((size_t{1} << height) - 1)
                    + " labels, got " + std::to_string(labels.size()));
        for (auto l : labels)
            if (l >= symbols)
                throw Error("tree label out of range");
        LabeledTree t;
        t.height = height;
        t.symbols = symbols;
        t.label = [labels = std::move(labels)] (const TreeNode & n) {
            return labels[node_index(n.depth, static_cast<uint64_t>(n.bits))];
        };
        return t;
    }

    auto LabeledTree::random(unsigned height, unsigned symbols, uint64_t seed) -> LabeledTree
    {
        if (height > 127)
            throw Error("labelled tree height above 127");
        if (symbols < 1)
            throw Error("a labelled tree needs at least one symbol");
        LabeledTree t;
        t.height = height;
        t.symbols = symbols;
        uint64_t key = Rng::mix(seed ^ 0x7265657472656574ULL);
        t.label = [key, symbols] (const TreeNode & n) {
            uint64_t lo = static_cast<uint64_t>(n.bits), hi = static_cast<uint64_t>(n.bits >> 64);
            uint64_t h = Rng::mix(key ^ Rng::mix(n.depth + 1));
            h = Rng::mix(h ^ lo);
            h = Rng::mix(h ^ Rng::mix(hi + 0x51));
            return static_cast<unsigned>(h % symbols);
        };
        return t;
    }

    auto ramsey_height(unsigned q, unsigned k) -> unsigned
    {
        double bound = 5.0 * q * k * std::log2(static_cast<double>(std::max(k, 1u)));
        return static_cast<unsigned>(std::floor(bound)) + 1;
    }

    namespace
    {
        struct SubtreeSearch
        {
            const LabeledTree & t;
            unsigned k;
            const SubtreeOptions & opts;
            unsigned colour = 0;
            vector<unsigned> levels;
            vector<TreeNode> images;
            uint64_t visits = 0;
            bool aborted = false;

            SubtreeSearch(const LabeledTree & tree, unsigned height, const SubtreeOptions & o) :
                t(tree), k(height), opts(o), images((size_t{1} << height) - 1) {}

            // v is the image of the node at depth h with bits pos
            auto embed(const TreeNode & v, unsigned h, uint64_t pos) -> bool
            {
                if (++visits > opts.budget) {
                    aborted = true;
                    return false;
                }
                if (t.label(v) != colour)
                    return false;
                images[node_index(h, pos)] = v;
                if (h + 1 == k)
                    return true;
                unsigned gap = levels[h + 1] - v.depth - 1;
                for (NodeBits s = 0 ; s < 2 ; ++s) {
                    NodeBits base = ((v.bits << 1) | s) << gap;
                    bool ok = false;
                    for (NodeBits x = 0 ; x < (NodeBits{1} << gap) && ! ok ; ++x) {
                        ok = embed(TreeNode{levels[h + 1], base | x}, h + 1, (pos << 1) | static_cast<uint64_t>(s));
                        if (aborted)
                            return false;
                    }
                    if (! ok)
                        return false;
                }
                return true;
            }

            // chooses levels[h..k-1] in lexicographic order, then embeds
            auto choose(unsigned h, const TreeNode & root) -> bool
            {
                if (h == k)
                    return embed(root, 0, 0);
                unsigned lo = levels[h - 1] + 1;
                unsigned hi = std::min(t.height - (k - h), levels[h - 1] + opts.max_gap);
                for (unsigned l = lo ; l <= hi ; ++l) {
                    levels[h] = l;
                    if (choose(h + 1, root))
                        return true;
                    if (aborted)
                        return false;
                }
                return false;
            }
        };
    }

    auto monochromatic_subtree(const LabeledTree & t, unsigned k, const SubtreeOptions & opts)
        -> std::optional<SubtreeEmbedding>
    {
        if (k < 1)
            throw Error("subtree height must be at least 1");
        if (k > 30)
            throw Error("subtree height above 30");
        if (! t.label)
            throw Error("labelled tree has no labels");
        if (t.height < k)
            return std::nullopt;

        SubtreeSearch s(t, k, opts);
        s.levels.assign(k, 0);
        for (unsigned l0 = 0 ; l0 + k <= t.height ; ++l0) {
            s.levels[0] = l0;
            unsigned width = std::min(l0, opts.max_gap);
            for (NodeBits r = 0 ; r < (NodeBits{1} << width) ; ++r) {
                TreeNode root{l0, r};
                s.colour = t.label(root);
                if (s.choose(1, root)) {
                    SubtreeEmbedding e;
                    e.height = k;
                    e.label = s.colour;
                    e.levels = s.levels;
                    e.images = s.images;
                    return e;
                }
                if (s.aborted)
                    return std::nullopt;
            }
        }
        return std::nullopt;
    }

    auto check_subtree_embedding(const LabeledTree & t, const SubtreeEmbedding & e) -> std::string
    {
        if (e.height < 1 || e.levels.size() != e.height || e.images.size() != (size_t{1} << e.height) - 1)
            return "embedding shape does not match its height";
        for (unsigned h = 0 ; h < e.height ; ++h) {
            if (e.levels[h] >= t.height)
                return "level " + std::to_string(h) + " lies outside the tree";
            if (h > 0 && e.levels[h] <= e.levels[h - 1])
                return "levels are not strictly increasing";
        }
        for (unsigned h = 0 ; h < e.height ; ++h)
            for (uint64_t v = 0 ; v < (uint64_t{1} << h) ; ++v) {
                const auto & img = e.images[node_index(h, v)];
                if (img.depth != e.levels[h])
                    return "node at depth " + std::to_string(h) + " is mapped off its level";
                if (img.depth < 128 && (img.bits >> img.depth) != 0)
                    return "image is not a node of the tree";
                if (t.label(img) != e.label)
                    return "image label differs from the constant label";
                if (h == 0)
                    continue;
                const auto & parent = e.images[node_index(h - 1, v >> 1)];
                unsigned gap = img.depth - parent.depth - 1;
                NodeBits expect = (parent.bits << 1) | static_cast<NodeBits>(v & 1);
                if ((img.bits >> gap) != expect)
                    return "image of a child does not extend the parent's image in the same direction";
            }
        return "";
    }

    auto constant_substructure(const Structure & m, const Mesa & mesa, unsigned k_star) -> ConstantSubstructure
    {
        if (k_star < 1)
            throw Error("target height must be at least 1");
        ConstantSubstructure result;
        unsigned q = std::max(1u, m.signature().n_l());
        unsigned arity_stride = std::max(1u, m.signature().max_arity());
        result.required_height = ramsey_height(std::max(q, 2u), std::max(k_star, 2u));
        result.height_sufficient = mesa.height >= result.required_height;

        if (mesa.height < k_star) {
            result.diagnostic = "mesa height " + std::to_string(mesa.height) + " is below the target height "
                + std::to_string(k_star) + "; a constant substructure is promised from height "
                + std::to_string(result.required_height);
            return result;
        }

        vector<unsigned> labels;
        for (auto & r : mesa.rocks)
            labels.push_back(static_cast<unsigned>(r.relation) * arity_stride + r.position);
        if (std::all_of(labels.begin(), labels.end(), [&] (unsigned l) { return l == labels[0]; })) {
            result.mesa = mesa;
            return result;
        }

        auto tree = LabeledTree::from_labels(mesa.height, q, labels);
        auto emb = monochromatic_subtree(tree, k_star);
        if (! emb) {
            result.diagnostic = "no constant subtree of height " + std::to_string(k_star) + " in a mesa of height "
                + std::to_string(mesa.height) + "; one is promised from height " + std::to_string(result.required_height);
            return result;
        }

        Mesa y;
        y.eps = mesa.eps;
        y.stairs = mesa.stairs;
        y.height = k_star;
        y.family = mesa.family;
        y.pool = mesa.pool;
        y.substructure = true;
        y.sets.resize(node_index(k_star + 1, 0));
        y.rocks.resize(node_index(k_star, 0));
        y.rock_pool.resize(node_index(k_star, 0));
        std::set<uint64_t> sizes;
        for (unsigned h = 0 ; h < k_star ; ++h)
            for (uint64_t v = 0 ; v < (uint64_t{1} << h) ; ++v) {
                size_t i = node_index(h, v);
                const auto & img = emb->images[i];
                size_t orig = node_index(img.depth, static_cast<uint64_t>(img.bits));
                y.sets[i] = mesa.sets[orig];
                y.rocks[i] = mesa.rocks[orig];
                y.rock_pool[i] = mesa.rock_pool[orig];
                sizes.insert(y.sets[i].size());
                if (h + 1 < k_star)
                    continue;
                for (uint64_t s = 0 ; s < 2 ; ++s) {
                    const auto & child = mesa.set(img.depth + 1, (static_cast<uint64_t>(img.bits) << 1) | s);
                    y.sets[node_index(k_star, 2 * v + s)] = child;
                    sizes.insert(child.size());
                }
            }
        y.sizes.assign(sizes.rbegin(), sizes.rend());
        result.mesa = std::move(y);
        result.embedding = std::move(emb);
        return result;
    }
}

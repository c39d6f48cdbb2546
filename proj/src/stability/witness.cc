#include <srl/stability/witness.hh>

#include <sstream>

using std::string;
using std::uint64_t;

namespace srl
{
    auto node_index(unsigned depth, uint64_t bits) -> std::size_t
    {
        return (std::size_t{1} << depth) - 1 + bits;
    }

    auto splice(Element a, const Tuple & b, unsigned position) -> Tuple
    {
        Tuple t;
        t.reserve(b.size() + 1);
        for (std::size_t i = 0 ; i <= b.size() ; ++i) {
            if (i == position)
                t.push_back(a);
            if (i < b.size())
                t.push_back(b[i]);
        }
        return t;
    }

    namespace
    {
        auto check_shape(const Structure & m, std::size_t rel, unsigned position, const std::vector<Tuple> & params,
                const std::vector<Element> & xs) -> string
        {
            if (rel >= m.signature().size())
                return "relation out of range";
            unsigned k = m.arity(rel);
            if (position >= k)
                return "isolated position out of range";
            for (auto & b : params) {
                if (b.size() + 1 != k)
                    return "parameter tuple has the wrong length";
                for (auto e : b)
                    if (e >= m.size())
                        return "parameter element out of range";
            }
            for (auto e : xs)
                if (e >= m.size())
                    return "element out of range";
            return "";
        }
    }

    auto check_order_witness(const Structure & m, const OrderWitness & w) -> string
    {
        if (w.a.size() != w.b.size())
            return "a and b sequences differ in length";
        if (auto s = check_shape(m, w.relation, w.position, w.b, w.a) ; ! s.empty())
            return s;
        for (std::size_t i = 0 ; i < w.a.size() ; ++i)
            for (std::size_t j = 0 ; j < w.b.size() ; ++j) {
                bool got = m.holds(w.relation, splice(w.a[i], w.b[j], w.position));
                if (got != (i < j)) {
                    std::ostringstream o;
                    o << "phi(a_" << i << "; b_" << j << ") is " << (got ? "true" : "false");
                    return o.str();
                }
            }
        return "";
    }

    auto check_branching_witness(const Structure & m, const BranchingWitness & w) -> string
    {
        unsigned h = w.height;
        if (h > 30)
            return "height too large";
        if (w.leaves.size() != (std::size_t{1} << h) || w.nodes.size() != (std::size_t{1} << h) - 1)
            return "leaf or node count does not match the height";
        if (auto s = check_shape(m, w.relation, w.position, w.nodes, w.leaves) ; ! s.empty())
            return s;
        for (uint64_t eta = 0 ; eta < w.leaves.size() ; ++eta)
            for (unsigned d = 0 ; d < h ; ++d) {
                // the ancestor of length d and the branch taken below it
                uint64_t prefix = eta >> (h - d);
                bool branch = (eta >> (h - d - 1)) & 1;
                const Tuple & b = w.nodes[node_index(d, prefix)];
                bool got = m.holds(w.relation, splice(w.leaves[eta], b, w.position));
                if (got != branch) {
                    std::ostringstream o;
                    o << "leaf " << eta << " against node at depth " << d << " gives " << (got ? "true" : "false");
                    return o.str();
                }
            }
        return "";
    }

    namespace
    {
        auto tuple_text(const Tuple & t) -> string
        {
            std::ostringstream o;
            o << "(";
            for (std::size_t i = 0 ; i < t.size() ; ++i)
                o << (i ? " " : "") << t[i];
            o << ")";
            return o.str();
        }

        auto bits_text(uint64_t v, unsigned len) -> string
        {
            string s;
            for (unsigned i = 0 ; i < len ; ++i)
                s += ((v >> (len - 1 - i)) & 1) ? '1' : '0';
            return s.empty() ? "<>" : s;
        }
    }

    auto format_witness(const Structure & m, const OrderWitness & w) -> string
    {
        std::ostringstream o;
        o << "order witness relation " << m.signature().name(w.relation) << " position " << w.position
            << " length " << w.a.size() << "\n";
        for (std::size_t i = 0 ; i < w.a.size() ; ++i)
            o << "  a[" << i << "] = " << w.a[i] << "  b[" << i << "] = " << tuple_text(w.b[i]) << "\n";
        return o.str();
    }

    auto format_witness(const Structure & m, const BranchingWitness & w) -> string
    {
        std::ostringstream o;
        o << "branching witness relation " << m.signature().name(w.relation) << " position " << w.position
            << " height " << w.height << "\n";
        for (unsigned d = 0 ; d < w.height ; ++d)
            for (uint64_t v = 0 ; v < (uint64_t{1} << d) ; ++v)
                o << "  node " << (d ? bits_text(v, d) : "<>") << " = " << tuple_text(w.nodes[node_index(d, v)]) << "\n";
        for (uint64_t eta = 0 ; eta < w.leaves.size() ; ++eta)
            o << "  leaf " << bits_text(eta, w.height) << " = " << w.leaves[eta] << "\n";
        return o.str();
    }
}

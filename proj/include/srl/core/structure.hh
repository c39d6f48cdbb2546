#ifndef SRL_CORE_STRUCTURE_HH
#define SRL_CORE_STRUCTURE_HH

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace srl
{
    using Element = std::uint32_t;
    using Tuple = std::vector<Element>;

    // Sorted, duplicate-free list of elements.
    using ElementSet = std::vector<Element>;

    class Error : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    struct RelationSymbol
    {
        std::string name;
        unsigned arity;

        auto operator== (const RelationSymbol &) const -> bool = default;
    };

    class Signature
    {
        private:
            std::vector<RelationSymbol> _relations;

        public:
            Signature() = default;
            explicit Signature(std::vector<RelationSymbol> relations);

            auto relations() const -> const std::vector<RelationSymbol> & { return _relations; }
            auto size() const -> std::size_t { return _relations.size(); }
            auto arity(std::size_t rel) const -> unsigned { return _relations.at(rel).arity; }
            auto name(std::size_t rel) const -> const std::string & { return _relations.at(rel).name; }

            // index of a relation by name, or -1
            auto find(const std::string & name) const -> int;

            // q_L and n_L
            auto max_arity() const -> unsigned;
            auto n_l() const -> unsigned { return static_cast<unsigned>(size()) * max_arity(); }

            auto operator== (const Signature &) const -> bool = default;
    };

    auto binary_signature(const std::string & name = "E") -> Signature;

    // One relation's table. Tuples are encoded as base-n integers, which keeps
    // numeric order equal to lexicographic order.
    class RelationTable
    {
        private:
            unsigned _arity = 0;
            std::uint64_t _n = 0;
            std::uint64_t _cells = 0;
            bool _dense = true;
            std::vector<std::uint64_t> _bits;
            std::unordered_set<std::uint64_t> _sparse;
            std::uint64_t _count = 0;

        public:
            RelationTable() = default;
            RelationTable(unsigned arity, std::uint64_t n, std::uint64_t dense_threshold);

            auto arity() const -> unsigned { return _arity; }
            auto cells() const -> std::uint64_t { return _cells; }
            auto count() const -> std::uint64_t { return _count; }
            auto dense() const -> bool { return _dense; }

            auto get(std::uint64_t code) const -> bool
            {
                if (_dense)
                    return (_bits[code >> 6] >> (code & 63)) & 1;
                return _sparse.contains(code);
            }

            void set(std::uint64_t code, bool value);

            // all present codes, ascending
            auto codes() const -> std::vector<std::uint64_t>;

            auto operator== (const RelationTable & other) const -> bool;
    };

    class Structure
    {
        private:
            Signature _sig;
            std::uint64_t _n = 0;
            std::vector<RelationTable> _tables;

        public:
            static constexpr std::uint64_t default_dense_threshold = std::uint64_t{1} << 24;

            Structure() = default;
            Structure(Signature sig, std::uint64_t n, std::uint64_t dense_threshold = default_dense_threshold);

            auto signature() const -> const Signature & { return _sig; }
            auto size() const -> std::uint64_t { return _n; }
            auto arity(std::size_t rel) const -> unsigned { return _sig.arity(rel); }
            auto table(std::size_t rel) const -> const RelationTable & { return _tables.at(rel); }

            auto encode(std::size_t rel, std::span<const Element> t) const -> std::uint64_t;
            auto decode(std::size_t rel, std::uint64_t code) const -> Tuple;

            auto holds(std::size_t rel, std::span<const Element> t) const -> bool
            {
                return _tables[rel].get(encode(rel, t));
            }

            auto holds(std::size_t rel, std::initializer_list<Element> t) const -> bool
            {
                return holds(rel, std::span<const Element>(t.begin(), t.size()));
            }

            void set(std::size_t rel, std::span<const Element> t, bool value = true);
            void set(std::size_t rel, std::initializer_list<Element> t, bool value = true)
            {
                set(rel, std::span<const Element>(t.begin(), t.size()), value);
            }
            void flip(std::size_t rel, std::span<const Element> t) { set(rel, t, ! holds(rel, t)); }

            auto count(std::size_t rel) const -> std::uint64_t { return _tables.at(rel).count(); }
            auto cells(std::size_t rel) const -> std::uint64_t { return _tables.at(rel).cells(); }

            // present tuples, lexicographic
            auto tuples(std::size_t rel) const -> std::vector<Tuple>;

            auto operator== (const Structure & other) const -> bool;
    };

    // n^k with overflow detection
    auto checked_power(std::uint64_t n, unsigned k) -> std::uint64_t;

    // Advance t as an odometer over [0,n)^k; false once it wraps.
    auto next_tuple(std::span<Element> t, std::uint64_t n) -> bool;

    auto is_sorted_set(const ElementSet & a) -> bool;
    auto make_set(std::vector<Element> v) -> ElementSet;
    auto range_set(Element begin, Element end) -> ElementSet;
}

#endif

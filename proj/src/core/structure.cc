#include <srl/core/structure.hh>

#include <algorithm>
#include <limits>

using std::uint64_t;
using std::vector;

namespace srl
{
    Signature::Signature(vector<RelationSymbol> relations) :
        _relations(std::move(relations))
    {
        for (std::size_t i = 0 ; i < _relations.size() ; ++i) {
            if (_relations[i].arity < 1)
                throw Error("relation " + _relations[i].name + " has arity 0");
            if (_relations[i].name.empty())
                throw Error("relation with empty name");
            for (std::size_t j = 0 ; j < i ; ++j)
                if (_relations[j].name == _relations[i].name)
                    throw Error("duplicate relation name " + _relations[i].name);
        }
    }

    auto Signature::find(const std::string & name) const -> int
    {
        for (std::size_t i = 0 ; i < _relations.size() ; ++i)
            if (_relations[i].name == name)
                return static_cast<int>(i);
        return -1;
    }

    auto Signature::max_arity() const -> unsigned
    {
        unsigned q = 0;
        for (auto & r : _relations)
            q = std::max(q, r.arity);
        return q;
    }

    auto binary_signature(const std::string & name) -> Signature
    {
        return Signature{{RelationSymbol{name, 2}}};
    }

    auto checked_power(uint64_t n, unsigned k) -> uint64_t
    {
        uint64_t result = 1;
        for (unsigned i = 0 ; i < k ; ++i) {
            if (n != 0 && result > std::numeric_limits<uint64_t>::max() / n)
                throw Error("universe too large: n^arity overflows 64 bits");
            result *= n;
        }
        return result;
    }

    RelationTable::RelationTable(unsigned arity, uint64_t n, uint64_t dense_threshold) :
        _arity(arity),
        _n(n),
        _cells(checked_power(n, arity)),
        _dense(_cells <= dense_threshold)
    {
        if (_dense)
            _bits.assign((_cells + 63) / 64, 0);
    }

    void RelationTable::set(uint64_t code, bool value)
    {
        if (_dense) {
            auto & word = _bits[code >> 6];
            uint64_t mask = uint64_t{1} << (code & 63);
            bool was = word & mask;
            if (was == value)
                return;
            word ^= mask;
            value ? ++_count : --_count;
        }
        else {
            if (value) {
                if (_sparse.insert(code).second)
                    ++_count;
            }
            else if (_sparse.erase(code))
                --_count;
        }
    }

    auto RelationTable::codes() const -> vector<uint64_t>
    {
        vector<uint64_t> result;
        result.reserve(_count);
        if (_dense) {
            for (uint64_t w = 0 ; w < _bits.size() ; ++w) {
                uint64_t word = _bits[w];
                while (word) {
                    int b = __builtin_ctzll(word);
                    result.push_back(w * 64 + b);
                    word &= word - 1;
                }
            }
        }
        else {
            result.assign(_sparse.begin(), _sparse.end());
            std::sort(result.begin(), result.end());
        }
        return result;
    }

    auto RelationTable::operator== (const RelationTable & other) const -> bool
    {
        if (_arity != other._arity || _n != other._n || _count != other._count)
            return false;
        if (_dense && other._dense)
            return _bits == other._bits;
        return codes() == other.codes();
    }

    Structure::Structure(Signature sig, uint64_t n, uint64_t dense_threshold) :
        _sig(std::move(sig)),
        _n(n)
    {
        for (auto & r : _sig.relations())
            _tables.emplace_back(r.arity, n, dense_threshold);
    }

    auto Structure::encode(std::size_t rel, std::span<const Element> t) const -> uint64_t
    {
        uint64_t code = 0;
        for (auto e : t)
            code = code * _n + e;
        (void) rel;
        return code;
    }

    auto Structure::decode(std::size_t rel, uint64_t code) const -> Tuple
    {
        Tuple t(arity(rel));
        for (std::size_t i = t.size() ; i-- > 0 ; ) {
            t[i] = static_cast<Element>(code % _n);
            code /= _n;
        }
        return t;
    }

    void Structure::set(std::size_t rel, std::span<const Element> t, bool value)
    {
        if (rel >= _tables.size())
            throw Error("relation index out of range");
        if (t.size() != arity(rel))
            throw Error("arity mismatch for relation " + _sig.name(rel));
        for (auto e : t)
            if (e >= _n)
                throw Error("element " + std::to_string(e) + " out of range");
        _tables[rel].set(encode(rel, t), value);
    }

    auto Structure::tuples(std::size_t rel) const -> vector<Tuple>
    {
        vector<Tuple> result;
        for (auto c : _tables.at(rel).codes())
            result.push_back(decode(rel, c));
        return result;
    }

    auto Structure::operator== (const Structure & other) const -> bool
    {
        return _sig == other._sig && _n == other._n && _tables == other._tables;
    }

    auto next_tuple(std::span<Element> t, uint64_t n) -> bool
    {
        for (std::size_t i = t.size() ; i-- > 0 ; ) {
            if (t[i] + 1 < n) {
                ++t[i];
                return true;
            }
            t[i] = 0;
        }
        return false;
    }

    auto is_sorted_set(const ElementSet & a) -> bool
    {
        return std::adjacent_find(a.begin(), a.end(), [] (Element x, Element y) { return x >= y; }) == a.end();
    }

    auto make_set(vector<Element> v) -> ElementSet
    {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }

    auto range_set(Element begin, Element end) -> ElementSet
    {
        ElementSet s;
        for (Element e = begin ; e < end ; ++e)
            s.push_back(e);
        return s;
    }
}

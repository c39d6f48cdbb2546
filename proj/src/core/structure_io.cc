#include <srl/core/structure_io.hh>

#include <charconv>
#include <fstream>
#include <sstream>

using std::string;
using std::vector;

namespace srl
{
    ParseError::ParseError(int l, const string & what) :
        Error("line " + std::to_string(l) + ": " + what),
        line(l)
    {
    }

    namespace
    {
        auto split_words(const string & line) -> vector<string>
        {
            vector<string> words;
            std::istringstream s(line);
            string w;
            while (s >> w)
                words.push_back(w);
            return words;
        }

        auto parse_number(const string & word, int line) -> std::uint64_t
        {
            std::uint64_t v = 0;
            auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
            if (ec != std::errc() || ptr != word.data() + word.size())
                throw ParseError(line, "expected a non-negative integer, got '" + word + "'");
            return v;
        }

        auto parse_symbol(const string & word, int line) -> RelationSymbol
        {
            auto slash = word.find('/');
            if (slash == string::npos || slash == 0)
                throw ParseError(line, "malformed relation declaration '" + word + "'");
            auto arity = parse_number(word.substr(slash + 1), line);
            if (arity < 1 || arity > 16)
                throw ParseError(line, "bad arity in '" + word + "'");
            return RelationSymbol{word.substr(0, slash), static_cast<unsigned>(arity)};
        }
    }

    auto parse_structure_text(const string & text) -> ParsedStructure
    {
        std::istringstream in(text);
        string raw;
        int line_no = 0;

        std::optional<Signature> sig;
        std::optional<std::uint64_t> universe, grid;
        std::optional<Structure> result;

        auto ensure_structure = [&] (int l) {
            if (result)
                return;
            if (! sig)
                throw ParseError(l, "missing signature header");
            if (! universe && ! grid)
                throw ParseError(l, "missing universe header");
            if (universe && grid && *universe != *grid)
                throw ParseError(l, "universe and grid headers disagree");
            try {
                result.emplace(*sig, universe ? *universe : *grid);
            }
            catch (const Error & e) {
                throw ParseError(l, e.what());
            }
        };

        while (std::getline(in, raw)) {
            ++line_no;
            auto hash = raw.find('#');
            if (hash != string::npos)
                raw.resize(hash);
            auto words = split_words(raw);
            if (words.empty())
                continue;

            if (words[0] == "signature") {
                if (sig || result)
                    throw ParseError(line_no, "unexpected signature header");
                vector<RelationSymbol> syms;
                for (std::size_t i = 1 ; i < words.size() ; ++i)
                    syms.push_back(parse_symbol(words[i], line_no));
                try {
                    sig.emplace(std::move(syms));
                }
                catch (const Error & e) {
                    throw ParseError(line_no, e.what());
                }
            }
            else if (words[0] == "universe" || words[0] == "grid") {
                if (! sig)
                    throw ParseError(line_no, "header '" + words[0] + "' before signature");
                if (result || words.size() != 2)
                    throw ParseError(line_no, "malformed " + words[0] + " header");
                auto v = parse_number(words[1], line_no);
                auto & slot = words[0] == "universe" ? universe : grid;
                if (slot)
                    throw ParseError(line_no, "duplicate " + words[0] + " header");
                slot = v;
            }
            else {
                ensure_structure(line_no);
                int rel = sig->find(words[0]);
                if (rel < 0)
                    throw ParseError(line_no, "unknown relation '" + words[0] + "'");
                if (words.size() - 1 != sig->arity(rel))
                    throw ParseError(line_no, "arity mismatch for " + words[0] + ": expected "
                            + std::to_string(sig->arity(rel)) + " entries, got " + std::to_string(words.size() - 1));
                Tuple t;
                for (std::size_t i = 1 ; i < words.size() ; ++i) {
                    auto v = parse_number(words[i], line_no);
                    if (v >= result->size())
                        throw ParseError(line_no, "element " + words[i] + " out of range");
                    t.push_back(static_cast<Element>(v));
                }
                result->set(rel, t, true);
            }
        }

        ensure_structure(line_no + 1);
        return ParsedStructure{std::move(*result), grid};
    }

    auto parse_structure(const string & text) -> Structure
    {
        return parse_structure_text(text).structure;
    }

    namespace
    {
        auto serialize_with_header(const Structure & m, const string & header) -> string
        {
            std::ostringstream out;
            out << "signature";
            for (auto & r : m.signature().relations())
                out << ' ' << r.name << '/' << r.arity;
            out << '\n' << header << ' ' << m.size() << '\n';
            for (std::size_t rel = 0 ; rel < m.signature().size() ; ++rel)
                for (auto & t : m.tuples(rel)) {
                    out << m.signature().name(rel);
                    for (auto e : t)
                        out << ' ' << e;
                    out << '\n';
                }
            return out.str();
        }
    }

    auto serialize_structure(const Structure & m) -> string
    {
        return serialize_with_header(m, "universe");
    }

    auto serialize_grid_structure(const Structure & cells) -> string
    {
        return serialize_with_header(cells, "grid");
    }

    auto read_file(const string & path) -> string
    {
        std::ifstream in(path, std::ios::binary);
        if (! in)
            throw Error("cannot read " + path);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    void write_file(const string & path, const string & contents)
    {
        std::ofstream out(path, std::ios::binary);
        if (! out)
            throw Error("cannot write " + path);
        out << contents;
    }

    auto load_structure(const string & path) -> Structure
    {
        return parse_structure(read_file(path));
    }

    void save_structure(const string & path, const Structure & m)
    {
        write_file(path, serialize_structure(m));
    }
}

#ifndef SRL_CORE_STRUCTURE_IO_HH
#define SRL_CORE_STRUCTURE_IO_HH

#include <srl/core/structure.hh>

#include <optional>
#include <string>

namespace srl
{
    class ParseError : public Error
    {
        public:
            ParseError(int line, const std::string & what);
            int line;
    };

    struct ParsedStructure
    {
        Structure structure;
        std::optional<std::uint64_t> grid;
    };

    // Accepts either a `universe N` or a `grid N` header (or both, if equal).
    auto parse_structure_text(const std::string & text) -> ParsedStructure;
    auto parse_structure(const std::string & text) -> Structure;

    auto serialize_structure(const Structure & m) -> std::string;
    auto serialize_grid_structure(const Structure & cells) -> std::string;

    auto read_file(const std::string & path) -> std::string;
    void write_file(const std::string & path, const std::string & contents);
    auto load_structure(const std::string & path) -> Structure;
    void save_structure(const std::string & path, const Structure & m);
}

#endif

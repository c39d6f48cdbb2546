#ifndef SRL_CORE_ISO_HH
#define SRL_CORE_ISO_HH

#include <srl/core/structure.hh>

#include <optional>
#include <vector>

namespace srl
{
    // Backtracking isomorphism search; returns a map from m's elements to n's.
    auto find_isomorphism(const Structure & m, const Structure & n) -> std::optional<std::vector<Element>>;
    auto are_isomorphic(const Structure & m, const Structure & n) -> bool;

    // Canonical key for small structures (minimum over all relabelings). Only
    // intended for n <= 8.
    auto canonical_key(const Structure & m) -> std::vector<std::uint8_t>;
    auto canonical_form(const Structure & m) -> Structure;
}

#endif

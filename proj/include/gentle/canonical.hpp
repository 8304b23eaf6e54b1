#pragma once

#include <map>
#include <optional>
#include <string>

#include "gentle/presentation.hpp"

namespace gentle {

// Deterministic key, equal exactly for isomorphic presentations
// (simultaneous vertex/arrow renamings preserving relations).
std::string canonical_form(const Presentation& p);

struct Isomorphism {
    std::map<std::string, std::string> vertex_map;  // p1 vertex -> p2 vertex
    std::map<std::string, std::string> arrow_map;
};

std::optional<Isomorphism> find_isomorphism(const Presentation& a, const Presentation& b);
bool are_isomorphic(const Presentation& a, const Presentation& b);

// Renames vertices/arrows; map entries are optional (missing = keep name).
Presentation relabel(const Presentation& p, const std::map<std::string, std::string>& vertex_map,
                     const std::map<std::string, std::string>& arrow_map);

}  // namespace gentle

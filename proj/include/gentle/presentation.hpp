#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace gentle {

// Thrown for inputs that violate an operation's contract (bad quiver,
// inadmissible invariant triple, inapplicable transformation, ...).
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the DSL parser; carries a 1-based source position.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, int line, int col)
        : std::runtime_error(what + " (line " + std::to_string(line) + ", col " + std::to_string(col) + ")"),
          line(line), col(col) {}
    int line;
    int col;
};

struct Arrow {
    std::string name;
    std::string source;
    std::string target;
    bool is_loop() const { return source == target; }
};

// The composition g*f (f first, then g) is declared zero.
struct Relation {
    std::string g;
    std::string f;
    friend bool operator==(const Relation& a, const Relation& b) = default;
    friend auto operator<=>(const Relation& a, const Relation& b) = default;
};

// A quiver with length-two monomial relations. Parsing keeps document
// order; nothing here assumes gentleness (see validate_gentle).
struct Presentation {
    std::string name;
    std::vector<std::string> vertices;
    std::vector<Arrow> arrows;
    std::vector<Relation> relations;

    bool has_vertex(const std::string& v) const;
    const Arrow* find_arrow(const std::string& a) const;
    const Arrow& arrow(const std::string& a) const;  // throws if absent
    bool has_relation(const std::string& g, const std::string& f) const;

    std::vector<const Arrow*> out_arrows(const std::string& v) const;
    std::vector<const Arrow*> in_arrows(const std::string& v) const;
    int out_degree(const std::string& v) const;
    int in_degree(const std::string& v) const;

    // gamma with gamma*a in P / not in P (unique for valid gentle input).
    std::optional<std::string> rel_successor(const std::string& a) const;
    std::optional<std::string> rel_predecessor(const std::string& a) const;
    std::optional<std::string> free_successor(const std::string& a) const;
    std::optional<std::string> free_predecessor(const std::string& a) const;

    bool connected() const;  // undirected sense; empty quiver counts as disconnected

    // Deterministic fresh arrow name: base + "'" (more primes on collision).
    std::string fresh_arrow_name(const std::string& base) const;
};

struct Violation {
    std::string condition;  // "1".."5" or "disconnected"
    std::string site;
};

struct ValidationReport {
    bool ok = false;
    std::vector<Violation> violations;
};

Presentation parse_quiver(const std::string& text);
std::string to_dsl(const Presentation& p);
nlohmann::ordered_json to_json(const Presentation& p);

// Connectivity plus the five gentleness conditions. Condition (3) is
// checked as acyclicity of the relation-free walk graph.
ValidationReport validate_gentle(const Presentation& p);

int cycle_number(const Presentation& p);  // #Q1 - #Q0 + 1; throws if disconnected

}  // namespace gentle

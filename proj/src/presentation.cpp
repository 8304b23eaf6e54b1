#include "gentle/presentation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace gentle {

bool Presentation::has_vertex(const std::string& v) const {
    return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

const Arrow* Presentation::find_arrow(const std::string& a) const {
    for (const Arrow& ar : arrows)
        if (ar.name == a) return &ar;
    return nullptr;
}

const Arrow& Presentation::arrow(const std::string& a) const {
    const Arrow* ar = find_arrow(a);
    if (!ar) throw domain_error("unknown arrow '" + a + "'");
    return *ar;
}

bool Presentation::has_relation(const std::string& g, const std::string& f) const {
    for (const Relation& r : relations)
        if (r.g == g && r.f == f) return true;
    return false;
}

std::vector<const Arrow*> Presentation::out_arrows(const std::string& v) const {
    std::vector<const Arrow*> out;
    for (const Arrow& ar : arrows)
        if (ar.source == v) out.push_back(&ar);
    return out;
}

std::vector<const Arrow*> Presentation::in_arrows(const std::string& v) const {
    std::vector<const Arrow*> in;
    for (const Arrow& ar : arrows)
        if (ar.target == v) in.push_back(&ar);
    return in;
}

int Presentation::out_degree(const std::string& v) const { return (int)out_arrows(v).size(); }
int Presentation::in_degree(const std::string& v) const { return (int)in_arrows(v).size(); }

std::optional<std::string> Presentation::rel_successor(const std::string& a) const {
    const Arrow& ar = arrow(a);
    for (const Arrow* g : out_arrows(ar.target))
        if (has_relation(g->name, a)) return g->name;
    return std::nullopt;
}

std::optional<std::string> Presentation::rel_predecessor(const std::string& a) const {
    const Arrow& ar = arrow(a);
    for (const Arrow* f : in_arrows(ar.source))
        if (has_relation(a, f->name)) return f->name;
    return std::nullopt;
}

std::optional<std::string> Presentation::free_successor(const std::string& a) const {
    const Arrow& ar = arrow(a);
    for (const Arrow* g : out_arrows(ar.target))
        if (!has_relation(g->name, a)) return g->name;
    return std::nullopt;
}

std::optional<std::string> Presentation::free_predecessor(const std::string& a) const {
    const Arrow& ar = arrow(a);
    for (const Arrow* f : in_arrows(ar.source))
        if (!has_relation(a, f->name)) return f->name;
    return std::nullopt;
}

bool Presentation::connected() const {
    if (vertices.empty()) return false;
    std::set<std::string> seen{vertices.front()};
    std::vector<std::string> stack{vertices.front()};
    while (!stack.empty()) {
        std::string v = stack.back();
        stack.pop_back();
        for (const Arrow& ar : arrows) {
            std::string next;
            if (ar.source == v) next = ar.target;
            else if (ar.target == v) next = ar.source;
            else continue;
            if (seen.insert(next).second) stack.push_back(next);
        }
    }
    return seen.size() == vertices.size();
}

std::string Presentation::fresh_arrow_name(const std::string& base) const {
    std::string name = base + "'";
    while (find_arrow(name)) name += "'";
    return name;
}

namespace {

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '_' || c == '\'' || c == '-' || c == '.';
        if (!ok) return false;
    }
    return true;
}

struct LineTokens {
    int line = 0;
    std::vector<std::pair<std::string, int>> toks;  // token, 1-based column
};

}  // namespace

Presentation parse_quiver(const std::string& text) {
    Presentation p;
    std::vector<LineTokens> lines;
    {
        std::istringstream in(text);
        std::string raw;
        int lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            LineTokens lt;
            lt.line = lineno;
            std::string cur;
            int curcol = 0;
            for (int i = 0; i <= (int)raw.size(); ++i) {
                char c = i < (int)raw.size() ? raw[i] : ' ';
                if (c == '#') break;
                if (c == ' ' || c == '\t' || c == '\r') {
                    if (!cur.empty()) lt.toks.emplace_back(cur, curcol);
                    cur.clear();
                } else {
                    if (cur.empty()) curcol = i + 1;
                    cur += c;
                }
            }
            if (!cur.empty()) lt.toks.emplace_back(cur, curcol);
            if (!lt.toks.empty()) lines.push_back(std::move(lt));
        }
    }
    if (lines.empty()) throw parse_error("empty quiver document", 1, 1);

    auto add_vertex = [&](const std::string& v, int line, int col, bool declared) {
        if (!valid_name(v)) throw parse_error("invalid vertex name '" + v + "'", line, col);
        if (p.has_vertex(v)) {
            if (declared) throw parse_error("duplicate vertex '" + v + "'", line, col);
            return;
        }
        p.vertices.push_back(v);
    };

    for (const LineTokens& lt : lines) {
        const auto& t = lt.toks;
        const std::string& head = t[0].first;
        if (head == "quiver") {
            if (t.size() != 2) throw parse_error("expected: quiver <name>", lt.line, t[0].second);
            p.name = t[1].first;
        } else if (head == "vertex") {
            if (t.size() < 2) throw parse_error("expected: vertex <v>...", lt.line, t[0].second);
            for (size_t i = 1; i < t.size(); ++i) add_vertex(t[i].first, lt.line, t[i].second, true);
        } else if (head == "arrow") {
            // arrow a: u -> v   (the colon may stick to the name)
            std::vector<std::pair<std::string, int>> parts(t.begin() + 1, t.end());
            if (!parts.empty() && parts[0].first.size() > 1 && parts[0].first.back() == ':') {
                int col = parts[0].second;
                std::string nm = parts[0].first.substr(0, parts[0].first.size() - 1);
                parts[0] = {nm, col};
                parts.insert(parts.begin() + 1, {":", col + (int)nm.size()});
            }
            if (parts.size() != 5 || parts[1].first != ":" || parts[3].first != "->")
                throw parse_error("expected: arrow <a>: <u> -> <v>", lt.line, t[0].second);
            const std::string& nm = parts[0].first;
            if (!valid_name(nm)) throw parse_error("invalid arrow name '" + nm + "'", lt.line, parts[0].second);
            if (p.find_arrow(nm)) throw parse_error("duplicate arrow '" + nm + "'", lt.line, parts[0].second);
            add_vertex(parts[2].first, lt.line, parts[2].second, false);
            add_vertex(parts[4].first, lt.line, parts[4].second, false);
            p.arrows.push_back({nm, parts[2].first, parts[4].first});
        } else if (head == "rel") {
            if (t.size() != 3) throw parse_error("expected: rel <g> <f>", lt.line, t[0].second);
            const Arrow* g = p.find_arrow(t[1].first);
            const Arrow* f = p.find_arrow(t[2].first);
            if (!g) throw parse_error("unknown arrow '" + t[1].first + "' in rel", lt.line, t[1].second);
            if (!f) throw parse_error("unknown arrow '" + t[2].first + "' in rel", lt.line, t[2].second);
            if (f->target != g->source)
                throw parse_error("relation " + g->name + " " + f->name +
                                      " is not composable: target(" + f->name + ") != source(" + g->name + ")",
                                  lt.line, t[1].second);
            if (p.has_relation(g->name, f->name))
                throw parse_error("duplicate relation " + g->name + " " + f->name, lt.line, t[1].second);
            p.relations.push_back({g->name, f->name});
        } else {
            throw parse_error("unknown directive '" + head + "'", lt.line, t[0].second);
        }
    }
    if (p.vertices.empty()) throw parse_error("quiver has no vertices", lines.back().line, 1);
    return p;
}

std::string to_dsl(const Presentation& p) {
    std::ostringstream out;
    if (!p.name.empty()) out << "quiver " << p.name << "\n";
    out << "vertex";
    for (const std::string& v : p.vertices) out << " " << v;
    out << "\n";
    for (const Arrow& a : p.arrows) out << "arrow " << a.name << ": " << a.source << " -> " << a.target << "\n";
    for (const Relation& r : p.relations) out << "rel " << r.g << " " << r.f << "\n";
    return out.str();
}

nlohmann::ordered_json to_json(const Presentation& p) {
    nlohmann::ordered_json j;
    std::vector<std::string> vs = p.vertices;
    std::sort(vs.begin(), vs.end());
    j["vertices"] = vs;
    std::vector<Arrow> as = p.arrows;
    std::sort(as.begin(), as.end(), [](const Arrow& a, const Arrow& b) { return a.name < b.name; });
    j["arrows"] = nlohmann::ordered_json::array();
    for (const Arrow& a : as)
        j["arrows"].push_back({{"name", a.name}, {"source", a.source}, {"target", a.target}});
    std::vector<Relation> rs = p.relations;
    std::sort(rs.begin(), rs.end());
    j["relations"] = nlohmann::ordered_json::array();
    for (const Relation& r : rs) j["relations"].push_back({r.g, r.f});
    return j;
}

ValidationReport validate_gentle(const Presentation& p) {
    ValidationReport rep;
    if (!p.connected()) rep.violations.push_back({"disconnected", "quiver is not connected"});

    // (1) at most two arrows start / end at each vertex
    for (const std::string& v : p.vertices) {
        if (p.out_degree(v) > 2) rep.violations.push_back({"1", "vertex " + v + " has out-degree > 2"});
        if (p.in_degree(v) > 2) rep.violations.push_back({"1", "vertex " + v + " has in-degree > 2"});
    }
    // (2)/(5): each arrow has at most one free and at most one bound
    // continuation on either side
    for (const Arrow& b : p.arrows) {
        int freeSucc = 0, relSucc = 0, freePred = 0, relPred = 0;
        for (const Arrow& g : p.arrows) {
            if (g.source == b.target) (p.has_relation(g.name, b.name) ? relSucc : freeSucc)++;
            if (g.target == b.source) (p.has_relation(b.name, g.name) ? relPred : freePred)++;
        }
        if (freeSucc > 1) rep.violations.push_back({"2", "arrow " + b.name + " has " + std::to_string(freeSucc) + " relation-free continuations"});
        if (freePred > 1) rep.violations.push_back({"2", "arrow " + b.name + " has " + std::to_string(freePred) + " relation-free predecessors"});
        if (relSucc > 1) rep.violations.push_back({"5", "arrow " + b.name + " lies in " + std::to_string(relSucc) + " relations on the left"});
        if (relPred > 1) rep.violations.push_back({"5", "arrow " + b.name + " lies in " + std::to_string(relPred) + " relations on the right"});
    }
    // (3): no oriented cycle whose consecutive compositions all avoid P.
    // Walk the relation-free successor graph on arrows; it has out-degree
    // <= 1 once (2) holds, but we detect cycles even without (2).
    {
        std::map<std::string, int> state;  // 0 unvisited, 1 on stack, 2 done
        std::vector<std::string> order;
        bool cyclic = false;
        std::string site;
        auto dfs = [&](auto&& self, const std::string& a) -> void {
            state[a] = 1;
            for (const Arrow& g : p.arrows) {
                if (g.source != p.arrow(a).target || p.has_relation(g.name, a)) continue;
                if (state[g.name] == 1) {
                    cyclic = true;
                    if (site.empty()) site = "relation-free cycle through arrow " + g.name;
                } else if (state[g.name] == 0) {
                    self(self, g.name);
                }
            }
            state[a] = 2;
        };
        for (const Arrow& a : p.arrows)
            if (state[a.name] == 0) dfs(dfs, a.name);
        if (cyclic) rep.violations.push_back({"3", site});
    }
    // (4) holds by construction: relations are stored as arrow pairs.
    rep.ok = rep.violations.empty();
    return rep;
}

int cycle_number(const Presentation& p) {
    if (!p.connected()) throw domain_error("cycle_number requires a connected quiver");
    return (int)p.arrows.size() - (int)p.vertices.size() + 1;
}

}  // namespace gentle

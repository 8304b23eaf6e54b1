#include "gentle/transforms.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "gentle/canonical.hpp"

namespace gentle {

std::string to_string(const TransformStep& s) {
    const char* k = s.kind == StepKind::vertex ? "V" : s.kind == StepKind::arrow ? "F" : "L";
    return std::string(k) + (s.inverse ? "-" : "") + " " + s.site;
}

TransformStep parse_step(const std::string& text) {
    std::istringstream in(text);
    std::string kind, site;
    if (!(in >> kind >> site)) throw domain_error("cannot parse step '" + text + "'");
    TransformStep s;
    if (!kind.empty() && kind.back() == '-') {
        s.inverse = true;
        kind.pop_back();
    }
    if (kind == "V") s.kind = StepKind::vertex;
    else if (kind == "F") s.kind = StepKind::arrow;
    else if (kind == "L") s.kind = StepKind::loop;
    else throw domain_error("unknown step kind '" + kind + "'");
    s.site = site;
    return s;
}

std::string to_string(const MoveSpec& m) {
    return std::string("m") + (m.inverse ? "-" : "") + " " + to_string(m.token);
}

Presentation mirror(const Presentation& p) {
    Presentation q;
    q.name = p.name;
    q.vertices = p.vertices;
    for (const Arrow& a : p.arrows) q.arrows.push_back({a.name, a.target, a.source});
    for (const Relation& r : p.relations) q.relations.push_back({r.f, r.g});
    return q;
}

namespace {

// Endpoint surgery shared by the three transformations: participants are
// renamed with a prime, local relations swapped out, far-side relations
// carried over under the renaming.
struct Surgery {
    const Presentation& src;
    std::map<std::string, std::pair<std::string, std::string>> endpoints;  // participant -> new (s,e)
    std::vector<std::pair<std::string, std::string>> removedRels;          // old names
    std::vector<std::pair<std::string, std::string>> addedRels;            // old names, mapped on build

    explicit Surgery(const Presentation& p) : src(p) {}

    void move(const std::string& a, const std::string& s, const std::string& e) {
        endpoints[a] = {s, e};
    }
    void rename_only(const std::string& a) {
        const Arrow& ar = src.arrow(a);
        endpoints[a] = {ar.source, ar.target};
    }
    void drop_rel(const std::string& g, const std::string& f) {
        if (src.has_relation(g, f)) removedRels.emplace_back(g, f);
    }
    void add_rel(const std::string& g, const std::string& f) { addedRels.emplace_back(g, f); }

    Presentation build() const {
        Presentation q;
        q.name = src.name;
        q.vertices = src.vertices;
        // deterministic fresh names for participants, in name order
        std::map<std::string, std::string> rename;
        std::set<std::string> taken;
        for (const Arrow& a : src.arrows)
            if (!endpoints.count(a.name)) taken.insert(a.name);
        std::vector<std::string> parts;
        for (const auto& [a, se] : endpoints) parts.push_back(a);
        std::sort(parts.begin(), parts.end());
        for (const std::string& a : parts) {
            std::string nm = a + "'";
            while (taken.count(nm)) nm += "'";
            taken.insert(nm);
            rename[a] = nm;
        }
        auto nm = [&](const std::string& a) {
            auto it = rename.find(a);
            return it == rename.end() ? a : it->second;
        };
        for (const Arrow& a : src.arrows) {
            auto it = endpoints.find(a.name);
            if (it == endpoints.end()) q.arrows.push_back(a);
            else q.arrows.push_back({rename.at(a.name), it->second.first, it->second.second});
        }
        auto dropped = [&](const Relation& r) {
            for (const auto& [g, f] : removedRels)
                if (r.g == g && r.f == f) return true;
            return false;
        };
        for (const Relation& r : src.relations)
            if (!dropped(r)) q.relations.push_back({nm(r.g), nm(r.f)});
        for (const auto& [g, f] : addedRels) q.relations.push_back({nm(g), nm(f)});
        return q;
    }
};

Presentation finish(const Surgery& s, const std::string& what) {
    Presentation q = s.build();
    ValidationReport rep = validate_gentle(q);
    if (!rep.ok)
        throw domain_error("internal: " + what + " produced an invalid presentation (" +
                           rep.violations.front().condition + ": " + rep.violations.front().site + ")");
    return q;
}

struct VertexCase {
    int kase = 1;   // 1, 2, 3
    char sub = 0;   // 'a' or 'b' when kase == 2
    std::string a1, a2;  // the two outgoing arrows, special one first in case 2
    std::string s1, s2;  // sigma_m: rel-successor of alpha_m ("" if absent)
    std::string p1, p2;  // pi_m: rel-predecessor of alpha_m ("" if absent)
};

VertexCase analyze_vertex(const Presentation& p, const std::string& i) {
    auto outs = p.out_arrows(i);
    if (outs.size() != 2)
        throw domain_error("vertex transformation needs two outgoing arrows at " + i);
    if (outs[0]->is_loop() || outs[1]->is_loop())
        throw domain_error("vertex transformation at " + i + " excludes loops");
    VertexCase vc;
    vc.a1 = std::min(outs[0]->name, outs[1]->name);
    vc.a2 = std::max(outs[0]->name, outs[1]->name);
    auto sig = [&](const std::string& a) { return p.rel_successor(a).value_or(""); };
    auto ends_at_i = [&](const std::string& a) { return !a.empty() && p.arrow(a).target == i; };
    vc.s1 = sig(vc.a1);
    vc.s2 = sig(vc.a2);
    bool r1 = ends_at_i(vc.s1), r2 = ends_at_i(vc.s2);
    if (r1 && r2) {
        vc.kase = 3;
        return vc;
    }
    if (r2 && !r1) {
        std::swap(vc.a1, vc.a2);
        std::swap(vc.s1, vc.s2);
    }
    if (r1 || r2) {
        vc.kase = 2;
        // sigma_1 closes a 2-cycle at i; it is pi_1 (both compositions in P)
        // in sub-case (a) and pi_2 (the relation partner of alpha_2) in (b)
        if (p.has_relation(vc.a1, vc.s1)) {
            vc.sub = 'a';
            vc.p1 = vc.s1;
            vc.p2 = p.rel_predecessor(vc.a2).value_or("");
        } else if (p.has_relation(vc.a2, vc.s1)) {
            vc.sub = 'b';
            vc.p2 = vc.s1;
            vc.p1 = p.rel_predecessor(vc.a1).value_or("");
        } else {
            throw domain_error("internal: returning arrow at " + i + " has no relation partner");
        }
        return vc;
    }
    vc.kase = 1;
    vc.p1 = p.rel_predecessor(vc.a1).value_or("");
    vc.p2 = p.rel_predecessor(vc.a2).value_or("");
    return vc;
}

}  // namespace

Presentation vertex_transform(const Presentation& p, const std::string& i) {
    VertexCase vc = analyze_vertex(p, i);
    if (vc.kase == 3) return p;

    const std::string j1 = p.arrow(vc.a1).target, j2 = p.arrow(vc.a2).target;
    Surgery s(p);
    s.move(vc.a1, j1, i);
    s.move(vc.a2, j2, i);
    if (vc.kase == 1) {
        if (!vc.s1.empty()) s.move(vc.s1, i, p.arrow(vc.s1).target);
        if (!vc.s2.empty()) s.move(vc.s2, i, p.arrow(vc.s2).target);
        if (!vc.p1.empty()) s.move(vc.p1, p.arrow(vc.p1).source, j2);
        if (!vc.p2.empty()) s.move(vc.p2, p.arrow(vc.p2).source, j1);
        if (!vc.s1.empty()) s.drop_rel(vc.s1, vc.a1);
        if (!vc.s2.empty()) s.drop_rel(vc.s2, vc.a2);
        if (!vc.p1.empty()) s.drop_rel(vc.a1, vc.p1);
        if (!vc.p2.empty()) s.drop_rel(vc.a2, vc.p2);
        if (!vc.s1.empty()) s.add_rel(vc.s1, vc.a2);
        if (!vc.s2.empty()) s.add_rel(vc.s2, vc.a1);
        if (!vc.p2.empty()) s.add_rel(vc.a1, vc.p2);
        if (!vc.p1.empty()) s.add_rel(vc.a2, vc.p1);
        return finish(s, "V_" + i + " (case 1)");
    }
    if (vc.sub == 'a') {
        const std::string c = vc.s1;  // = pi_1, the j1 -> i arrow
        s.move(c, i, j2);
        if (!vc.p2.empty()) s.move(vc.p2, p.arrow(vc.p2).source, j1);
        if (!vc.s2.empty()) s.move(vc.s2, i, p.arrow(vc.s2).target);
        s.drop_rel(c, vc.a1);
        s.drop_rel(vc.a1, c);
        if (!vc.s2.empty()) s.drop_rel(vc.s2, vc.a2);
        if (!vc.p2.empty()) s.drop_rel(vc.a2, vc.p2);
        s.add_rel(c, vc.a2);
        if (!vc.s2.empty()) s.add_rel(vc.s2, vc.a1);
        if (!vc.p2.empty()) s.add_rel(vc.a1, vc.p2);
        s.add_rel(vc.a2, c);
        return finish(s, "V_" + i + " (case 2a)");
    }
    const std::string c = vc.s1;  // = pi_2
    s.move(c, i, j1);
    if (!vc.p1.empty()) s.move(vc.p1, p.arrow(vc.p1).source, j2);
    if (!vc.s2.empty()) s.move(vc.s2, i, p.arrow(vc.s2).target);
    s.drop_rel(c, vc.a1);
    if (!vc.p1.empty()) s.drop_rel(vc.a1, vc.p1);
    if (!vc.s2.empty()) s.drop_rel(vc.s2, vc.a2);
    s.drop_rel(vc.a2, c);
    s.add_rel(c, vc.a2);
    if (!vc.s2.empty()) s.add_rel(vc.s2, vc.a1);
    s.add_rel(vc.a1, c);
    if (!vc.p1.empty()) s.add_rel(vc.a2, vc.p1);
    return finish(s, "V_" + i + " (case 2b)");
}

namespace {

struct ArrowRoles {
    std::string beta, lambda, gamma, xi;
};

ArrowRoles arrow_roles(const Presentation& p, const std::string& delta) {
    const Arrow& d = p.arrow(delta);
    ArrowRoles r;
    for (const Arrow* mu : p.in_arrows(d.source)) {
        if (p.has_relation(delta, mu->name)) r.beta = mu->name;
        else {
            if (!r.lambda.empty())
                throw domain_error("internal: two relation-free predecessors of " + delta);
            r.lambda = mu->name;
        }
    }
    for (const Arrow* g : p.out_arrows(d.source))
        if (g->name != delta) r.gamma = g->name;
    r.xi = p.rel_successor(delta).value_or("");
    return r;
}

}  // namespace

namespace {

// With xi equal to beta or lambda (an anti-parallel two-cycle through
// delta) the local picture of the rewrite degenerates; on the thread
// array the corresponding move is the identity, so these sites are not
// offered as applicable steps.
bool f_degenerate(const ArrowRoles& r) {
    return !r.xi.empty() && (r.xi == r.beta || r.xi == r.lambda);
}

}  // namespace

bool f_component_condition(const Presentation& p, const std::string& delta) {
    const Arrow& d = p.arrow(delta);
    if (d.is_loop()) return false;
    ArrowRoles r = arrow_roles(p, delta);
    if (f_degenerate(r)) return false;
    if (r.beta.empty() && r.gamma.empty()) return true;
    // components of the quiver without beta and gamma, via union-find
    std::map<std::string, std::string> parent;
    for (const std::string& v : p.vertices) parent[v] = v;
    auto find = [&](std::string v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (const Arrow& a : p.arrows) {
        if (a.name == r.beta || a.name == r.gamma) continue;
        parent[find(a.source)] = find(a.target);
    }
    std::set<std::string> q1;
    if (!r.beta.empty()) q1.insert(find(p.arrow(r.beta).source));
    if (!r.gamma.empty()) q1.insert(find(p.arrow(r.gamma).target));
    return !q1.count(find(d.source));
}

Presentation arrow_transform(const Presentation& p, const std::string& delta) {
    const Arrow& d = p.arrow(delta);
    if (d.is_loop()) throw domain_error("arrow transformation requires a non-loop arrow");
    ArrowRoles r = arrow_roles(p, delta);
    if (f_degenerate(r))
        throw domain_error("arrow transformation at " + delta +
                           ": degenerate two-cycle configuration (the move is the identity)");
    if (!f_component_condition(p, delta))
        throw domain_error("arrow transformation at " + delta +
                           ": the split components overlap (F not applicable)");
    const std::string i = d.source, j = d.target;
    Surgery s(p);
    s.move(delta, j, i);
    if (!r.lambda.empty()) s.move(r.lambda, p.arrow(r.lambda).source, j);
    if (!r.xi.empty()) s.move(r.xi, i, p.arrow(r.xi).target);
    if (!r.beta.empty()) s.rename_only(r.beta);
    if (!r.gamma.empty()) s.rename_only(r.gamma);
    if (!r.beta.empty()) s.drop_rel(delta, r.beta);
    if (!r.gamma.empty() && !r.lambda.empty()) s.drop_rel(r.gamma, r.lambda);
    if (!r.xi.empty()) s.drop_rel(r.xi, delta);
    if (!r.gamma.empty()) s.add_rel(r.gamma, delta);
    if (!r.xi.empty() && !r.beta.empty()) s.add_rel(r.xi, r.beta);
    if (!r.lambda.empty()) s.add_rel(delta, r.lambda);
    return finish(s, "F_" + delta);
}

Presentation loop_transform(const Presentation& p, const std::string& lambda) {
    const Arrow& l = p.arrow(lambda);
    if (!l.is_loop()) throw domain_error("loop transformation requires a loop");
    const std::string i = l.source;
    std::string delta, alpha;
    for (const Arrow* a : p.out_arrows(i))
        if (!a->is_loop()) delta = a->name;
    for (const Arrow* a : p.in_arrows(i))
        if (!a->is_loop()) alpha = a->name;
    if (delta.empty())
        throw domain_error("loop transformation at " + lambda + " needs an outgoing non-loop arrow");
    const std::string j = p.arrow(delta).target;
    std::string xi = p.rel_successor(delta).value_or("");
    if (!xi.empty() && xi == alpha)
        throw domain_error("loop transformation at " + lambda +
                           ": degenerate two-cycle configuration (the move is the identity)");
    Surgery s(p);
    s.move(delta, j, i);
    if (!alpha.empty()) s.move(alpha, p.arrow(alpha).source, j);
    if (!xi.empty()) s.move(xi, i, p.arrow(xi).target);
    if (!alpha.empty()) s.drop_rel(delta, alpha);
    if (!xi.empty()) s.drop_rel(xi, delta);
    if (!alpha.empty()) s.add_rel(delta, alpha);
    if (!xi.empty()) s.add_rel(xi, delta);
    return finish(s, "L_" + lambda);
}

bool step_applicable(const Presentation& p, const TransformStep& s) {
    const Presentation q = s.inverse ? mirror(p) : p;
    switch (s.kind) {
        case StepKind::vertex: {
            if (!q.has_vertex(s.site)) return false;
            auto outs = q.out_arrows(s.site);
            return outs.size() == 2 && !outs[0]->is_loop() && !outs[1]->is_loop();
        }
        case StepKind::arrow: {
            const Arrow* a = q.find_arrow(s.site);
            return a && !a->is_loop() && f_component_condition(q, s.site);
        }
        case StepKind::loop: {
            const Arrow* a = q.find_arrow(s.site);
            if (!a || !a->is_loop()) return false;
            for (const Arrow* o : q.out_arrows(a->source))
                if (!o->is_loop()) {
                    std::string alpha;
                    for (const Arrow* in : q.in_arrows(a->source))
                        if (!in->is_loop()) alpha = in->name;
                    auto xi = q.rel_successor(o->name);
                    return !(xi && !alpha.empty() && *xi == alpha);
                }
            return false;
        }
    }
    return false;
}

std::vector<TransformStep> applicable_steps(const Presentation& p) {
    std::vector<TransformStep> out;
    std::vector<std::string> vs = p.vertices, as;
    for (const Arrow& a : p.arrows) as.push_back(a.name);
    std::sort(vs.begin(), vs.end());
    std::sort(as.begin(), as.end());
    for (bool inv : {false, true}) {
        for (const std::string& v : vs) {
            TransformStep s{StepKind::vertex, inv, v};
            if (step_applicable(p, s)) out.push_back(s);
        }
        for (const std::string& a : as) {
            TransformStep s{StepKind::arrow, inv, a};
            if (step_applicable(p, s)) out.push_back(s);
        }
        for (const std::string& a : as) {
            TransformStep s{StepKind::loop, inv, a};
            if (step_applicable(p, s)) out.push_back(s);
        }
    }
    return out;
}

Presentation apply_step(const Presentation& p, const TransformStep& s) {
    if (s.inverse) {
        Presentation m = mirror(p);
        Presentation r;
        switch (s.kind) {
            case StepKind::vertex: r = vertex_transform(m, s.site); break;
            case StepKind::arrow: r = arrow_transform(m, s.site); break;
            case StepKind::loop: r = loop_transform(m, s.site); break;
        }
        return mirror(r);
    }
    switch (s.kind) {
        case StepKind::vertex: return vertex_transform(p, s.site);
        case StepKind::arrow: return arrow_transform(p, s.site);
        case StepKind::loop: return loop_transform(p, s.site);
    }
    throw domain_error("unreachable");
}

TransformStep invert(const TransformStep& s) { return {s.kind, !s.inverse, s.site}; }

Presentation apply_inverse(const Presentation& p, const TransformStep& s) {
    return apply_step(p, invert(s));
}

namespace {

std::pair<int, int> locate(const ThreadArray& a, const Token& t) {
    for (int c = 0; c < (int)a.columns.size(); ++c)
        for (int r = 0; r < (int)a.columns[c].size(); ++r)
            if (a.columns[c][r] == t) return {c, r};
    throw domain_error("token " + to_string(t) + " not present in the array");
}

}  // namespace

ThreadArray move_thread(const ThreadArray& a, const MoveSpec& m) {
    ThreadArray out = a;
    auto [c, r] = locate(out, m.token);
    Token neighbor;
    if (!m.inverse) {
        if (r + 1 >= (int)out.columns[c].size())
            throw domain_error("move " + to_string(m) + ": no token below " + to_string(m.token));
        neighbor = out.columns[c][r + 1];
    } else {
        if (r == 0)
            throw domain_error("move " + to_string(m) + ": no token above " + to_string(m.token));
        neighbor = out.columns[c][r - 1];
    }
    if (neighbor.vertex == m.token.vertex)
        throw domain_error("move " + to_string(m) + ": adjacent token belongs to the same vertex");
    Token target{neighbor.vertex, -neighbor.sign};
    out.columns[c].erase(out.columns[c].begin() + r);
    auto [tc, tr] = locate(out, target);
    out.columns[tc].insert(out.columns[tc].begin() + tr + (m.inverse ? 0 : 1), m.token);
    return out;
}

std::vector<MoveSpec> paper_move_decomposition(const Presentation& p, const TransformStep& s) {
    if (s.inverse)
        throw domain_error("paper_move_decomposition covers forward steps only");
    SignAssignment sa = assign_signs(p);
    switch (s.kind) {
        case StepKind::vertex: {
            VertexCase vc = analyze_vertex(p, s.site);
            return {{{s.site, sa.sigma.at(vc.a2)}, false}, {{s.site, sa.sigma.at(vc.a1)}, false}};
        }
        case StepKind::arrow: {
            const Arrow& d = p.arrow(s.site);
            return {{{d.source, sa.sigma.at(s.site)}, false}};
        }
        case StepKind::loop: {
            const Arrow& l = p.arrow(s.site);
            return {{{l.source, -sa.eps.at(s.site)}, false}, {{l.source, sa.sigma.at(s.site)}, false}};
        }
    }
    throw domain_error("unreachable");
}

std::vector<MoveSpec> step_to_moves(const Presentation& p, const TransformStep& s) {
    SignAssignment sa = assign_signs(p);
    std::vector<std::vector<MoveSpec>> candidates;
    if (!s.inverse) {
        std::vector<MoveSpec> c0 = paper_move_decomposition(p, s);
        candidates.push_back(c0);
        if (c0.size() == 2) candidates.push_back({c0[1], c0[0]});
    } else {
        switch (s.kind) {
            case StepKind::vertex: {
                auto ins = p.in_arrows(s.site);
                if (ins.size() != 2) throw domain_error("inverse vertex step needs two incoming arrows");
                Token t1{s.site, -sa.eps.at(ins[0]->name)}, t2{s.site, -sa.eps.at(ins[1]->name)};
                candidates.push_back({{t1, true}, {t2, true}});
                candidates.push_back({{t2, true}, {t1, true}});
                break;
            }
            case StepKind::arrow: {
                const Arrow& d = p.arrow(s.site);
                candidates.push_back({{{d.target, -sa.eps.at(s.site)}, true}});
                candidates.push_back({{{d.target, sa.eps.at(s.site)}, true}});
                break;
            }
            case StepKind::loop: {
                const Arrow& l = p.arrow(s.site);
                Token t1{l.source, sa.sigma.at(s.site)}, t2{l.source, -sa.eps.at(s.site)};
                candidates.push_back({{t1, true}, {t2, true}});
                candidates.push_back({{t2, true}, {t1, true}});
                break;
            }
        }
    }
    Presentation target = apply_step(p, s);
    ThreadArray arr = thread_array(p, sa);
    for (const auto& cand : candidates) {
        try {
            ThreadArray cur = arr;
            for (const MoveSpec& m : cand) cur = move_thread(cur, m);
            Presentation decoded = decode_thread_array(cur);
            if (are_isomorphic(decoded, target)) return cand;
        } catch (const domain_error&) {
        }
    }
    throw domain_error("internal: no move decomposition reproduces step " + to_string(s));
}

}  // namespace gentle

#include "gentle/reduction.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "gentle/canonical.hpp"

namespace gentle {

int vertex_degree(const Presentation& p, const std::string& v) {
    if (!p.has_vertex(v)) throw domain_error("unknown vertex '" + v + "'");
    return p.in_degree(v) + p.out_degree(v);
}

std::vector<RemovalSite> removal_sites(const Presentation& p) {
    std::vector<RemovalSite> sites;
    std::vector<std::string> vs = p.vertices;
    std::sort(vs.begin(), vs.end());
    for (const std::string& v : vs) {
        auto in = p.in_arrows(v);
        auto out = p.out_arrows(v);
        if (in.size() == 1 && out.size() == 1 && in[0]->name != out[0]->name) {
            RemovalSite s{v, RemovalPattern::transition, in[0]->name, out[0]->name};
            if (p.has_relation(out[0]->name, in[0]->name)) s.pattern = RemovalPattern::cycle_transition;
            sites.push_back(s);
        } else if (in.empty() && out.size() == 1) {
            sites.push_back({v, RemovalPattern::hanging_start, "", out[0]->name});
        }
    }
    return sites;
}

Presentation remove_vertex(const Presentation& p, const RemovalSite& site) {
    if (p.vertices.size() < 3) throw domain_error("vertex removal needs at least three vertices");
    if (!p.has_vertex(site.vertex)) throw domain_error("unknown vertex '" + site.vertex + "'");
    const std::string& x = site.vertex;

    Presentation q;
    q.name = p.name;
    for (const std::string& v : p.vertices)
        if (v != x) q.vertices.push_back(v);

    if (site.pattern == RemovalPattern::transition) {
        auto in = p.in_arrows(x);
        auto out = p.out_arrows(x);
        if (in.size() != 1 || out.size() != 1 || in[0]->name == out[0]->name ||
            p.has_relation(out[0]->name, in[0]->name))
            throw domain_error("vertex " + x + " is not a transition vertex");
        const std::string alpha = in[0]->name, beta = out[0]->name;
        const std::string u = in[0]->source, v = out[0]->target;
        std::string spliced = p.fresh_arrow_name(alpha);
        for (const Arrow& a : p.arrows) {
            if (a.name == beta) continue;
            if (a.name == alpha) q.arrows.push_back({spliced, u, v});
            else q.arrows.push_back(a);
        }
        for (const Relation& r : p.relations) {
            if (r.g == alpha) q.relations.push_back({spliced, r.f});       // alpha*gamma carries over
            else if (r.f == beta) q.relations.push_back({r.g, spliced});   // gamma*beta carries over
            else q.relations.push_back(r);
        }
    } else if (site.pattern == RemovalPattern::hanging_start) {
        auto out = p.out_arrows(x);
        if (p.in_degree(x) != 0 || out.size() != 1)
            throw domain_error("vertex " + x + " is not a hanging start vertex");
        const std::string theta = out[0]->name;
        for (const Arrow& a : p.arrows)
            if (a.name != theta) q.arrows.push_back(a);
        for (const Relation& r : p.relations)
            if (r.f != theta) q.relations.push_back(r);
    } else {
        throw domain_error("vertex " + x + " matches no removable pattern of the definition");
    }
    ValidationReport rep = validate_gentle(q);
    if (!rep.ok)
        throw domain_error("internal: removal of " + x + " broke gentleness (" +
                           rep.violations.front().condition + ")");
    return q;
}

std::string to_string(const TraceStep& s) {
    if (std::holds_alternative<TransformStep>(s)) return to_string(std::get<TransformStep>(s));
    std::string out = "[";
    const MoveGroup& g = std::get<MoveGroup>(s);
    for (size_t i = 0; i < g.moves.size(); ++i) out += (i ? "; " : "") + to_string(g.moves[i]);
    return out + "]";
}

Presentation replay(const Presentation& p, const std::vector<TraceStep>& steps) {
    Presentation cur = p;
    std::optional<ThreadArray> arr;
    for (const TraceStep& s : steps) {
        if (std::holds_alternative<TransformStep>(s)) {
            if (arr) {
                cur = decode_thread_array(*arr);
                arr.reset();
            }
            cur = apply_step(cur, std::get<TransformStep>(s));
        } else {
            if (!arr) arr = thread_array(cur);
            for (const MoveSpec& m : std::get<MoveGroup>(s).moves) arr = move_thread(*arr, m);
        }
    }
    if (arr) cur = decode_thread_array(*arr);
    return cur;
}

namespace {

bool is_site(const RemovalSite& s) {
    return s.pattern == RemovalPattern::transition || s.pattern == RemovalPattern::hanging_start;
}

std::optional<RemovalSite> first_site(const Presentation& p) {
    for (const RemovalSite& s : removal_sites(p))
        if (is_site(s)) return s;
    return std::nullopt;
}

// Candidate simplification steps, in the order the branch analysis
// suggests: flip hanging ends, split double-source vertices, push
// relation transitions through F, move loops along.
std::vector<TransformStep> simplification_candidates(const Presentation& p) {
    std::vector<TransformStep> cands;
    std::vector<std::string> vs = p.vertices;
    std::sort(vs.begin(), vs.end());
    std::vector<std::string> as;
    for (const Arrow& a : p.arrows) as.push_back(a.name);
    std::sort(as.begin(), as.end());

    // degree-one end vertex: reverse its arrow
    for (const std::string& v : vs)
        if (p.out_degree(v) == 0 && p.in_degree(v) == 1)
            cands.push_back({StepKind::arrow, true, p.in_arrows(v)[0]->name});
    // double source next to a degree-two vertex
    for (const std::string& v : vs) {
        if (!(p.in_degree(v) == 0 && p.out_degree(v) == 2)) continue;
        for (const Arrow* a : p.out_arrows(v))
            if (vertex_degree(p, a->target) == 2) {
                cands.push_back({StepKind::vertex, false, v});
                break;
            }
    }
    // double sink next to a degree-two vertex
    for (const std::string& v : vs) {
        if (!(p.out_degree(v) == 0 && p.in_degree(v) == 2)) continue;
        for (const Arrow* a : p.in_arrows(v))
            if (vertex_degree(p, a->source) == 2) {
                cands.push_back({StepKind::vertex, true, v});
                break;
            }
    }
    // relation transition at the source of delta
    for (const std::string& a : as) {
        const Arrow& d = p.arrow(a);
        if (d.is_loop()) continue;
        auto in = p.in_arrows(d.source);
        if (in.size() == 1 && p.out_degree(d.source) == 1 && p.has_relation(a, in[0]->name))
            cands.push_back({StepKind::arrow, false, a});
        auto out = p.out_arrows(d.target);
        if (out.size() == 1 && p.in_degree(d.target) == 1 && p.has_relation(out[0]->name, a))
            cands.push_back({StepKind::arrow, true, a});
    }
    // loops
    for (const std::string& a : as) {
        if (!p.arrow(a).is_loop()) continue;
        cands.push_back({StepKind::loop, false, a});
        cands.push_back({StepKind::loop, true, a});
    }
    std::vector<TransformStep> ok;
    for (const TransformStep& s : cands)
        if (step_applicable(p, s)) ok.push_back(s);
    return ok;
}

}  // namespace

std::optional<std::pair<std::vector<TraceStep>, RemovalSite>> find_removable_vertex(
    const Presentation& p) {
    Presentation cur = p;
    std::vector<TraceStep> prefix;
    std::set<std::string> visited{canonical_form(p)};
    int limit = 8 * (int)p.vertices.size() + 16;
    for (int iter = 0; iter < limit; ++iter) {
        if (auto site = first_site(cur)) return std::make_pair(prefix, *site);
        bool advanced = false;
        for (const TransformStep& s : simplification_candidates(cur)) {
            Presentation next = apply_step(cur, s);
            if (!visited.insert(canonical_form(next)).second) continue;
            prefix.push_back(s);
            cur = std::move(next);
            advanced = true;
            break;
        }
        if (!advanced) return std::nullopt;
    }
    return std::nullopt;
}

namespace {

struct BfsResult {
    bool found = false;
    std::vector<TraceStep> steps;
    Presentation final;
    long expansions = 0;
};

BfsResult bfs_to(const Presentation& start, const std::string& targetKey, long budget) {
    BfsResult res;
    struct Node {
        Presentation p;
        int parent;
        TransformStep step;
    };
    std::vector<Node> nodes;
    std::map<std::string, int> seen;
    std::deque<int> queue;
    std::string k0 = canonical_form(start);
    nodes.push_back({start, -1, {}});
    seen[k0] = 0;
    queue.push_back(0);
    if (k0 == targetKey) {
        res.found = true;
        res.final = start;
        return res;
    }
    while (!queue.empty() && res.expansions < budget) {
        int id = queue.front();
        queue.pop_front();
        ++res.expansions;
        Presentation base = nodes[id].p;  // copy: nodes may reallocate below
        for (const TransformStep& s : applicable_steps(base)) {
            Presentation next = apply_step(base, s);
            std::string key = canonical_form(next);
            if (seen.count(key)) continue;
            nodes.push_back({next, id, s});
            int nid = (int)nodes.size() - 1;
            seen[key] = nid;
            if (key == targetKey) {
                std::vector<TraceStep> steps;
                for (int cur = nid; cur > 0; cur = nodes[cur].parent)
                    steps.push_back(nodes[cur].step);
                std::reverse(steps.begin(), steps.end());
                res.found = true;
                res.steps = std::move(steps);
                res.final = nodes[nid].p;
                return res;
            }
            queue.push_back(nid);
        }
    }
    return res;
}

// The thread array of the big presentation minus the tokens of x; by the
// removal correspondence this is a thread array of p minus x.
ThreadArray strip_vertex(const ThreadArray& a, const std::string& x) {
    ThreadArray out;
    for (const auto& col : a.columns) {
        std::vector<Token> kept;
        for (const Token& t : col)
            if (t.vertex != x) kept.push_back(t);
        if (!kept.empty()) out.columns.push_back(std::move(kept));
    }
    return out;
}

// Move decomposition of a step against an explicit array state; tokens
// are searched over both signs/orders so the array's gauge is irrelevant.
std::optional<std::pair<std::vector<MoveSpec>, ThreadArray>> step_moves_on(
    const Presentation& state, const ThreadArray& arr, const TransformStep& s) {
    std::vector<std::vector<MoveSpec>> candidates;
    auto both_orders = [&](Token a, Token b, bool inv) {
        candidates.push_back({{a, inv}, {b, inv}});
        candidates.push_back({{b, inv}, {a, inv}});
    };
    switch (s.kind) {
        case StepKind::vertex: {
            both_orders({s.site, +1}, {s.site, -1}, s.inverse);
            break;
        }
        case StepKind::arrow: {
            const Arrow& d = state.arrow(s.site);
            std::string v = s.inverse ? d.target : d.source;
            candidates.push_back({{{v, +1}, s.inverse}});
            candidates.push_back({{{v, -1}, s.inverse}});
            break;
        }
        case StepKind::loop: {
            const Arrow& l = state.arrow(s.site);
            both_orders({l.source, +1}, {l.source, -1}, s.inverse);
            break;
        }
    }
    Presentation target = apply_step(state, s);
    for (const auto& cand : candidates) {
        try {
            ThreadArray cur = arr;
            for (const MoveSpec& m : cand) cur = move_thread(cur, m);
            if (are_isomorphic(decode_thread_array(cur), target))
                return std::make_pair(cand, cur);
        } catch (const domain_error&) {
        }
    }
    return std::nullopt;
}

}  // namespace

ReductionTrace reduce_to_normal_form(const Presentation& p, long budget) {
    ValidationReport rep = validate_gentle(p);
    if (!rep.ok) throw domain_error("reduce_to_normal_form requires a valid gentle presentation");
    if (cycle_number(p) != 2) throw domain_error("reduce_to_normal_form requires c(Q) = 2");
    PhiInvariant phi = compute_phi(p);
    if (phi.pairs.size() != 3)
        throw domain_error("reduce_to_normal_form requires #phi = 3, got " +
                           std::to_string(phi.pairs.size()));
    Presentation target = build_normal_form(triple_from_phi(phi));
    std::string targetKey = canonical_form(target);

    ReductionTrace trace;
    if (canonical_form(p) == targetKey) {
        trace.final = p;
        trace.complete = true;
        return trace;
    }

    if (p.vertices.size() >= 6) {
        if (auto found = find_removable_vertex(p)) {
            auto& [prefix, site] = *found;
            Presentation big = replay(p, prefix);
            ThreadArray bigArr = thread_array(big);
            ThreadArray smallArr = strip_vertex(bigArr, site.vertex);
            try {
                Presentation small = decode_thread_array(smallArr);
                ReductionTrace sub = reduce_to_normal_form(small, budget);
                if (sub.complete) {
                    // lift the sub-trace over the removed vertex
                    std::vector<TraceStep> lifted = prefix;
                    Presentation smallState = small;
                    ThreadArray curSmall = smallArr, curBig = bigArr;
                    bool ok = true;
                    for (const TraceStep& ts : sub.steps) {
                        std::vector<MoveSpec> moves;
                        if (std::holds_alternative<MoveGroup>(ts)) {
                            moves = std::get<MoveGroup>(ts).moves;
                        } else {
                            auto dec = step_moves_on(smallState, curSmall, std::get<TransformStep>(ts));
                            if (!dec) {
                                ok = false;
                                break;
                            }
                            moves = dec->first;
                            smallState = apply_step(smallState, std::get<TransformStep>(ts));
                        }
                        MoveGroup lifting;
                        for (const MoveSpec& m : moves) {
                            auto loc = [&](const ThreadArray& a, const Token& t) -> std::optional<Token> {
                                for (const auto& col : a.columns)
                                    for (size_t r = 0; r < col.size(); ++r)
                                        if (col[r] == t) {
                                            if (!m.inverse && r + 1 < col.size()) return col[r + 1];
                                            if (m.inverse && r > 0) return col[r - 1];
                                            return std::nullopt;
                                        }
                                return std::nullopt;
                            };
                            auto nb = loc(curBig, m.token);
                            if (nb && nb->vertex == site.vertex) {
                                MoveSpec fix{*nb, m.inverse};
                                curBig = move_thread(curBig, fix);
                                lifting.moves.push_back(fix);
                            }
                            curBig = move_thread(curBig, m);
                            curSmall = move_thread(curSmall, m);
                            lifting.moves.push_back(m);
                        }
                        if (!ok) break;
                        lifted.push_back(lifting);
                    }
                    if (ok) {
                        Presentation lifting = decode_thread_array(curBig);
                        BfsResult tail = bfs_to(lifting, targetKey, budget);
                        trace.expansions = sub.expansions + tail.expansions;
                        if (tail.found) {
                            for (const TraceStep& s : tail.steps) lifted.push_back(s);
                            trace.steps = std::move(lifted);
                            trace.final = tail.final;
                            trace.complete = true;
                            return trace;
                        }
                    }
                }
            } catch (const domain_error&) {
                // fall through to plain search
            }
        }
    }

    BfsResult direct = bfs_to(p, targetKey, budget);
    trace.expansions += direct.expansions;
    if (direct.found) {
        trace.steps = direct.steps;
        trace.final = direct.final;
        trace.complete = true;
    } else {
        trace.final = p;
        trace.note = "budget exhausted after " + std::to_string(direct.expansions) + " expansions";
    }
    return trace;
}

Decision decide_derived_equivalence(const Presentation& a, const Presentation& b) {
    for (const Presentation* p : {&a, &b}) {
        ValidationReport rep = validate_gentle(*p);
        if (!rep.ok) throw domain_error("decide_derived_equivalence requires valid gentle presentations");
    }
    Decision d;
    if (a.vertices.size() < 2 || b.vertices.size() < 2) {
        d.verdict = Verdict::out_of_scope;
        d.reason = "one-vertex presentations lie outside the sign-function machinery";
        return d;
    }
    d.phi_a = compute_phi(a);
    d.phi_b = compute_phi(b);
    if (!phi_equal(d.phi_a, d.phi_b)) {
        d.verdict = Verdict::not_equivalent;
        d.reason = "the invariants differ, so the algebras are not derived equivalent";
        return d;
    }
    int ca = cycle_number(a), cb = cycle_number(b);
    if (ca == 2 && cb == 2 && phi_cardinality(d.phi_a) == 3) {
        d.verdict = Verdict::equivalent;
        d.reason = "two-cycle presentations with #phi = 3 and equal invariants are derived equivalent";
    } else if (ca <= 1 && cb <= 1) {
        d.verdict = Verdict::equivalent;
        d.reason = "presentations with at most one cycle and equal invariants are derived equivalent";
    } else {
        d.verdict = Verdict::out_of_scope;
        d.reason = "equal invariants, but no classification covers this configuration (c = " +
                   std::to_string(ca) + ", #phi = " + std::to_string(phi_cardinality(d.phi_a)) + ")";
    }
    return d;
}

}  // namespace gentle

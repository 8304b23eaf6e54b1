#include "gentle/enumeration.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "gentle/canonical.hpp"
#include "gentle/threads.hpp"
#include "gentle/transforms.hpp"

namespace gentle {

namespace {

Presentation materialize(int n, const std::vector<std::pair<int, int>>& arcs,
                         const std::vector<std::pair<int, int>>& rels) {
    Presentation p;
    for (int v = 1; v <= n; ++v) p.vertices.push_back("v" + std::to_string(v));
    for (int i = 0; i < (int)arcs.size(); ++i)
        p.arrows.push_back({"a" + std::to_string(i + 1), "v" + std::to_string(arcs[i].first + 1),
                            "v" + std::to_string(arcs[i].second + 1)});
    for (auto [g, f] : rels)
        p.relations.push_back({p.arrows[g].name, p.arrows[f].name});
    return p;
}

bool multigraph_connected(int n, const std::vector<std::pair<int, int>>& arcs) {
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (auto [s, e] : arcs) parent[find(s)] = find(e);
    for (int v = 1; v < n; ++v)
        if (find(v) != find(0)) return false;
    return true;
}

// Per-vertex relation choices: every incoming arrow pairs with at most
// one outgoing arrow and vice versa, and degree-2 slots force exactly one
// bound continuation (conditions (2)/(5) hold locally by construction).
void relation_choices_at(const std::vector<int>& ins, const std::vector<int>& outs,
                         std::vector<std::vector<std::pair<int, int>>>& out) {
    out.clear();
    size_t ni = ins.size(), no = outs.size();
    if (ni == 0 || no == 0) {
        out.push_back({});
        return;
    }
    if (ni == 1 && no == 1) {
        out.push_back({});
        out.push_back({{outs[0], ins[0]}});
        return;
    }
    if (ni == 1) {  // two outgoing: exactly one carries the relation
        out.push_back({{outs[0], ins[0]}});
        out.push_back({{outs[1], ins[0]}});
        return;
    }
    if (no == 1) {
        out.push_back({{outs[0], ins[0]}});
        out.push_back({{outs[0], ins[1]}});
        return;
    }
    // 2x2: a perfect matching
    out.push_back({{outs[0], ins[0]}, {outs[1], ins[1]}});
    out.push_back({{outs[0], ins[1]}, {outs[1], ins[0]}});
}

bool relation_free_acyclic(int, const std::vector<std::pair<int, int>>& arcs,
                           const std::set<std::pair<int, int>>& rels) {
    // successor graph on arrows along relation-free compositions
    int m = (int)arcs.size();
    std::vector<std::vector<int>> succ(m);
    for (int f = 0; f < m; ++f)
        for (int g = 0; g < m; ++g)
            if (arcs[g].first == arcs[f].second && !rels.count({g, f})) succ[f].push_back(g);
    std::vector<int> state(m, 0);
    bool cyclic = false;
    auto dfs = [&](auto&& self, int a) -> void {
        state[a] = 1;
        for (int b : succ[a]) {
            if (state[b] == 1) cyclic = true;
            else if (state[b] == 0) self(self, b);
            if (cyclic) return;
        }
        state[a] = 2;
    };
    for (int a = 0; a < m && !cyclic; ++a)
        if (state[a] == 0) dfs(dfs, a);
    return !cyclic;
}

void expand_relations(int n, const std::vector<std::pair<int, int>>& arcs,
                      const std::function<void(const std::vector<std::pair<int, int>>&)>& sink) {
    std::vector<std::vector<int>> ins(n), outs(n);
    for (int i = 0; i < (int)arcs.size(); ++i) {
        outs[arcs[i].first].push_back(i);
        ins[arcs[i].second].push_back(i);
    }
    std::vector<std::vector<std::vector<std::pair<int, int>>>> perVertex(n);
    for (int v = 0; v < n; ++v) relation_choices_at(ins[v], outs[v], perVertex[v]);
    std::vector<std::pair<int, int>> rels;
    auto rec = [&](auto&& self, int v) -> void {
        if (v == n) {
            std::set<std::pair<int, int>> rset(rels.begin(), rels.end());
            if (relation_free_acyclic(n, arcs, rset)) sink(rels);
            return;
        }
        for (const auto& choice : perVertex[v]) {
            size_t mark = rels.size();
            rels.insert(rels.end(), choice.begin(), choice.end());
            self(self, v + 1);
            rels.resize(mark);
        }
    };
    rec(rec, 0);
}

// Degree-bounded arrow multisets in non-decreasing (source, target) order.
void expand_graphs(int n, int arrowCount,
                   const std::function<void(const std::vector<std::pair<int, int>>&)>& sink) {
    std::vector<std::pair<int, int>> arcs;
    std::vector<int> outd(n, 0), ind(n, 0);
    auto rec = [&](auto&& self, std::pair<int, int> minPair) -> void {
        if ((int)arcs.size() == arrowCount) {
            if (multigraph_connected(n, arcs)) sink(arcs);
            return;
        }
        for (int s = minPair.first; s < n; ++s) {
            if (outd[s] >= 2) continue;
            int e0 = s == minPair.first ? minPair.second : 0;
            for (int e = e0; e < n; ++e) {
                if (ind[e] >= 2) continue;
                arcs.emplace_back(s, e);
                outd[s]++;
                ind[e]++;
                self(self, {s, e});
                outd[s]--;
                ind[e]--;
                arcs.pop_back();
            }
        }
    };
    rec(rec, {0, 0});
}

}  // namespace

std::vector<Presentation> enumerate_gentle(int n, int c, const EnumerationOptions& opts) {
    if (n < 1) throw domain_error("vertex count must be positive");
    if (c == 2 && n > opts.max_n)
        throw domain_error("enumeration size " + std::to_string(n) + " exceeds the configured maximum " +
                           std::to_string(opts.max_n));
    int arrowCount = n + c - 1;
    if (arrowCount < 0) return {};

    std::vector<std::vector<std::pair<int, int>>> graphs;
    expand_graphs(n, arrowCount, [&](const std::vector<std::pair<int, int>>& arcs) {
        graphs.push_back(arcs);
    });

    std::map<std::string, Presentation> byKey;
    std::mutex mu;
    auto work = [&](size_t begin, size_t end) {
        std::map<std::string, Presentation> local;
        for (size_t gi = begin; gi < end; ++gi) {
            expand_relations(n, graphs[gi], [&](const std::vector<std::pair<int, int>>& rels) {
                Presentation p = materialize(n, graphs[gi], rels);
                ValidationReport rep = validate_gentle(p);
                if (!rep.ok) return;
                local.emplace(canonical_form(p), std::move(p));
            });
        }
        std::lock_guard<std::mutex> lock(mu);
        for (auto& [k, v] : local) byKey.emplace(k, std::move(v));
    };
    int nthreads = std::max(1, opts.threads);
    if (nthreads == 1 || graphs.size() < 2) {
        work(0, graphs.size());
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (graphs.size() + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            size_t b = t * chunk, e = std::min(graphs.size(), b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }

    std::vector<Presentation> out;
    out.reserve(byKey.size());
    for (auto& [k, v] : byKey) out.push_back(std::move(v));
    return out;
}

std::vector<Presentation> enumerate_gentle_naive(int n, int c) {
    if (n > 3) throw domain_error("the naive generator is meant for n <= 3");
    int arrowCount = n + c - 1;
    std::map<std::string, Presentation> byKey;
    // all arrow multisets over n^2 ordered pairs, no pruning
    std::vector<std::pair<int, int>> pairs;
    for (int s = 0; s < n; ++s)
        for (int e = 0; e < n; ++e) pairs.emplace_back(s, e);
    std::vector<int> pick;
    auto rels_all = [&](const std::vector<std::pair<int, int>>& arcs) {
        // every subset of composable arrow pairs
        std::vector<std::pair<int, int>> comp;
        for (int g = 0; g < (int)arcs.size(); ++g)
            for (int f = 0; f < (int)arcs.size(); ++f)
                if (arcs[f].second == arcs[g].first) comp.emplace_back(g, f);
        if (comp.size() > 20) return;  // cannot happen at this size
        for (long mask = 0; mask < (1L << comp.size()); ++mask) {
            std::vector<std::pair<int, int>> rels;
            for (size_t i = 0; i < comp.size(); ++i)
                if (mask & (1L << i)) rels.push_back(comp[i]);
            Presentation p = materialize(n, arcs, rels);
            if (!validate_gentle(p).ok) continue;
            byKey.emplace(canonical_form(p), std::move(p));
        }
    };
    auto rec = [&](auto&& self, int from) -> void {
        if ((int)pick.size() == arrowCount) {
            std::vector<std::pair<int, int>> arcs;
            for (int i : pick) arcs.push_back(pairs[i]);
            rels_all(arcs);
            return;
        }
        for (int i = from; i < (int)pairs.size(); ++i) {
            pick.push_back(i);
            self(self, i);
            pick.pop_back();
        }
    };
    rec(rec, 0);
    std::vector<Presentation> out;
    for (auto& [k, v] : byKey) out.push_back(std::move(v));
    return out;
}

OrbitPartition transformation_orbits(const std::vector<Presentation>& set,
                                     const EnumerationOptions& opts) {
    std::map<std::string, int> index;
    for (int i = 0; i < (int)set.size(); ++i) index[canonical_form(set[i])] = i;
    std::vector<int> parent(set.size());
    for (int i = 0; i < (int)parent.size(); ++i) parent[i] = i;
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    std::mutex mu;
    std::atomic<size_t> cursor{0};
    std::vector<std::pair<int, int>> edges;
    auto work = [&]() {
        std::vector<std::pair<int, int>> local;
        for (size_t i = cursor.fetch_add(1); i < set.size(); i = cursor.fetch_add(1)) {
            for (const TransformStep& s : applicable_steps(set[i])) {
                Presentation q = apply_step(set[i], s);
                auto it = index.find(canonical_form(q));
                if (it == index.end())
                    throw domain_error("internal: transformation left the enumerated class at " +
                                       to_string(s));
                local.emplace_back((int)i, it->second);
            }
        }
        std::lock_guard<std::mutex> lock(mu);
        edges.insert(edges.end(), local.begin(), local.end());
    };
    int nthreads = std::max(1, opts.threads);
    if (nthreads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (auto [a, b] : edges) parent[find(a)] = find(b);

    OrbitPartition part;
    part.component.resize(set.size());
    std::map<int, int> orbitId;
    for (int i = 0; i < (int)set.size(); ++i) {
        int root = find(i);
        auto [it, fresh] = orbitId.emplace(root, (int)part.orbits.size());
        if (fresh) part.orbits.emplace_back();
        part.component[i] = it->second;
        part.orbits[it->second].push_back(i);
    }
    return part;
}

EnumerationReport verify_theorems(int n, const EnumerationOptions& opts) {
    EnumerationReport rep;
    rep.n = n;
    rep.c = 2;
    std::vector<Presentation> all = enumerate_gentle(n, 2, opts);
    rep.presentation_count = (long)all.size();
    OrbitPartition part = transformation_orbits(all, opts);
    rep.orbit_count = (long)part.orbits.size();

    std::vector<PhiInvariant> phis(all.size());
    for (size_t i = 0; i < all.size(); ++i) {
        SignAssignment sa = assign_signs(all[i]);
        ThreadSystem ts = compute_threads(all[i], sa);
        phis[i] = compute_phi(ts);
        int card = phi_cardinality(phis[i]);
        if (card != 1 && card != 3)
            rep.theorem1_violations.push_back("presentation " + std::to_string(i) + " has #phi = " +
                                              std::to_string(card));
        int sn = 0, sm = 0;
        for (auto [a, b] : phis[i].pairs) {
            sn += a;
            sm += b;
        }
        int H = (int)ts.permitted.size();
        if (sn != H || sm != (int)all[i].arrows.size() || sn + 2 != sm)
            rep.sum_violations.push_back("presentation " + std::to_string(i) + ": sums (" +
                                         std::to_string(sn) + "," + std::to_string(sm) +
                                         ") vs #H = " + std::to_string(H) + ", #Q1 = " +
                                         std::to_string(all[i].arrows.size()));
    }
    rep.orbit_phis.resize(part.orbits.size());
    for (size_t o = 0; o < part.orbits.size(); ++o) {
        rep.orbit_phis[o] = phis[part.orbits[o].front()];
        for (int i : part.orbits[o])
            if (!phi_equal(phis[i], rep.orbit_phis[o]))
                rep.theorem1_violations.push_back("phi is not constant on orbit " + std::to_string(o));
    }
    // collisions are tracked within the classification's scope (#phi = 3);
    // with #phi = 1 the invariant is not claimed to separate classes
    std::map<std::string, std::vector<int>> byPhi;
    for (size_t o = 0; o < part.orbits.size(); ++o)
        if (phi_cardinality(rep.orbit_phis[o]) == 3)
            byPhi[to_string(rep.orbit_phis[o])].push_back((int)o);
    for (auto& [key, orbitIds] : byPhi)
        if (orbitIds.size() > 1)
            rep.collisions.push_back({rep.orbit_phis[orbitIds.front()], orbitIds});
    return rep;
}

nlohmann::ordered_json report_json(const EnumerationReport& rep) {
    nlohmann::ordered_json j;
    j["n"] = rep.n;
    j["c"] = rep.c;
    j["presentations"] = rep.presentation_count;
    j["orbits"] = rep.orbit_count;
    j["orbit_phis"] = nlohmann::ordered_json::array();
    for (const PhiInvariant& phi : rep.orbit_phis) j["orbit_phis"].push_back(to_string(phi));
    j["collisions"] = nlohmann::ordered_json::array();
    for (const PhiCollision& c : rep.collisions)
        j["collisions"].push_back({{"phi", to_string(c.phi)}, {"orbits", c.orbit_ids}});
    j["theorem1_violations"] = rep.theorem1_violations;
    j["sum_violations"] = rep.sum_violations;
    j["ok"] = rep.ok();
    return j;
}

}  // namespace gentle

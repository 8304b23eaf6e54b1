#include "gentle/canonical.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <sstream>

namespace gentle {

namespace {

struct Compact {
    int n = 0;
    std::vector<std::pair<int, int>> arr;            // (source, target) per arrow
    std::vector<std::pair<int, int>> rel;            // (g, f) as arrow indices
    std::vector<std::string> vnames;
    std::vector<std::string> anames;
};

Compact compact_of(const Presentation& p) {
    Compact c;
    c.n = (int)p.vertices.size();
    c.vnames = p.vertices;
    std::map<std::string, int> vidx, aidx;
    for (int i = 0; i < c.n; ++i) vidx[p.vertices[i]] = i;
    for (int i = 0; i < (int)p.arrows.size(); ++i) {
        const Arrow& a = p.arrows[i];
        aidx[a.name] = i;
        c.arr.emplace_back(vidx.at(a.source), vidx.at(a.target));
        c.anames.push_back(a.name);
    }
    for (const Relation& r : p.relations) c.rel.emplace_back(aidx.at(r.g), aidx.at(r.f));
    return c;
}

// Iterated degree refinement; the result is a label-independent class id
// per vertex, used only to prune the labeling search.
std::vector<std::string> refine_classes(const Compact& c) {
    std::vector<std::string> inv(c.n);
    std::vector<int> outd(c.n, 0), ind(c.n, 0), loops(c.n, 0), junc(c.n, 0);
    for (auto [s, e] : c.arr) {
        outd[s]++;
        ind[e]++;
        if (s == e) loops[s]++;
    }
    for (auto [g, f] : c.rel) junc[c.arr[g].first]++;
    for (int v = 0; v < c.n; ++v)
        inv[v] = "o" + std::to_string(outd[v]) + "i" + std::to_string(ind[v]) + "l" +
                 std::to_string(loops[v]) + "j" + std::to_string(junc[v]);
    for (int round = 0; round < 3; ++round) {
        std::vector<std::string> next(c.n);
        for (int v = 0; v < c.n; ++v) {
            std::vector<std::string> nb;
            for (auto [s, e] : c.arr) {
                if (s == v) nb.push_back(">" + inv[e]);
                if (e == v) nb.push_back("<" + inv[s]);
            }
            std::sort(nb.begin(), nb.end());
            std::string s = inv[v] + "(";
            for (const std::string& x : nb) s += x + ",";
            next[v] = s + ")";
        }
        // compress to stable small ids (sorted distinct strings)
        std::vector<std::string> uniq = next;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (int v = 0; v < c.n; ++v) {
            auto it = std::lower_bound(uniq.begin(), uniq.end(), next[v]);
            inv[v] = std::to_string(it - uniq.begin());
        }
    }
    return inv;
}

struct CanonResult {
    std::string key;
    std::vector<int> vertex_label;  // original vertex index -> canonical label
    std::vector<int> arrow_label;   // original arrow index -> canonical index
};

void append_int(std::string& s, int v) {
    s += std::to_string(v);
    s += ' ';
}

// Serialize under a fixed vertex labeling, minimizing over the orderings
// of parallel-arrow groups (groups have size <= 2 for gentle input).
void serialize_labeling(const Compact& c, const std::vector<int>& label, const std::string& arrowPart,
                        const std::vector<int>& order, CanonResult& best, bool& haveBest) {
    // group boundaries over sorted order
    std::vector<std::pair<int, int>> groups;  // [begin, end)
    int m = (int)order.size();
    int i = 0;
    while (i < m) {
        int j = i;
        auto key = std::make_pair(label[c.arr[order[i]].first], label[c.arr[order[i]].second]);
        while (j < m && std::make_pair(label[c.arr[order[j]].first], label[c.arr[order[j]].second]) == key) ++j;
        if (j - i > 1) groups.emplace_back(i, j);
        i = j;
    }
    std::vector<int> cur = order;
    auto emit = [&]() {
        std::vector<int> pos(m);
        for (int k = 0; k < m; ++k) pos[cur[k]] = k;
        std::vector<std::pair<int, int>> rels;
        rels.reserve(c.rel.size());
        for (auto [g, f] : c.rel) rels.emplace_back(pos[g], pos[f]);
        std::sort(rels.begin(), rels.end());
        std::string key = arrowPart + "R";
        for (auto [g, f] : rels) {
            append_int(key, g);
            append_int(key, f);
        }
        if (!haveBest || key < best.key) {
            haveBest = true;
            best.key = key;
            best.vertex_label = label;
            best.arrow_label = pos;
        }
    };
    auto rec = [&](auto&& self, size_t gi) -> void {
        if (gi == groups.size()) {
            emit();
            return;
        }
        auto [b, e] = groups[gi];
        std::vector<int> g(cur.begin() + b, cur.begin() + e);
        std::sort(g.begin(), g.end());
        do {
            std::copy(g.begin(), g.end(), cur.begin() + b);
            self(self, gi + 1);
        } while (std::next_permutation(g.begin(), g.end()));
    };
    rec(rec, 0);
}

CanonResult canonicalize(const Presentation& p) {
    Compact c = compact_of(p);
    if (c.n == 0) throw domain_error("cannot canonicalize an empty quiver");
    std::vector<std::string> cls = refine_classes(c);

    // vertices grouped into classes, classes in sorted invariant order
    std::vector<int> verts(c.n);
    std::iota(verts.begin(), verts.end(), 0);
    std::stable_sort(verts.begin(), verts.end(), [&](int a, int b) { return cls[a] < cls[b]; });
    std::vector<std::pair<int, int>> blocks;
    int i = 0;
    while (i < c.n) {
        int j = i;
        while (j < c.n && cls[verts[j]] == cls[verts[i]]) ++j;
        blocks.emplace_back(i, j);
        i = j;
    }

    CanonResult best;
    bool haveBest = false;
    std::vector<int> label(c.n);
    std::vector<int> cur = verts;
    auto tryLabeling = [&]() {
        for (int k = 0; k < c.n; ++k) label[cur[k]] = k;
        std::vector<int> order(c.arr.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            auto ka = std::make_pair(label[c.arr[a].first], label[c.arr[a].second]);
            auto kb = std::make_pair(label[c.arr[b].first], label[c.arr[b].second]);
            if (ka != kb) return ka < kb;
            return a < b;
        });
        std::string arrowPart;
        append_int(arrowPart, c.n);
        arrowPart += "A";
        for (int a : order) {
            append_int(arrowPart, label[c.arr[a].first]);
            append_int(arrowPart, label[c.arr[a].second]);
        }
        // prune on the arrow part alone when possible
        if (haveBest && arrowPart.size() <= best.key.size() &&
            best.key.compare(0, arrowPart.size(), arrowPart) < 0)
            return;
        serialize_labeling(c, label, arrowPart, order, best, haveBest);
    };
    auto rec = [&](auto&& self, size_t bi) -> void {
        if (bi == blocks.size()) {
            tryLabeling();
            return;
        }
        auto [b, e] = blocks[bi];
        std::vector<int> g(cur.begin() + b, cur.begin() + e);
        std::sort(g.begin(), g.end());
        do {
            std::copy(g.begin(), g.end(), cur.begin() + b);
            self(self, bi + 1);
        } while (std::next_permutation(g.begin(), g.end()));
    };
    rec(rec, 0);
    return best;
}

}  // namespace

std::string canonical_form(const Presentation& p) { return canonicalize(p).key; }

std::optional<Isomorphism> find_isomorphism(const Presentation& a, const Presentation& b) {
    if (a.vertices.size() != b.vertices.size() || a.arrows.size() != b.arrows.size() ||
        a.relations.size() != b.relations.size())
        return std::nullopt;
    CanonResult ca = canonicalize(a), cb = canonicalize(b);
    if (ca.key != cb.key) return std::nullopt;
    Isomorphism iso;
    std::vector<int> vinv(b.vertices.size()), ainv(b.arrows.size());
    for (int i = 0; i < (int)b.vertices.size(); ++i) vinv[cb.vertex_label[i]] = i;
    for (int i = 0; i < (int)b.arrows.size(); ++i) ainv[cb.arrow_label[i]] = i;
    for (int i = 0; i < (int)a.vertices.size(); ++i)
        iso.vertex_map[a.vertices[i]] = b.vertices[vinv[ca.vertex_label[i]]];
    for (int i = 0; i < (int)a.arrows.size(); ++i)
        iso.arrow_map[a.arrows[i].name] = b.arrows[ainv[ca.arrow_label[i]]].name;
    // sanity: the witness must preserve sources, targets and relations
    for (const Arrow& ar : a.arrows) {
        const Arrow& im = b.arrow(iso.arrow_map.at(ar.name));
        if (im.source != iso.vertex_map.at(ar.source) || im.target != iso.vertex_map.at(ar.target))
            throw domain_error("internal: canonical labeling produced a broken witness");
    }
    for (const Relation& r : a.relations)
        if (!b.has_relation(iso.arrow_map.at(r.g), iso.arrow_map.at(r.f)))
            throw domain_error("internal: canonical labeling does not preserve relations");
    return iso;
}

bool are_isomorphic(const Presentation& a, const Presentation& b) {
    if (a.vertices.size() != b.vertices.size() || a.arrows.size() != b.arrows.size() ||
        a.relations.size() != b.relations.size())
        return false;
    return canonical_form(a) == canonical_form(b);
}

Presentation relabel(const Presentation& p, const std::map<std::string, std::string>& vm,
                     const std::map<std::string, std::string>& am) {
    auto v = [&](const std::string& x) {
        auto it = vm.find(x);
        return it == vm.end() ? x : it->second;
    };
    auto a = [&](const std::string& x) {
        auto it = am.find(x);
        return it == am.end() ? x : it->second;
    };
    Presentation q;
    q.name = p.name;
    for (const std::string& x : p.vertices) q.vertices.push_back(v(x));
    for (const Arrow& ar : p.arrows) q.arrows.push_back({a(ar.name), v(ar.source), v(ar.target)});
    for (const Relation& r : p.relations) q.relations.push_back({a(r.g), a(r.f)});
    return q;
}

}  // namespace gentle

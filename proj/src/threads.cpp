#include "gentle/threads.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace gentle {

namespace {

// parity union-find over sign variables
struct ParityUF {
    std::vector<int> parent, rank_, parity;  // parity relative to parent
    explicit ParityUF(int n) : parent(n), rank_(n, 0), parity(n, 0) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    std::pair<int, int> find(int x) {
        if (parent[x] == x) return {x, 0};
        auto [r, par] = find(parent[x]);
        parent[x] = r;
        parity[x] ^= par;
        return {r, parity[x]};
    }
    // constrain sign(a) = sign(b) * (flip ? -1 : +1)
    void unite(int a, int b, bool flip, const std::string& site) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        int want = pa ^ pb ^ (flip ? 1 : 0);
        if (ra == rb) {
            if (want != 0)
                throw domain_error("internal: inconsistent sign constraints at " + site);
            return;
        }
        if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
        parent[rb] = ra;
        parity[rb] = want;
        if (rank_[ra] == rank_[rb]) rank_[ra]++;
    }
};

struct SignVars {
    const Presentation& p;
    std::map<std::string, int> arrowIdx;
    explicit SignVars(const Presentation& pp) : p(pp) {
        for (int i = 0; i < (int)p.arrows.size(); ++i) arrowIdx[p.arrows[i].name] = i;
    }
    int sigma(const std::string& a) const { return 2 * arrowIdx.at(a); }
    int eps(const std::string& a) const { return 2 * arrowIdx.at(a) + 1; }
    int count() const { return 2 * (int)p.arrows.size(); }
};

ParityUF build_constraints(const Presentation& p, const SignVars& vars) {
    ParityUF uf(vars.count());
    // (1) common source => opposite sigma; (2) common target => opposite eps
    for (const std::string& v : p.vertices) {
        auto out = p.out_arrows(v);
        auto in = p.in_arrows(v);
        for (size_t i = 0; i + 1 < out.size(); ++i)
            uf.unite(vars.sigma(out[i]->name), vars.sigma(out[i + 1]->name), true, "vertex " + v);
        for (size_t i = 0; i + 1 < in.size(); ++i)
            uf.unite(vars.eps(in[i]->name), vars.eps(in[i + 1]->name), true, "vertex " + v);
        // (3) composable pair gamma*beta: sigma(gamma) = -eps(beta) when the
        // composition avoids P and sigma(gamma) = eps(beta) when it lies in
        // P. The second half makes the v^+/v^- token slots come out
        // disjoint (it is the convention of Example 2.2's sign table).
        for (const Arrow* beta : in)
            for (const Arrow* gamma : out)
                uf.unite(vars.sigma(gamma->name), vars.eps(beta->name),
                         !p.has_relation(gamma->name, beta->name), "vertex " + v);
    }
    return uf;
}

}  // namespace

std::vector<std::vector<std::pair<std::string, char>>> sign_components(const Presentation& p) {
    SignVars vars(p);
    ParityUF uf = build_constraints(p, vars);
    std::map<int, std::vector<std::pair<std::string, char>>> comp;
    for (const Arrow& a : p.arrows) {
        comp[uf.find(vars.sigma(a.name)).first].emplace_back(a.name, 's');
        comp[uf.find(vars.eps(a.name)).first].emplace_back(a.name, 'e');
    }
    std::vector<std::vector<std::pair<std::string, char>>> out;
    for (auto& [root, vs] : comp) out.push_back(std::move(vs));
    return out;
}

SignAssignment assign_signs(const Presentation& p) {
    if (p.vertices.size() < 2)
        throw domain_error("sign functions need at least two vertices");
    SignVars vars(p);
    ParityUF uf = build_constraints(p, vars);

    std::map<int, int> rootSign;  // component root -> sign of its root variable
    auto resolve = [&](int var, int seed) {
        auto [root, par] = uf.find(var);
        auto it = rootSign.find(root);
        if (it == rootSign.end()) {
            // seed so that this variable gets `seed`
            rootSign[root] = par ? -seed : seed;
            return seed;
        }
        return par ? -it->second : it->second;
    };

    SignAssignment sa;
    std::vector<std::string> names;
    for (const Arrow& a : p.arrows) names.push_back(a.name);
    std::sort(names.begin(), names.end());
    for (const std::string& a : names) sa.sigma[a] = resolve(vars.sigma(a), +1);
    for (const std::string& a : names) sa.eps[a] = resolve(vars.eps(a), +1);

    // trivial-thread signs: prefer the outgoing-arrow rule
    for (const std::string& v : p.vertices) {
        auto out = p.out_arrows(v);
        auto in = p.in_arrows(v);
        if (out.size() > 1 || in.size() > 1) continue;
        bool hasPair = !out.empty() && !in.empty();
        bool rel = hasPair && p.has_relation(out[0]->name, in[0]->name);
        int base;
        if (!out.empty()) base = -sa.sigma.at(out[0]->name);
        else if (!in.empty()) base = sa.eps.at(in[0]->name);
        else continue;  // isolated vertex: rejected by connectivity elsewhere
        if (!hasPair || !rel) sa.h_sigma[v] = base;
        if (!hasPair || rel) sa.p_sigma[v] = !out.empty() ? -sa.sigma.at(out[0]->name) : -sa.eps.at(in[0]->name);
    }
    return sa;
}

namespace {

Thread make_thread(const Presentation& p, const SignAssignment& sa, std::vector<std::string> arrows,
                   bool permitted) {
    Thread t;
    t.permitted = permitted;
    t.arrows = std::move(arrows);
    const Arrow& first = p.arrow(t.arrows.front());
    const Arrow& last = p.arrow(t.arrows.back());
    t.start = first.source;
    t.end = last.target;
    t.sigma = sa.sigma.at(first.name);
    t.eps = sa.eps.at(last.name);
    return t;
}

Thread make_trivial(const std::string& v, bool permitted, const SignAssignment& sa) {
    Thread t;
    t.permitted = permitted;
    t.anchor = v;
    t.start = t.end = v;
    if (permitted) {
        t.sigma = sa.h_sigma.at(v);
        t.eps = -t.sigma;
    } else {
        t.sigma = sa.p_sigma.at(v);
        t.eps = t.sigma;
    }
    return t;
}

// Chains and cycles of a partial successor function on arrows.
void chains_and_cycles(const Presentation& p,
                       const std::function<std::optional<std::string>(const std::string&)>& succ,
                       const std::function<std::optional<std::string>(const std::string&)>& pred,
                       std::vector<std::vector<std::string>>& chains,
                       std::vector<std::vector<std::string>>& cycles) {
    std::set<std::string> used;
    for (const Arrow& a : p.arrows) {
        if (used.count(a.name)) continue;
        if (pred(a.name)) continue;  // not a chain head
        std::vector<std::string> chain{a.name};
        used.insert(a.name);
        for (auto nxt = succ(a.name); nxt; nxt = succ(*nxt)) {
            if (used.count(*nxt)) break;  // guards against malformed input
            chain.push_back(*nxt);
            used.insert(*nxt);
        }
        chains.push_back(std::move(chain));
    }
    // leftovers are cycles
    for (const Arrow& a : p.arrows) {
        if (used.count(a.name)) continue;
        std::vector<std::string> cyc{a.name};
        used.insert(a.name);
        for (auto nxt = succ(a.name); nxt && *nxt != a.name; nxt = succ(*nxt)) {
            cyc.push_back(*nxt);
            used.insert(*nxt);
        }
        auto best = std::min_element(cyc.begin(), cyc.end());
        std::rotate(cyc.begin(), best, cyc.end());
        cycles.push_back(std::move(cyc));
    }
}

}  // namespace

ThreadSystem compute_threads(const Presentation& p, const SignAssignment& sa) {
    ThreadSystem ts;
    std::vector<std::vector<std::string>> chains, cycles;
    // permitted: relation-free continuations
    chains_and_cycles(
        p, [&](const std::string& a) { return p.free_successor(a); },
        [&](const std::string& a) { return p.free_predecessor(a); }, chains, cycles);
    if (!cycles.empty())
        throw domain_error("internal: relation-free cycle (condition (3) violated) through arrow " +
                           cycles.front().front());
    for (auto& c : chains) ts.permitted.push_back(make_thread(p, sa, std::move(c), true));
    for (const auto& [v, s] : sa.h_sigma) ts.permitted.push_back(make_trivial(v, true, sa));

    // forbidden: relations as continuations
    chains.clear();
    cycles.clear();
    chains_and_cycles(
        p, [&](const std::string& a) { return p.rel_successor(a); },
        [&](const std::string& a) { return p.rel_predecessor(a); }, chains, cycles);
    for (auto& c : chains) ts.forbidden.push_back(make_thread(p, sa, std::move(c), false));
    for (const auto& [v, s] : sa.p_sigma) ts.forbidden.push_back(make_trivial(v, false, sa));
    ts.cycles = std::move(cycles);

    auto byStart = [](const Thread& a, const Thread& b) {
        if (a.length() != b.length()) return a.length() > b.length();
        if (a.start != b.start) return a.start < b.start;
        return a.sigma > b.sigma;
    };
    std::sort(ts.permitted.begin(), ts.permitted.end(), byStart);
    std::sort(ts.forbidden.begin(), ts.forbidden.end(), byStart);
    std::sort(ts.cycles.begin(), ts.cycles.end());
    return ts;
}

std::string to_string(const Token& t) { return t.vertex + (t.sign > 0 ? "+" : "-"); }

Token parse_token(const std::string& s) {
    if (s.size() < 2 || (s.back() != '+' && s.back() != '-'))
        throw domain_error("bad token '" + s + "': expected <vertex>+ or <vertex>-");
    return {s.substr(0, s.size() - 1), s.back() == '+' ? +1 : -1};
}

namespace {

std::vector<Token> column_of(const Presentation& p, const SignAssignment& sa, const Thread& t) {
    std::vector<Token> col;
    if (t.trivial()) {
        col.push_back({t.anchor, t.sigma});
        return col;
    }
    for (const std::string& a : t.arrows) col.push_back({p.arrow(a).source, sa.sigma.at(a)});
    const Arrow& last = p.arrow(t.arrows.back());
    col.push_back({last.target, -sa.eps.at(last.name)});
    return col;
}

bool token_less(const Token& a, const Token& b) {
    if (a.vertex != b.vertex) return a.vertex < b.vertex;
    return a.sign > b.sign;  // plus before minus
}

bool column_less(const std::vector<Token>& a, const std::vector<Token>& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), token_less);
}

}  // namespace

ThreadArray thread_array(const Presentation& p, const SignAssignment& sa) {
    ThreadSystem ts = compute_threads(p, sa);
    ThreadArray arr;
    for (const Thread& t : ts.permitted) arr.columns.push_back(column_of(p, sa, t));
    std::sort(arr.columns.begin(), arr.columns.end(), column_less);
    return arr;
}

ThreadArray thread_array(const Presentation& p) { return thread_array(p, assign_signs(p)); }

std::string render_thread_array(const ThreadArray& a) {
    size_t rows = 0, width = 0;
    for (const auto& c : a.columns) rows = std::max(rows, c.size());
    std::vector<std::vector<std::string>> cells(a.columns.size());
    for (size_t i = 0; i < a.columns.size(); ++i) {
        for (const Token& t : a.columns[i]) cells[i].push_back(to_string(t));
        for (const std::string& s : cells[i]) width = std::max(width, s.size());
    }
    std::ostringstream out;
    for (size_t r = 0; r < rows; ++r) {
        out << (r == 0 ? "[ " : "  ");
        for (size_t i = 0; i < a.columns.size(); ++i) {
            std::string s = r < cells[i].size() ? cells[i][r] : "";
            out << s << std::string(width - s.size() + 1, ' ');
        }
        if (r == 0 && rows == 1) out << "]";
        out << (r + 1 == rows && rows > 1 ? "]" : "");
        out << "\n";
    }
    return out.str();
}

PartitionEncoding partition_encoding(const Presentation& p) {
    ThreadArray arr = thread_array(p);
    PartitionEncoding enc;
    std::map<std::string, std::pair<int, int>> slots;  // vertex -> (f(v+), f(v-)) flat indices
    int f = 0;
    for (const auto& col : arr.columns) {
        enc.lambda.push_back((int)col.size());
        for (const Token& t : col) {
            ++f;
            auto& s = slots[t.vertex];
            (t.sign > 0 ? s.first : s.second) = f;
        }
    }
    for (auto& [v, s] : slots)
        enc.gamma.emplace_back(std::min(s.first, s.second), std::max(s.first, s.second));
    std::sort(enc.gamma.begin(), enc.gamma.end());
    return enc;
}

Presentation decode_thread_array(const ThreadArray& a) {
    // token coverage: every v+ / v- exactly once
    std::map<std::string, std::array<int, 2>> seen;
    for (const auto& col : a.columns) {
        if (col.empty()) throw domain_error("inconsistent array: empty column");
        for (const Token& t : col) seen[t.vertex][t.sign > 0 ? 0 : 1]++;
    }
    for (const auto& [v, cnt] : seen) {
        if (cnt[0] != 1 || cnt[1] != 1)
            throw domain_error("inconsistent array: token " + v + (cnt[0] != 1 ? "+" : "-") +
                               " appears " + std::to_string(std::max(cnt[0], cnt[1])) + " times");
    }

    Presentation p;
    for (const auto& [v, cnt] : seen) p.vertices.push_back(v);
    SignAssignment sa;
    int n = 0;
    for (const auto& col : a.columns)
        for (size_t i = 0; i + 1 < col.size(); ++i) {
            std::string name = "a" + std::to_string(++n);
            p.arrows.push_back({name, col[i].vertex, col[i + 1].vertex});
            sa.sigma[name] = col[i].sign;
            sa.eps[name] = -col[i + 1].sign;
        }
    // relations: composable pairs that are not consecutive inside a column,
    // i.e. exactly those with sigma(g) = eps(f)
    for (const Arrow& g : p.arrows)
        for (const Arrow& f : p.arrows)
            if (f.target == g.source && sa.sigma.at(g.name) == sa.eps.at(f.name))
                p.relations.push_back({g.name, f.name});

    if (!p.connected()) throw domain_error("inconsistent array: decoded quiver is disconnected");
    ValidationReport rep = validate_gentle(p);
    if (!rep.ok)
        throw domain_error("inconsistent array: decoded presentation violates condition " +
                           rep.violations.front().condition + " at " + rep.violations.front().site);
    // re-encode under the decoded signs and compare as column sets
    for (const std::string& v : p.vertices) {
        auto out = p.out_arrows(v);
        auto in = p.in_arrows(v);
        if (out.size() > 1 || in.size() > 1) continue;
        bool hasPair = !out.empty() && !in.empty();
        bool rel = hasPair && p.has_relation(out[0]->name, in[0]->name);
        if (!hasPair || !rel) sa.h_sigma[v] = !out.empty() ? -sa.sigma.at(out[0]->name) : sa.eps.at(in[0]->name);
        if (!hasPair || rel) sa.p_sigma[v] = !out.empty() ? -sa.sigma.at(out[0]->name) : -sa.eps.at(in[0]->name);
    }
    ThreadArray check = thread_array(p, sa);
    auto norm = [](ThreadArray arr) {
        std::sort(arr.columns.begin(), arr.columns.end(), column_less);
        return arr.columns;
    };
    if (norm(check) != norm(a))
        throw domain_error("inconsistent array: columns do not form the permitted threads of any presentation");
    return p;
}

nlohmann::ordered_json threads_json(const ThreadSystem& ts) {
    nlohmann::ordered_json j;
    auto emit = [](const Thread& t) {
        nlohmann::ordered_json e;
        e["arrows"] = t.arrows;
        if (t.trivial()) e["anchor"] = t.anchor;
        e["start"] = t.start;
        e["end"] = t.end;
        e["sigma"] = t.sigma;
        e["eps"] = t.eps;
        return e;
    };
    j["permitted"] = nlohmann::ordered_json::array();
    for (const Thread& t : ts.permitted) j["permitted"].push_back(emit(t));
    j["forbidden"] = nlohmann::ordered_json::array();
    for (const Thread& t : ts.forbidden) j["forbidden"].push_back(emit(t));
    j["cycles"] = nlohmann::ordered_json::array();
    for (const auto& c : ts.cycles) j["cycles"].push_back({{"arrows", c}});
    return j;
}

}  // namespace gentle

#include "gentle/normal_forms.hpp"

#include <algorithm>
#include <sstream>

#include "gentle/canonical.hpp"
#include "gentle/threads.hpp"

namespace gentle {

InvariantTriple InvariantTriple::of(std::pair<int, int> a, std::pair<int, int> b,
                                    std::pair<int, int> c) {
    InvariantTriple t{{a, b, c}};
    std::sort(t.pairs.begin(), t.pairs.end());
    return t;
}

std::string to_string(const InvariantTriple& t) {
    std::ostringstream out;
    for (int i = 0; i < 3; ++i)
        out << (i ? "," : "") << "(" << t.pairs[i].first << "," << t.pairs[i].second << ")";
    return out.str();
}

InvariantTriple parse_triple(const std::string& s) {
    PhiInvariant phi = parse_phi(s);
    return triple_from_phi(phi);
}

InvariantTriple triple_from_phi(const PhiInvariant& phi) {
    if (phi.pairs.size() != 3)
        throw domain_error("invariant " + to_string(phi) + " is not a triple (#phi = " +
                           std::to_string(phi.pairs.size()) + ")");
    return InvariantTriple::of(phi.pairs[0], phi.pairs[1], phi.pairs[2]);
}

PhiInvariant phi_of_triple(const InvariantTriple& t) {
    PhiInvariant phi;
    for (auto pr : t.pairs) phi.pairs.push_back(pr);
    std::sort(phi.pairs.begin(), phi.pairs.end());
    return phi;
}

bool admissible(const InvariantTriple& t) {
    int n = 0, m = 0;
    for (auto [a, b] : t.pairs) {
        if (a < 0 || b < 0) return false;
        if (a == 0 && b == 0) return false;
        n += a;
        m += b;
    }
    return n + 2 == m;
}

FamilyMatch family_of(const InvariantTriple& t) {
    if (!admissible(t))
        throw domain_error("triple " + to_string(t) + " is not admissible");
    std::vector<std::pair<int, int>> eq, lt, gt;  // n=m, n<m, n>m
    for (auto pr : t.pairs) {
        if (pr.first == pr.second) eq.push_back(pr);
        else if (pr.first < pr.second) lt.push_back(pr);
        else gt.push_back(pr);
    }
    FamilyMatch fm;
    auto& P = fm.params;
    if (eq.size() == 2) {  // (k,k),(q,q),(r,r+2)
        P["k"] = std::min(eq[0].first, eq[1].first);
        P["q"] = std::max(eq[0].first, eq[1].first);
        P["r"] = lt[0].first;
        fm.family = (P["k"] == 1 && P["q"] == 1 && P["r"] == 0) ? 4 : 9;
    } else if (eq.size() == 1 && lt.size() == 2) {  // (k,k),(q,q+1),(r,r+1)
        P["k"] = eq[0].first;
        P["q"] = std::min(lt[0].first, lt[1].first);
        P["r"] = std::max(lt[0].first, lt[1].first);
        fm.family = (P["k"] == 1 && P["q"] == 0 && P["r"] == 0) ? 5 : 10;
    } else if (eq.size() == 1) {  // (k,k),(b+q,q),(r,b+2+r)
        P["k"] = eq[0].first;
        P["b"] = gt[0].first - gt[0].second;
        P["q"] = gt[0].second;
        P["r"] = lt[0].first;
        fm.family = (P["k"] == 1 && P["q"] == 0 && P["r"] == 0) ? 3 : 8;
    } else if (gt.size() == 1) {  // (k,a+k),(q,b+q),(a+b-2+r,r)
        // order the deficits: a >= b, and k >= q when a = b
        auto d = [](std::pair<int, int> pr) { return pr.second - pr.first; };
        auto first = lt[0], second = lt[1];
        if (d(first) < d(second) || (d(first) == d(second) && first.first < second.first))
            std::swap(first, second);
        P["a"] = d(first);
        P["b"] = d(second);
        P["k"] = first.first;
        P["q"] = second.first;
        P["r"] = gt[0].second;
        if (P["k"] == 0 && P["q"] == 0 && P["r"] == 0) {
            fm.family = 1;
            // report (a,b) in the sorted-pair order of the triple
            P["a"] = lt[0].second;
            P["b"] = lt[1].second;
            P.erase("k");
            P.erase("q");
            P.erase("r");
        } else {
            fm.family = 6;
        }
    } else {  // (a+k,k),(b+q,q),(r,a+b+2+r)
        auto s = [](std::pair<int, int> pr) { return pr.first - pr.second; };
        auto first = gt[0], second = gt[1];
        if (s(first) < s(second) || (s(first) == s(second) && first.second < second.second))
            std::swap(first, second);
        P["a"] = s(first);
        P["b"] = s(second);
        P["k"] = first.second;
        P["q"] = second.second;
        P["r"] = lt[0].first;
        if (P["k"] == 0 && P["q"] == 0 && P["r"] == 0) {
            fm.family = 2;
            P["a"] = gt[0].first;
            P["b"] = gt[1].first;
            P.erase("k");
            P.erase("q");
            P.erase("r");
        } else {
            fm.family = 7;
        }
    }
    return fm;
}

namespace {

struct Builder {
    Presentation p;
    int arrowNo = 0;
    std::string vtx(const std::string& v) {
        if (!p.has_vertex(v)) p.vertices.push_back(v);
        return v;
    }
    std::string arc(const std::string& s, const std::string& e) {
        std::string name = "a" + std::to_string(++arrowNo);
        p.arrows.push_back({name, vtx(s), vtx(e)});
        return name;
    }
    void rel(const std::string& g, const std::string& f) { p.relations.push_back({g, f}); }
};

// A directed cycle of `len` arrows through `base` (a loop when len = 1);
// returns the arrow names in order, starting with the one leaving base.
std::vector<std::string> add_cycle(Builder& b, const std::string& base, const std::string& stem,
                                   int len) {
    std::vector<std::string> arcs;
    std::string prev = base;
    for (int i = 1; i < len; ++i) {
        std::string v = stem + std::to_string(i);
        arcs.push_back(b.arc(prev, v));
        prev = v;
    }
    arcs.push_back(b.arc(prev, base));
    return arcs;
}

// A chain of `len` arrows ending at `target`, starting a fresh component
// of vertices stem1..stemlen; returns arrow names in order.
std::vector<std::string> add_chain_into(Builder& b, const std::string& target,
                                        const std::string& stem, int len) {
    std::vector<std::string> arcs;
    if (len == 0) return arcs;
    std::string prev = stem + "1";
    b.vtx(prev);
    for (int i = 2; i <= len; ++i) {
        std::string v = stem + std::to_string(i);
        arcs.push_back(b.arc(prev, v));
        prev = v;
    }
    arcs.push_back(b.arc(prev, target));
    return arcs;
}

int param(const FamilyMatch& fm, const std::string& key, int dflt = 0) {
    auto it = fm.params.find(key);
    return it == fm.params.end() ? dflt : it->second;
}

// family 6 shape (family 1 when k=q=r=0): two relation-laden cycles glued
// along v_b, free tails of lengths q and k, and a free hanging chain of
// length r into u_{a-1}.
Presentation build_6(int a, int b, int k, int q, int r) {
    Builder bl;
    bl.vtx("v1");
    // v-cycle: v1 -> v2 -> ... -> v_{b+q} -> v1, relations through v1..vb
    std::vector<std::string> vc;  // vc[t] leaves the (t+1)-th vertex
    {
        std::string prev = "v1";
        for (int i = 2; i <= b + q; ++i) {
            vc.push_back(bl.arc(prev, "v" + std::to_string(i)));
            prev = "v" + std::to_string(i);
        }
        vc.push_back(bl.arc(prev, "v1"));
    }
    int N = b + q;
    for (int t = 1; t <= b; ++t) bl.rel(vc[t - 1], vc[(t - 2 + N) % N]);

    // u-cycle through v_b: tail of k, then u_1..u_{a-1}
    std::string vb = "v" + std::to_string(b);
    std::vector<std::string> ring;  // vertices after vb
    for (int i = 1; i <= k; ++i) ring.push_back("u" + std::to_string(a + i));
    for (int i = 1; i <= a - 1; ++i) ring.push_back("u" + std::to_string(i));
    std::vector<std::string> uc;
    {
        std::string prev = vb;
        for (const std::string& v : ring) {
            uc.push_back(bl.arc(prev, v));
            prev = v;
        }
        uc.push_back(bl.arc(prev, vb));
    }
    int M = (int)uc.size();  // = a + k
    // relations through u_1..u_{a-1} and through v_b on the u-side
    for (int t = k; t < M; ++t) bl.rel(uc[(t + 1) % M], uc[t]);

    // free chain w_1 -> ... -> w_r -> u_{a-1}
    add_chain_into(bl, "u" + std::to_string(a - 1), "w", r);
    return bl.p;
}

// family 7 shape (family 2 when k=q=r=0): figure eight at u_0 with cross
// relations, a free segment of length r inside the u-cycle, and free
// chains of lengths k (into u_{r+a}) and q (into v_1).
Presentation build_7(int a, int b, int k, int q, int r) {
    Builder bl;
    bl.vtx("u0");
    std::vector<std::string> vc;  // u0 -> v1 -> ... -> vb -> u0
    {
        std::string prev = "u0";
        for (int i = 1; i <= b; ++i) {
            vc.push_back(bl.arc(prev, "v" + std::to_string(i)));
            prev = "v" + std::to_string(i);
        }
        vc.push_back(bl.arc(prev, "u0"));
    }
    std::vector<std::string> uc;  // u0 -> u1 ... ur -> u_{r+1} ... u_{r+a} -> u0
    {
        std::string prev = "u0";
        for (int i = 1; i <= r + a; ++i) {
            uc.push_back(bl.arc(prev, "u" + std::to_string(i)));
            prev = "u" + std::to_string(i);
        }
        uc.push_back(bl.arc(prev, "u0"));
    }
    for (int t = 1; t <= b; ++t) bl.rel(vc[t], vc[t - 1]);  // through v_t
    bl.rel(vc[0], uc.back());                               // (u0 -> v1) after (u_{r+a} -> u0)
    bl.rel(uc[0], vc.back());                               // (u0 -> u1) after (v_b -> u0)
    for (int t = r + 1; t <= r + a; ++t) bl.rel(uc[t], uc[t - 1]);  // through u_{r+1}..u_{r+a}

    add_chain_into(bl, "u" + std::to_string(r + a), "z", k);
    add_chain_into(bl, "v1", "w", q);
    return bl.p;
}

// family 8 shape (family 3 when k=1, q=r=0): two free parallel chains
// from v1 to v_{r+2}, a relation-laden return chain through w_1..w_b,
// and a free hanging chain of length q into w_b.
Presentation build_8(int k, int b, int q, int r) {
    Builder bl;
    bl.vtx("v1");
    std::string Q = "v" + std::to_string(r + 2);
    std::vector<std::string> vchain;  // v1 -> v2 -> ... -> v_{r+2}
    {
        std::string prev = "v1";
        for (int i = 2; i <= r + 1; ++i) {
            vchain.push_back(bl.arc(prev, "v" + std::to_string(i)));
            prev = "v" + std::to_string(i);
        }
        vchain.push_back(bl.arc(prev, Q));
    }
    {  // u-chain of k arrows: v1 -> u2 -> ... -> uk -> Q
        std::string prev = "v1";
        for (int i = 2; i <= k; ++i) {
            bl.arc(prev, "u" + std::to_string(i));
            prev = "u" + std::to_string(i);
        }
        bl.arc(prev, Q);
    }
    std::vector<std::string> ret;  // Q -> w1 -> ... -> wb -> v1
    {
        std::string prev = Q;
        for (int i = 1; i <= b; ++i) {
            ret.push_back(bl.arc(prev, "w" + std::to_string(i)));
            prev = "w" + std::to_string(i);
        }
        ret.push_back(bl.arc(prev, "v1"));
    }
    bl.rel(ret[0], vchain.back());          // through v_{r+2}
    for (int t = 1; t <= b; ++t) bl.rel(ret[t], ret[t - 1]);  // through w_t
    bl.rel(vchain[0], ret.back());          // through v_1
    add_chain_into(bl, "w" + std::to_string(b), "z", q);
    return bl.p;
}

// family 9 shape (family 4 when k=q=1, r=0): a cycle w_k -> v_0 -> ... ->
// v_r -> w_k with relations through w_k and v_r, fed by two free chains
// out of u_0.
Presentation build_9(int k, int q, int r) {
    Builder bl;
    bl.vtx("u0");
    std::string wk = "w" + std::to_string(k);
    std::string vr = "v" + std::to_string(r);
    {  // u0 -> w1 -> ... -> wk
        std::string prev = "u0";
        for (int i = 1; i <= k; ++i) {
            bl.arc(prev, "w" + std::to_string(i));
            prev = "w" + std::to_string(i);
        }
    }
    {  // u0 -> u1 -> ... -> u_{q-1} -> v_r
        std::string prev = "u0";
        for (int i = 1; i <= q - 1; ++i) {
            bl.arc(prev, "u" + std::to_string(i));
            prev = "u" + std::to_string(i);
        }
        bl.arc(prev, vr);
    }
    std::vector<std::string> cyc;  // wk -> v0 -> ... -> vr -> wk
    {
        std::string prev = wk;
        for (int i = 0; i <= r; ++i) {
            cyc.push_back(bl.arc(prev, "v" + std::to_string(i)));
            prev = "v" + std::to_string(i);
        }
        cyc.push_back(bl.arc(prev, wk));
    }
    bl.rel(cyc[0], cyc.back());                  // through w_k
    bl.rel(cyc.back(), cyc[cyc.size() - 2]);     // through v_r
    return bl.p;
}

// family 10 shape (family 5 when k=1, q=r=0): a free chain u_0 -> ... ->
// u_k joining two cycles, each with one relation where the chain meets it
// (a loop with its self-relation when the cycle has length one).
Presentation build_10(int k, int q, int r) {
    Builder bl;
    bl.vtx("u0");
    std::string prev = "u0";
    for (int i = 1; i <= k; ++i) {
        bl.arc(prev, "u" + std::to_string(i));
        prev = "u" + std::to_string(i);
    }
    std::string uk = "u" + std::to_string(k);
    std::vector<std::string> x = add_cycle(bl, uk, "v", q + 1);
    std::vector<std::string> y = add_cycle(bl, "u0", "w", r + 1);
    bl.rel(x.front(), x.back());
    bl.rel(y.front(), y.back());
    return bl.p;
}

}  // namespace

Presentation build_normal_form(const InvariantTriple& t) {
    FamilyMatch fm = family_of(t);
    Presentation p;
    switch (fm.family) {
        case 1: {
            int a = param(fm, "a"), b = param(fm, "b");
            if (a < b) std::swap(a, b);
            p = build_6(a, b, 0, 0, 0);
            break;
        }
        case 6:
            p = build_6(param(fm, "a"), param(fm, "b"), param(fm, "k"), param(fm, "q"), param(fm, "r"));
            break;
        case 2: {
            int a = param(fm, "a"), b = param(fm, "b");
            if (a < b) std::swap(a, b);
            p = build_7(a, b, 0, 0, 0);
            break;
        }
        case 7:
            p = build_7(param(fm, "a"), param(fm, "b"), param(fm, "k"), param(fm, "q"), param(fm, "r"));
            break;
        case 3:
            p = build_8(1, param(fm, "b"), 0, 0);
            break;
        case 8:
            p = build_8(param(fm, "k"), param(fm, "b"), param(fm, "q"), param(fm, "r"));
            break;
        case 4:
            p = build_9(1, 1, 0);
            break;
        case 9:
            p = build_9(param(fm, "k"), param(fm, "q"), param(fm, "r"));
            break;
        case 5:
            p = build_10(1, 0, 0);
            break;
        case 10:
            p = build_10(param(fm, "k"), param(fm, "q"), param(fm, "r"));
            break;
        default:
            throw domain_error("unreachable family id");
    }
    p.name = "nf" + std::to_string(fm.family);
    ValidationReport rep = validate_gentle(p);
    if (!rep.ok)
        throw domain_error("internal: normal form for " + to_string(t) + " is invalid (" +
                           rep.violations.front().condition + ": " + rep.violations.front().site + ")");
    return p;
}

std::optional<FamilyMatch> is_normal_form(const Presentation& p) {
    ValidationReport rep = validate_gentle(p);
    if (!rep.ok || cycle_number(p) != 2) return std::nullopt;
    try {
        PhiInvariant phi = compute_phi(p);
        if (phi.pairs.size() != 3) return std::nullopt;
        InvariantTriple t = triple_from_phi(phi);
        if (!admissible(t)) return std::nullopt;
        Presentation rep_form = build_normal_form(t);
        if (!are_isomorphic(p, rep_form)) return std::nullopt;
        return family_of(t);
    } catch (const domain_error&) {
        return std::nullopt;
    }
}

std::vector<InvariantTriple> admissible_triples(int maxEntry) {
    std::vector<std::pair<int, int>> all;
    for (int n = 0; n <= maxEntry; ++n)
        for (int m = 0; m <= maxEntry; ++m) all.emplace_back(n, m);
    std::vector<InvariantTriple> out;
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = i; j < all.size(); ++j)
            for (size_t k = j; k < all.size(); ++k) {
                InvariantTriple t = InvariantTriple::of(all[i], all[j], all[k]);
                if (admissible(t)) out.push_back(t);
            }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace gentle

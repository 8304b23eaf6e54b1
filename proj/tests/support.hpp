#pragma once

// Shared helpers for the test suites: fixture loading, an independent
// brute-force thread/invariant oracle, and small random utilities.

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gentle/canonical.hpp"
#include "gentle/invariant.hpp"
#include "gentle/presentation.hpp"
#include "gentle/threads.hpp"

namespace testsupport {

inline std::string fixture_path(const std::string& name) {
    return std::string(GENTLE_FIXTURES_DIR) + "/" + name;
}

inline gentle::Presentation load_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name));
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::stringstream buf;
    buf << in.rdbuf();
    return gentle::parse_quiver(buf.str());
}

// ---------------------------------------------------------------------
// Oracle: recomputes threads by exhaustive path search and maximality
// filtering (no successor-chain walking), and the invariant by scanning
// for each pairing partner. Used to freeze derived expected values.
// ---------------------------------------------------------------------

struct OracleThreads {
    std::vector<gentle::Thread> permitted, forbidden;
    std::vector<std::vector<std::string>> cycles;
};

inline OracleThreads oracle_threads(const gentle::Presentation& p, const gentle::SignAssignment& sa) {
    using namespace gentle;
    OracleThreads out;

    auto finish = [&](const std::vector<std::string>& arrows, bool permitted) {
        Thread t;
        t.permitted = permitted;
        t.arrows = arrows;
        t.start = p.arrow(arrows.front()).source;
        t.end = p.arrow(arrows.back()).target;
        t.sigma = sa.sigma.at(arrows.front());
        t.eps = sa.eps.at(arrows.back());
        return t;
    };

    // all maximal relation-free paths, by extending every arrow both ways
    int bound = (int)p.arrows.size();
    std::set<std::vector<std::string>> seenPerm;
    for (const Arrow& a : p.arrows) {
        std::vector<std::string> path{a.name};
        // grow to the right as far as possible, then to the left
        bool grew = true;
        while (grew && (int)path.size() <= bound) {
            grew = false;
            for (const Arrow& g : p.arrows)
                if (g.source == p.arrow(path.back()).target && !p.has_relation(g.name, path.back())) {
                    path.push_back(g.name);
                    grew = true;
                    break;
                }
        }
        grew = true;
        while (grew && (int)path.size() <= bound) {
            grew = false;
            for (const Arrow& f : p.arrows)
                if (f.target == p.arrow(path.front()).source && !p.has_relation(path.front(), f.name)) {
                    path.insert(path.begin(), f.name);
                    grew = true;
                    break;
                }
        }
        if ((int)path.size() > bound) throw std::runtime_error("oracle: unbounded permitted path");
        if (seenPerm.insert(path).second) out.permitted.push_back(finish(path, true));
    }

    // maximal pairwise-distinct relation chains; wrap-around chains are
    // the full-relation cycles (deduplicated by rotation)
    std::set<std::vector<std::string>> seenForb, seenCycle;
    for (const Arrow& a : p.arrows) {
        std::vector<std::string> path{a.name};
        std::set<std::string> used{a.name};
        bool grew = true;
        while (grew) {
            grew = false;
            for (const Arrow& g : p.arrows)
                if (!used.count(g.name) && g.source == p.arrow(path.back()).target &&
                    p.has_relation(g.name, path.back())) {
                    path.push_back(g.name);
                    used.insert(g.name);
                    grew = true;
                    break;
                }
        }
        grew = true;
        while (grew) {
            grew = false;
            for (const Arrow& f : p.arrows)
                if (!used.count(f.name) && f.target == p.arrow(path.front()).source &&
                    p.has_relation(path.front(), f.name)) {
                    path.insert(path.begin(), f.name);
                    used.insert(f.name);
                    grew = true;
                    break;
                }
        }
        if (p.has_relation(path.front(), path.back())) {  // wraps: a relation cycle
            std::vector<std::string> cyc = path;
            std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()), cyc.end());
            if (seenCycle.insert(cyc).second) out.cycles.push_back(cyc);
        } else if (seenForb.insert(path).second) {
            out.forbidden.push_back(finish(path, false));
        }
    }

    // trivial threads straight from the definition
    for (const std::string& v : p.vertices) {
        auto in = p.in_arrows(v);
        auto outArr = p.out_arrows(v);
        if (in.size() > 1 || outArr.size() > 1) continue;
        bool both = !in.empty() && !outArr.empty();
        bool rel = both && p.has_relation(outArr[0]->name, in[0]->name);
        gentle::Thread t;
        t.anchor = t.start = t.end = v;
        if (!both || !rel) {
            t.permitted = true;
            t.sigma = sa.h_sigma.at(v);
            t.eps = -t.sigma;
            out.permitted.push_back(t);
        }
        if (!both || rel) {
            gentle::Thread f = t;
            f.permitted = false;
            f.sigma = f.eps = sa.p_sigma.at(v);
            out.forbidden.push_back(f);
        }
    }
    return out;
}

inline gentle::PhiInvariant oracle_phi(const gentle::Presentation& p, unsigned seed = 1) {
    using namespace gentle;
    SignAssignment sa = assign_signs(p);
    OracleThreads ot = oracle_threads(p, sa);
    std::vector<int> order(ot.permitted.size());
    for (int i = 0; i < (int)order.size(); ++i) order[i] = i;
    std::mt19937 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    PhiInvariant phi;
    std::vector<bool> used(ot.permitted.size(), false);
    for (int s : order) {
        if (used[s]) continue;
        int n = 0, m = 0, cur = s;
        do {
            used[cur] = true;
            ++n;
            const Thread& h = ot.permitted[cur];
            int pick = -1;
            for (int i = 0; i < (int)ot.forbidden.size(); ++i)
                if (ot.forbidden[i].end == h.end && ot.forbidden[i].eps == -h.eps) {
                    if (pick >= 0) throw std::runtime_error("oracle: ambiguous forbidden partner");
                    pick = i;
                }
            if (pick < 0) throw std::runtime_error("oracle: no forbidden partner");
            m += ot.forbidden[pick].length();
            int next = -1;
            for (int i = 0; i < (int)ot.permitted.size(); ++i)
                if (ot.permitted[i].start == ot.forbidden[pick].start &&
                    ot.permitted[i].sigma == -ot.forbidden[pick].sigma) {
                    if (next >= 0) throw std::runtime_error("oracle: ambiguous permitted partner");
                    next = i;
                }
            if (next < 0) throw std::runtime_error("oracle: no permitted partner");
            cur = next;
        } while (cur != s);
        phi.pairs.emplace_back(n, m);
    }
    for (const auto& c : ot.cycles) phi.pairs.emplace_back(0, (int)c.size());
    std::sort(phi.pairs.begin(), phi.pairs.end());
    return phi;
}

inline gentle::PhiInvariant phi_pairs(std::initializer_list<std::pair<int, int>> ps) {
    gentle::PhiInvariant phi;
    for (auto pr : ps) phi.pairs.push_back(pr);
    std::sort(phi.pairs.begin(), phi.pairs.end());
    return phi;
}

// Random relabeling of vertex and arrow names.
inline gentle::Presentation shuffle_names(const gentle::Presentation& p, unsigned seed) {
    std::mt19937 rng(seed);
    std::map<std::string, std::string> vm, am;
    std::vector<int> vperm(p.vertices.size()), aperm(p.arrows.size());
    for (int i = 0; i < (int)vperm.size(); ++i) vperm[i] = i;
    for (int i = 0; i < (int)aperm.size(); ++i) aperm[i] = i;
    std::shuffle(vperm.begin(), vperm.end(), rng);
    std::shuffle(aperm.begin(), aperm.end(), rng);
    for (int i = 0; i < (int)vperm.size(); ++i)
        vm[p.vertices[i]] = "x" + std::to_string(vperm[i] + 1);
    for (int i = 0; i < (int)aperm.size(); ++i)
        am[p.arrows[i].name] = "e" + std::to_string(aperm[i] + 1);
    return gentle::relabel(p, vm, am);
}

}  // namespace testsupport

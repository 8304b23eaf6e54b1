#include "gentle/invariant.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace gentle {

PhiInvariant compute_phi_ordered(const ThreadSystem& ts, const std::vector<int>& startOrder) {
    // lookups: forbidden by (end, eps), permitted by (start, sigma);
    // uniqueness is part of the thread-structure contract
    std::map<std::pair<std::string, int>, int> forbByEnd, permByStart;
    for (int i = 0; i < (int)ts.forbidden.size(); ++i) {
        auto key = std::make_pair(ts.forbidden[i].end, ts.forbidden[i].eps);
        if (!forbByEnd.emplace(key, i).second)
            throw domain_error("internal: two forbidden threads end at " + key.first);
    }
    for (int i = 0; i < (int)ts.permitted.size(); ++i) {
        auto key = std::make_pair(ts.permitted[i].start, ts.permitted[i].sigma);
        if (!permByStart.emplace(key, i).second)
            throw domain_error("internal: two permitted threads start at " + key.first);
    }

    PhiInvariant phi;
    std::vector<bool> used(ts.permitted.size(), false);
    for (int s : startOrder) {
        if (used[s]) continue;
        int n = 0, m = 0;
        int cur = s;
        do {
            used[cur] = true;
            ++n;
            const Thread& h = ts.permitted[cur];
            auto fit = forbByEnd.find({h.end, -h.eps});
            if (fit == forbByEnd.end())
                throw domain_error("internal: no forbidden thread ends at " + h.end);
            const Thread& pi = ts.forbidden[fit->second];
            m += pi.length();
            auto hit = permByStart.find({pi.start, -pi.sigma});
            if (hit == permByStart.end())
                throw domain_error("internal: no permitted thread starts at " + pi.start);
            cur = hit->second;
        } while (cur != s);
        phi.pairs.emplace_back(n, m);
    }
    for (const auto& c : ts.cycles) phi.pairs.emplace_back(0, (int)c.size());
    std::sort(phi.pairs.begin(), phi.pairs.end());
    return phi;
}

PhiInvariant compute_phi(const ThreadSystem& ts) {
    std::vector<int> order(ts.permitted.size());
    for (int i = 0; i < (int)order.size(); ++i) order[i] = i;
    return compute_phi_ordered(ts, order);
}

PhiInvariant compute_phi(const Presentation& p) {
    SignAssignment sa = assign_signs(p);
    return compute_phi(compute_threads(p, sa));
}

int phi_cardinality(const PhiInvariant& phi) { return (int)phi.pairs.size(); }

bool phi_equal(const PhiInvariant& a, const PhiInvariant& b) { return a.pairs == b.pairs; }

std::string to_string(const PhiInvariant& phi) {
    std::ostringstream out;
    out << "[";
    for (size_t i = 0; i < phi.pairs.size(); ++i)
        out << (i ? "," : "") << "(" << phi.pairs[i].first << "," << phi.pairs[i].second << ")";
    out << "]";
    return out.str();
}

std::string to_gap_string(const PhiInvariant& phi) {
    std::ostringstream out;
    out << "[ ";
    for (size_t i = 0; i < phi.pairs.size(); ++i)
        out << (i ? ", " : "") << "[ " << phi.pairs[i].first << ", " << phi.pairs[i].second << " ]";
    out << " ]";
    return out.str();
}

PhiInvariant parse_phi(const std::string& s) {
    PhiInvariant phi;
    std::vector<int> nums;
    int cur = -1;
    for (char c : s) {
        if (c >= '0' && c <= '9') cur = (cur < 0 ? 0 : cur) * 10 + (c - '0');
        else if (cur >= 0) {
            nums.push_back(cur);
            cur = -1;
        }
    }
    if (cur >= 0) nums.push_back(cur);
    if (nums.empty() || nums.size() % 2)
        throw domain_error("cannot parse invariant '" + s + "': expected pairs of naturals");
    for (size_t i = 0; i < nums.size(); i += 2) phi.pairs.emplace_back(nums[i], nums[i + 1]);
    std::sort(phi.pairs.begin(), phi.pairs.end());
    return phi;
}

}  // namespace gentle

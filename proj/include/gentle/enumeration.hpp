#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gentle/invariant.hpp"
#include "gentle/presentation.hpp"

namespace gentle {

struct EnumerationOptions {
    int max_n = 5;
    int threads = 1;
};

// All connected gentle presentations with n vertices and cycle number c,
// up to isomorphism, in canonical-key order.
std::vector<Presentation> enumerate_gentle(int n, int c, const EnumerationOptions& opts = {});

// Independent generator without degree pruning (cross-check, n <= 3).
std::vector<Presentation> enumerate_gentle_naive(int n, int c);

struct OrbitPartition {
    std::vector<int> component;              // index -> orbit id
    std::vector<std::vector<int>> orbits;    // orbit id -> member indices
};

// Connected components of the elementary-transformation graph on the
// given presentations (which must be closed under applicable steps).
OrbitPartition transformation_orbits(const std::vector<Presentation>& set,
                                     const EnumerationOptions& opts = {});

struct PhiCollision {
    PhiInvariant phi;
    std::vector<int> orbit_ids;
};

struct EnumerationReport {
    int n = 0;
    int c = 2;
    long presentation_count = 0;
    long orbit_count = 0;
    std::vector<PhiInvariant> orbit_phis;        // per orbit id
    std::vector<PhiCollision> collisions;        // phi values shared by several orbits
    std::vector<std::string> theorem1_violations;  // #phi not in {1,3}
    std::vector<std::string> sum_violations;       // sum identities broken
    bool ok() const { return theorem1_violations.empty() && sum_violations.empty(); }
};

EnumerationReport verify_theorems(int n, const EnumerationOptions& opts = {});
nlohmann::ordered_json report_json(const EnumerationReport& rep);

}  // namespace gentle

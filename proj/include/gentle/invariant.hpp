#pragma once

#include <string>
#include <vector>

#include "gentle/presentation.hpp"
#include "gentle/threads.hpp"

namespace gentle {

// The derived invariant phi_A: a multiset of pairs of naturals, kept in
// ascending lexicographic order.
struct PhiInvariant {
    std::vector<std::pair<int, int>> pairs;
    friend bool operator==(const PhiInvariant&, const PhiInvariant&) = default;
};

PhiInvariant compute_phi(const Presentation& p);
PhiInvariant compute_phi(const ThreadSystem& ts);

// As above, but consuming unused permitted threads in the given order
// (indices into ts.permitted); exposes the start-order independence.
PhiInvariant compute_phi_ordered(const ThreadSystem& ts, const std::vector<int>& startOrder);

int phi_cardinality(const PhiInvariant& phi);
bool phi_equal(const PhiInvariant& a, const PhiInvariant& b);

std::string to_string(const PhiInvariant& phi);   // [(n1,m1),(n2,m2),...]
std::string to_gap_string(const PhiInvariant& phi);  // [ [ n1, m1 ], ... ]
PhiInvariant parse_phi(const std::string& s);

}  // namespace gentle

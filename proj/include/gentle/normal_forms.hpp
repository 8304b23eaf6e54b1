#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gentle/invariant.hpp"
#include "gentle/presentation.hpp"

namespace gentle {

// An unordered triple of pairs of naturals, stored sorted ascending.
struct InvariantTriple {
    std::array<std::pair<int, int>, 3> pairs;
    static InvariantTriple of(std::pair<int, int> a, std::pair<int, int> b, std::pair<int, int> c);
    friend bool operator==(const InvariantTriple&, const InvariantTriple&) = default;
    friend auto operator<=>(const InvariantTriple&, const InvariantTriple&) = default;
};

std::string to_string(const InvariantTriple& t);
InvariantTriple parse_triple(const std::string& s);       // "(a1,a2),(b1,b2),(c1,c2)"
InvariantTriple triple_from_phi(const PhiInvariant& phi); // throws unless #phi = 3
PhiInvariant phi_of_triple(const InvariantTriple& t);

// n1+n2+n3+2 = m1+m2+m3 and no (0,0) component (no walk or cycle can
// produce the pair (0,0)).
bool admissible(const InvariantTriple& t);

struct FamilyMatch {
    int family = 0;  // 1..10
    std::map<std::string, int> params;
};

FamilyMatch family_of(const InvariantTriple& t);           // throws on inadmissible
Presentation build_normal_form(const InvariantTriple& t);  // throws on inadmissible
std::optional<FamilyMatch> is_normal_form(const Presentation& p);

// All admissible triples with every entry <= maxEntry (the sweep set).
std::vector<InvariantTriple> admissible_triples(int maxEntry);

}  // namespace gentle

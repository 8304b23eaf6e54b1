#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gentle/invariant.hpp"
#include "gentle/normal_forms.hpp"
#include "gentle/presentation.hpp"
#include "gentle/transforms.hpp"

namespace gentle {

int vertex_degree(const Presentation& p, const std::string& v);  // loops count twice

enum class RemovalPattern { transition, hanging_start, cycle_transition };

struct RemovalSite {
    std::string vertex;
    RemovalPattern pattern = RemovalPattern::transition;
    std::string alpha;  // incoming arrow (transition / cycle_transition)
    std::string beta;   // outgoing arrow; the hanging arrow theta for hanging_start
};

// All sites of the removal definition in p (patterns transition and
// hanging_start); cycle_transition sites are reported for diagnosis but
// are not removable.
std::vector<RemovalSite> removal_sites(const Presentation& p);

Presentation remove_vertex(const Presentation& p, const RemovalSite& site);

// A group of array moves applied atomically; one group realizes one
// derived equivalence (a lifted elementary step together with the
// repositioning moves of the commutation lemma).
struct MoveGroup {
    std::vector<MoveSpec> moves;
    friend bool operator==(const MoveGroup&, const MoveGroup&) = default;
};

// One reduction step: a quiver-level transformation or a move group.
using TraceStep = std::variant<TransformStep, MoveGroup>;
std::string to_string(const TraceStep& s);

struct ReductionTrace {
    std::vector<TraceStep> steps;
    Presentation final;
    bool complete = false;
    long expansions = 0;
    std::string note;
};

// Elementary-transformation prefix after which a removable vertex exists;
// empty when the presentation is one of the irreducible configurations.
std::optional<std::pair<std::vector<TraceStep>, RemovalSite>> find_removable_vertex(
    const Presentation& p);

ReductionTrace reduce_to_normal_form(const Presentation& p, long budget = 100000);

// Replays a trace; transformations act on presentations, runs of moves
// act on the thread array (encoded before the first move of a run and
// decoded after its last).
Presentation replay(const Presentation& p, const std::vector<TraceStep>& steps);

enum class Verdict { equivalent, not_equivalent, out_of_scope };

struct Decision {
    Verdict verdict = Verdict::out_of_scope;
    std::string reason;
    PhiInvariant phi_a, phi_b;
};

Decision decide_derived_equivalence(const Presentation& a, const Presentation& b);

}  // namespace gentle

#pragma once

#include <string>
#include <vector>

#include "gentle/presentation.hpp"
#include "gentle/threads.hpp"

namespace gentle {

enum class StepKind { vertex, arrow, loop };

struct TransformStep {
    StepKind kind = StepKind::vertex;
    bool inverse = false;
    std::string site;  // vertex (V), arrow (F), loop arrow (L)
    friend bool operator==(const TransformStep&, const TransformStep&) = default;
};

std::string to_string(const TransformStep& s);
TransformStep parse_step(const std::string& s);  // "V v", "F- a", "L a", ...

// One token relocation on a thread array (the atomic transformation).
// Forward moves the token after the opposite token of the vertex below
// it; inverse moves it before the opposite token of the vertex above it.
struct MoveSpec {
    Token token;
    bool inverse = false;
    friend bool operator==(const MoveSpec&, const MoveSpec&) = default;
};

std::string to_string(const MoveSpec& m);

Presentation mirror(const Presentation& p);

// Forward transformations on the quiver with relations.
Presentation vertex_transform(const Presentation& p, const std::string& i);
Presentation arrow_transform(const Presentation& p, const std::string& delta);
Presentation loop_transform(const Presentation& p, const std::string& lambda);

bool step_applicable(const Presentation& p, const TransformStep& s);
std::vector<TransformStep> applicable_steps(const Presentation& p);
Presentation apply_step(const Presentation& p, const TransformStep& s);
Presentation apply_inverse(const Presentation& p, const TransformStep& s);  // toggles s.inverse
TransformStep invert(const TransformStep& s);

// the connectedness condition on the auxiliary quiver for F_delta
bool f_component_condition(const Presentation& p, const std::string& delta);

ThreadArray move_thread(const ThreadArray& a, const MoveSpec& m);

// The move composition realizing a step (vertex: two moves, arrow: one,
// loop: two). paper_move_decomposition returns the documented order;
// step_to_moves additionally verifies it against the quiver engine and
// falls back to the sibling order if needed.
std::vector<MoveSpec> paper_move_decomposition(const Presentation& p, const TransformStep& s);
std::vector<MoveSpec> step_to_moves(const Presentation& p, const TransformStep& s);

}  // namespace gentle

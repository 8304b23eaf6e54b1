#include <doctest.h>

#include "gentle/canonical.hpp"
#include "gentle/normal_forms.hpp"
#include "support.hpp"

using namespace gentle;
using testsupport::load_fixture;

TEST_CASE("triple parsing, sorting and admissibility") {
    InvariantTriple t = parse_triple("(1,1),(0,2),(1,1)");
    CHECK(t.pairs[0] == std::pair<int, int>{0, 2});
    CHECK(admissible(t));
    CHECK(!admissible(InvariantTriple::of({1, 1}, {1, 1}, {1, 1})));   // sum fails
    CHECK(!admissible(InvariantTriple::of({0, 0}, {1, 1}, {1, 3}))); // (0,0) impossible
    CHECK(!admissible(InvariantTriple::of({2, 1}, {2, 1}, {0, 6})));  // sum fails
}

TEST_CASE("family classification of the published examples") {
    CHECK(family_of(InvariantTriple::of({1, 1}, {0, 1}, {0, 1})).family == 5);
    CHECK(family_of(InvariantTriple::of({1, 1}, {1, 1}, {0, 2})).family == 4);
    FamilyMatch f1 = family_of(InvariantTriple::of({0, 2}, {0, 3}, {3, 0}));
    CHECK(f1.family == 1);
    CHECK(f1.params.at("a") == 2);
    CHECK(f1.params.at("b") == 3);
    CHECK(family_of(InvariantTriple::of({1, 0}, {2, 0}, {0, 5})).family == 2);
    CHECK(family_of(InvariantTriple::of({1, 1}, {2, 0}, {0, 4})).family == 3);
    CHECK(family_of(InvariantTriple::of({2, 2}, {3, 1}, {0, 4})).family == 8);
    CHECK(family_of(InvariantTriple::of({2, 2}, {2, 2}, {1, 3})).family == 9);
    CHECK(family_of(InvariantTriple::of({2, 2}, {1, 2}, {0, 1})).family == 10);
    CHECK(family_of(InvariantTriple::of({1, 3}, {1, 2}, {2, 1})).family == 6);
    CHECK(family_of(InvariantTriple::of({3, 1}, {2, 1}, {0, 5})).family == 7);
    CHECK_THROWS_AS(family_of(InvariantTriple::of({1, 1}, {1, 1}, {1, 1})), domain_error);
}

TEST_CASE("every admissible triple matches exactly one pattern") {
    for (const InvariantTriple& t : admissible_triples(3)) {
        FamilyMatch fm = family_of(t);
        CHECK(fm.family >= 1);
        CHECK(fm.family <= 10);
    }
}

TEST_CASE("the two-loop representative") {
    Presentation nf5 = build_normal_form(InvariantTriple::of({1, 1}, {0, 1}, {0, 1}));
    CHECK(nf5.vertices.size() == 2);
    CHECK(nf5.arrows.size() == 3);
    int loops = 0;
    for (const Arrow& a : nf5.arrows) loops += a.is_loop();
    CHECK(loops == 2);
    CHECK(cycle_number(nf5) == 2);
}

TEST_CASE("the three-vertex representative of family four") {
    Presentation nf4 = build_normal_form(InvariantTriple::of({1, 1}, {1, 1}, {0, 2}));
    CHECK(nf4.vertices.size() == 3);
    CHECK(nf4.arrows.size() == 4);
    CHECK(nf4.relations.size() == 2);
    // the double-relation two-cycle
    int antiparallel = 0;
    for (const Arrow& a : nf4.arrows)
        for (const Arrow& b : nf4.arrows)
            if (a.source == b.target && a.target == b.source && !a.is_loop()) ++antiparallel;
    CHECK(antiparallel == 2);
}

TEST_CASE("inadmissible triples are rejected by the builder") {
    CHECK_THROWS_AS(build_normal_form(InvariantTriple::of({1, 1}, {1, 1}, {2, 2})), domain_error);
}

TEST_CASE("round trip on a small sweep") {
    int count = 0;
    for (const InvariantTriple& t : admissible_triples(2)) {
        Presentation p = build_normal_form(t);
        CHECK(validate_gentle(p).ok);
        CHECK(cycle_number(p) == 2);
        PhiInvariant phi = compute_phi(p);
        CHECK(to_string(phi) == to_string(phi_of_triple(t)));
        ++count;
    }
    CHECK(count > 8);
}

TEST_CASE("boundary parameters") {
    // family 1 at its minimal size a+b = 3
    Presentation p13 = build_normal_form(InvariantTriple::of({0, 1}, {0, 2}, {1, 0}));
    CHECK(compute_phi(p13) == testsupport::phi_pairs({{0, 1}, {0, 2}, {1, 0}}));
    // family 2 minimal
    Presentation p2 = build_normal_form(InvariantTriple::of({1, 0}, {1, 0}, {0, 4}));
    CHECK(compute_phi(p2) == testsupport::phi_pairs({{1, 0}, {1, 0}, {0, 4}}));
    // family 9 with r = 0 degenerates into the double-relation two-cycle
    Presentation p9 = build_normal_form(InvariantTriple::of({2, 2}, {2, 2}, {0, 2}));
    CHECK(compute_phi(p9) == testsupport::phi_pairs({{2, 2}, {2, 2}, {0, 2}}));
    // family 10 with both cycles collapsed to loops
    Presentation p10 = build_normal_form(InvariantTriple::of({3, 3}, {0, 1}, {0, 1}));
    CHECK(compute_phi(p10) == testsupport::phi_pairs({{3, 3}, {0, 1}, {0, 1}}));
}

TEST_CASE("recognition: representatives recognize themselves") {
    for (const InvariantTriple& t : admissible_triples(2)) {
        Presentation p = build_normal_form(t);
        auto fm = is_normal_form(p);
        REQUIRE(fm.has_value());
        CHECK(fm->family == family_of(t).family);
        // renamed copies are recognized as well
        CHECK(is_normal_form(testsupport::shuffle_names(p, 3)).has_value());
    }
}

TEST_CASE("recognition: non-representatives are rejected") {
    CHECK(!is_normal_form(load_fixture("example2_2.q")).has_value());   // #phi = 1
    CHECK(!is_normal_form(load_fixture("sec6_quiver1.q")).has_value()); // exceptional class
    CHECK(!is_normal_form(load_fixture("a2.q")).has_value());           // c = 0
}

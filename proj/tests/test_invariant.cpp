#include <doctest.h>

#include <algorithm>

#include "gentle/canonical.hpp"
#include "gentle/invariant.hpp"
#include "gentle/normal_forms.hpp"
#include "support.hpp"

using namespace gentle;
using testsupport::load_fixture;
using testsupport::oracle_phi;
using testsupport::phi_pairs;

TEST_CASE("a2 invariant, frozen from hand execution and the oracle") {
    Presentation p = load_fixture("a2.q");
    CHECK(compute_phi(p) == phi_pairs({{3, 1}}));
    CHECK(oracle_phi(p) == phi_pairs({{3, 1}}));
}

TEST_CASE("running example invariant, frozen from the oracle") {
    Presentation p = load_fixture("example2_2.q");
    PhiInvariant expected = phi_pairs({{9, 11}});
    CHECK(oracle_phi(p, 1) == expected);
    CHECK(oracle_phi(p, 7) == expected);
    CHECK(compute_phi(p) == expected);
}

TEST_CASE("published values for the small normal forms") {
    Presentation nf4 = build_normal_form(
        InvariantTriple::of({1, 1}, {1, 1}, {0, 2}));
    CHECK(compute_phi(nf4) == phi_pairs({{1, 1}, {1, 1}, {0, 2}}));
    Presentation nf5 = build_normal_form(
        InvariantTriple::of({1, 1}, {0, 1}, {0, 1}));
    CHECK(compute_phi(nf5) == phi_pairs({{1, 1}, {0, 1}, {0, 1}}));
    Presentation nf1 = build_normal_form(
        InvariantTriple::of({0, 2}, {0, 3}, {3, 0}));
    CHECK(compute_phi(nf1) == phi_pairs({{0, 2}, {0, 3}, {3, 0}}));
}

TEST_CASE("published values for the two exceptional quivers") {
    PhiInvariant expected = phi_pairs({{1, 1}, {1, 1}, {1, 3}});
    CHECK(compute_phi(load_fixture("sec6_quiver1.q")) == expected);
    CHECK(compute_phi(load_fixture("sec6_quiver2.q")) == expected);
    CHECK(oracle_phi(load_fixture("sec6_quiver1.q")) == expected);
    CHECK(oracle_phi(load_fixture("sec6_quiver2.q")) == expected);
}

TEST_CASE("cardinality") {
    CHECK(phi_cardinality(phi_pairs({{1, 1}, {1, 1}, {0, 2}})) == 3);
    CHECK(phi_cardinality(phi_pairs({{3, 1}})) == 1);
    CHECK(phi_cardinality(PhiInvariant{}) == 0);
}

TEST_CASE("equality is order independent") {
    PhiInvariant a = phi_pairs({{1, 1}, {0, 2}, {1, 1}});
    PhiInvariant b = phi_pairs({{0, 2}, {1, 1}, {1, 1}});
    CHECK(phi_equal(a, b));
    CHECK(!phi_equal(phi_pairs({{1, 1}}), phi_pairs({{1, 2}})));
    CHECK(phi_equal(compute_phi(load_fixture("sec6_quiver1.q")),
                    compute_phi(load_fixture("sec6_quiver2.q"))));
}

TEST_CASE("start-order independence on small fixtures") {
    for (const char* name : {"a2.q", "sec6_quiver1.q", "sec6_quiver2.q"}) {
        Presentation p = load_fixture(name);
        SignAssignment sa = assign_signs(p);
        ThreadSystem ts = compute_threads(p, sa);
        PhiInvariant base = compute_phi(ts);
        std::vector<int> order(ts.permitted.size());
        for (int i = 0; i < (int)order.size(); ++i) order[i] = i;
        int tried = 0;
        do {
            CHECK(compute_phi_ordered(ts, order) == base);
        } while (std::next_permutation(order.begin(), order.end()) && ++tried < 720);
    }
}

TEST_CASE("sign-gauge independence") {
    Presentation p = load_fixture("example2_2.q");
    SignAssignment sa = assign_signs(p);
    PhiInvariant base = compute_phi(p);
    auto comps = sign_components(p);
    for (size_t ci = 0; ci < comps.size(); ++ci) {
        SignAssignment flipped = sa;
        for (const auto& [arrow, kind] : comps[ci])
            (kind == 's' ? flipped.sigma : flipped.eps)[arrow] *= -1;
        // recompute trivial-thread signs under the flipped gauge
        for (auto& [v, s] : flipped.h_sigma) {
            auto out = p.out_arrows(v);
            auto in = p.in_arrows(v);
            s = !out.empty() ? -flipped.sigma.at(out[0]->name) : flipped.eps.at(in[0]->name);
        }
        for (auto& [v, s] : flipped.p_sigma) {
            auto out = p.out_arrows(v);
            auto in = p.in_arrows(v);
            s = !out.empty() ? -flipped.sigma.at(out[0]->name) : -flipped.eps.at(in[0]->name);
        }
        ThreadSystem ts = compute_threads(p, flipped);
        CHECK(compute_phi(ts) == base);
        // lambda and column lengths are gauge-invariant as well
        ThreadArray arr = thread_array(p, flipped);
        std::vector<int> lens;
        for (const auto& c : arr.columns) lens.push_back((int)c.size());
        CHECK(lens == std::vector<int>{5, 4, 3, 2, 2, 1, 1, 1, 1});
    }
}

TEST_CASE("invariance under renaming") {
    for (const char* name : {"example2_2.q", "sec6_quiver1.q"}) {
        Presentation p = load_fixture(name);
        PhiInvariant base = compute_phi(p);
        for (unsigned seed : {2u, 11u})
            CHECK(compute_phi(testsupport::shuffle_names(p, seed)) == base);
    }
}

TEST_CASE("sum identities on two-cycle fixtures") {
    for (const char* name : {"example2_2.q", "sec6_quiver1.q", "sec6_quiver2.q"}) {
        Presentation p = load_fixture(name);
        SignAssignment sa = assign_signs(p);
        ThreadSystem ts = compute_threads(p, sa);
        PhiInvariant phi = compute_phi(ts);
        int sn = 0, sm = 0;
        for (auto [n, m] : phi.pairs) {
            sn += n;
            sm += m;
        }
        CHECK(sn == (int)ts.permitted.size());
        CHECK(sm == (int)p.arrows.size());
        if (cycle_number(p) == 2) CHECK(sn + 2 == sm);
    }
}

TEST_CASE("one-cycle spot fixtures behave like the one-cycle theory predicts") {
    // two derived-inequivalent presentations over the oriented 2-cycle
    Presentation cyc1 = parse_quiver("arrow a: u -> v\narrow b: v -> u\nrel b a\n");
    Presentation cyc2 = parse_quiver("arrow a: u -> v\narrow b: v -> u\nrel b a\nrel a b\n");
    CHECK(cycle_number(cyc1) == 1);
    CHECK(!phi_equal(compute_phi(cyc1), compute_phi(cyc2)));
    // renaming the oriented 2-cycle keeps phi
    CHECK(phi_equal(compute_phi(cyc1), compute_phi(testsupport::shuffle_names(cyc1, 3))));
}

TEST_CASE("rendering") {
    PhiInvariant phi = phi_pairs({{1, 1}, {0, 2}, {1, 1}});
    CHECK(to_string(phi) == "[(0,2),(1,1),(1,1)]");
    CHECK(to_gap_string(phi) == "[ [ 0, 2 ], [ 1, 1 ], [ 1, 1 ] ]");
    CHECK(parse_phi("[(0,2),(1,1),(1,1)]") == phi);
}

#include <doctest.h>

#include <set>

#include "gentle/canonical.hpp"
#include "gentle/threads.hpp"
#include "support.hpp"

using namespace gentle;
using testsupport::load_fixture;

namespace {

std::set<std::vector<std::string>> arrow_sets(const std::vector<Thread>& ts, bool trivialOnly) {
    std::set<std::vector<std::string>> out;
    for (const Thread& t : ts)
        if (t.trivial() == trivialOnly || !trivialOnly) out.insert(t.arrows);
    return out;
}

std::set<std::string> trivial_anchors(const std::vector<Thread>& ts) {
    std::set<std::string> out;
    for (const Thread& t : ts)
        if (t.trivial()) out.insert(t.anchor);
    return out;
}

std::vector<std::string> column_strings(const ThreadArray& a) {
    std::vector<std::string> cols;
    for (const auto& col : a.columns) {
        std::string s;
        for (const Token& t : col) s += to_string(t) + " ";
        cols.push_back(s);
    }
    return cols;
}

void check_sign_constraints(const Presentation& p, const SignAssignment& sa) {
    for (const std::string& v : p.vertices) {
        auto out = p.out_arrows(v);
        auto in = p.in_arrows(v);
        if (out.size() == 2) CHECK(sa.sigma.at(out[0]->name) == -sa.sigma.at(out[1]->name));
        if (in.size() == 2) CHECK(sa.eps.at(in[0]->name) == -sa.eps.at(in[1]->name));
        for (const Arrow* b : in)
            for (const Arrow* g : out) {
                if (p.has_relation(g->name, b->name))
                    CHECK(sa.sigma.at(g->name) == sa.eps.at(b->name));
                else
                    CHECK(sa.sigma.at(g->name) == -sa.eps.at(b->name));
            }
    }
}

}  // namespace

TEST_CASE("sign assignment satisfies the constraints on the running example") {
    Presentation p = load_fixture("example2_2.q");
    SignAssignment sa = assign_signs(p);
    check_sign_constraints(p, sa);
    // gauge-invariant products match the published table: within each
    // composable pair sigma(gamma)*eps(beta) is -1 exactly off relations
    CHECK(sa.sigma.at("alpha1") * sa.sigma.at("alpha9") == -1);  // common source v1
    CHECK(sa.eps.at("alpha4") * sa.eps.at("alpha10") == -1);     // common target v5
}

TEST_CASE("deterministic seeding on a single arrow") {
    Presentation p = load_fixture("a2.q");
    SignAssignment sa = assign_signs(p);
    CHECK(sa.sigma.at("a") == 1);
    CHECK(sa.eps.at("a") == 1);
}

TEST_CASE("two arrows with a common source get opposite sigma") {
    Presentation p = parse_quiver("arrow a: u -> v\narrow b: u -> w\n");
    SignAssignment sa = assign_signs(p);
    CHECK(sa.sigma.at("a") == -sa.sigma.at("b"));
}

TEST_CASE("one-vertex presentations are rejected") {
    Presentation p = parse_quiver("arrow l: u -> u\nrel l l\n");
    CHECK_THROWS_AS(assign_signs(p), domain_error);
}

TEST_CASE("permitted threads of the running example") {
    Presentation p = load_fixture("example2_2.q");
    SignAssignment sa = assign_signs(p);
    ThreadSystem ts = compute_threads(p, sa);
    CHECK(ts.permitted.size() == 9);
    CHECK(trivial_anchors(ts.permitted) == std::set<std::string>{"v2", "v4", "v6", "v9"});
    std::set<std::vector<std::string>> nontrivial;
    for (const Thread& t : ts.permitted)
        if (!t.trivial()) nontrivial.insert(t.arrows);
    CHECK(nontrivial == std::set<std::vector<std::string>>{
                            {"alpha1", "alpha2", "alpha3", "alpha4"},
                            {"alpha5", "alpha6", "alpha7"},
                            {"alpha8", "alpha9"},
                            {"alpha10"},
                            {"alpha11"}});
}

TEST_CASE("forbidden threads of the running example") {
    Presentation p = load_fixture("example2_2.q");
    SignAssignment sa = assign_signs(p);
    ThreadSystem ts = compute_threads(p, sa);
    CHECK(ts.cycles.empty());
    CHECK(trivial_anchors(ts.forbidden) == std::set<std::string>{"v6", "v9"});
    std::set<std::vector<std::string>> nontrivial;
    for (const Thread& t : ts.forbidden)
        if (!t.trivial()) nontrivial.insert(t.arrows);
    CHECK(nontrivial == std::set<std::vector<std::string>>{
                            {"alpha8", "alpha1"},
                            {"alpha9", "alpha6", "alpha3"},
                            {"alpha2", "alpha7"},
                            {"alpha4"},
                            {"alpha5"},
                            {"alpha10"},
                            {"alpha11"}});
}

TEST_CASE("a2 has three permitted and three forbidden threads") {
    Presentation p = load_fixture("a2.q");
    SignAssignment sa = assign_signs(p);
    ThreadSystem ts = compute_threads(p, sa);
    CHECK(ts.permitted.size() == 3);
    CHECK(ts.forbidden.size() == 3);
    CHECK(trivial_anchors(ts.permitted) == std::set<std::string>{"u", "v"});
    CHECK(trivial_anchors(ts.forbidden) == std::set<std::string>{"u", "v"});
}

TEST_CASE("relation transition carries a trivial forbidden thread only") {
    Presentation p = parse_quiver("arrow a: u -> v\narrow b: v -> w\nrel b a\n");
    SignAssignment sa = assign_signs(p);
    ThreadSystem ts = compute_threads(p, sa);
    CHECK(trivial_anchors(ts.forbidden).count("v") == 1);
    CHECK(trivial_anchors(ts.permitted).count("v") == 0);
}

TEST_CASE("busy vertices carry no trivial threads") {
    Presentation p = load_fixture("example2_2.q");
    SignAssignment sa = assign_signs(p);
    CHECK(!sa.h_sigma.count("v3"));  // degree four
    CHECK(!sa.p_sigma.count("v3"));
    CHECK(!sa.h_sigma.count("v1"));
}

TEST_CASE("thread array of the running example matches the published layout") {
    Presentation p = load_fixture("example2_2.q");
    ThreadArray arr = thread_array(p);
    CHECK(column_strings(arr) == std::vector<std::string>{
                                     "v1+ v2+ v3+ v4+ v5+ ",
                                     "v6+ v7+ v3- v8+ ",
                                     "v9+ v1- v7- ",
                                     "v10+ v5- ",
                                     "v10- v8- ",
                                     "v2- ",
                                     "v4- ",
                                     "v6- ",
                                     "v9- "});
}

TEST_CASE("token coverage on fixtures") {
    for (const char* name : {"example2_2.q", "a2.q", "sec6_quiver1.q", "sec6_quiver2.q"}) {
        Presentation p = load_fixture(name);
        ThreadArray arr = thread_array(p);
        std::map<std::string, int> plus, minus;
        size_t total = 0;
        for (const auto& col : arr.columns)
            for (const Token& t : col) {
                (t.sign > 0 ? plus : minus)[t.vertex]++;
                ++total;
            }
        CHECK(total == 2 * p.vertices.size());
        for (const std::string& v : p.vertices) {
            CHECK(plus[v] == 1);
            CHECK(minus[v] == 1);
        }
    }
}

TEST_CASE("counting identity #H = #Q1 - 2c + 2") {
    for (const char* name : {"example2_2.q", "a2.q", "sec6_quiver1.q", "sec6_quiver2.q"}) {
        Presentation p = load_fixture(name);
        ThreadArray arr = thread_array(p);
        int c = cycle_number(p);
        CHECK((int)arr.columns.size() == (int)p.arrows.size() - 2 * c + 2);
    }
}

TEST_CASE("a2 thread array shape") {
    ThreadArray arr = thread_array(load_fixture("a2.q"));
    REQUIRE(arr.columns.size() == 3);
    CHECK(arr.columns[0].size() == 2);
    CHECK(arr.columns[1].size() == 1);
    CHECK(arr.columns[2].size() == 1);
}

TEST_CASE("partition encoding of the running example") {
    Presentation p = load_fixture("example2_2.q");
    PartitionEncoding enc = partition_encoding(p);
    CHECK(enc.lambda == std::vector<int>{5, 4, 3, 2, 2, 1, 1, 1, 1});
    CHECK(enc.gamma == std::vector<std::pair<int, int>>{{1, 11},
                                                        {2, 17},
                                                        {3, 8},
                                                        {4, 18},
                                                        {5, 14},
                                                        {6, 19},
                                                        {7, 12},
                                                        {9, 16},
                                                        {10, 20},
                                                        {13, 15}});
}

TEST_CASE("partition encodings of the two exceptional quivers match the published lists") {
    PartitionEncoding e1 = partition_encoding(load_fixture("sec6_quiver1.q"));
    CHECK(e1.lambda == std::vector<int>{4, 2, 2});
    CHECK(e1.gamma == std::vector<std::pair<int, int>>{{1, 5}, {2, 6}, {3, 7}, {4, 8}});
    PartitionEncoding e2 = partition_encoding(load_fixture("sec6_quiver2.q"));
    CHECK(e2.lambda == std::vector<int>{4, 2, 2});
    CHECK(e2.gamma == std::vector<std::pair<int, int>>{{1, 5}, {2, 7}, {3, 8}, {4, 6}});
}

TEST_CASE("a2 partition") {
    PartitionEncoding enc = partition_encoding(load_fixture("a2.q"));
    CHECK(enc.lambda == std::vector<int>{2, 1, 1});
    int sum = 0;
    for (int l : enc.lambda) sum += l;
    CHECK(sum == 4);
}

TEST_CASE("decode round trip on fixtures") {
    for (const char* name : {"example2_2.q", "a2.q", "sec6_quiver1.q", "sec6_quiver2.q"}) {
        Presentation p = load_fixture(name);
        Presentation q = decode_thread_array(thread_array(p));
        CHECK(are_isomorphic(p, q));
    }
}

TEST_CASE("decode rejects duplicated and missing tokens") {
    ThreadArray bad;
    bad.columns = {{{"u", 1}, {"v", 1}}, {{"u", 1}}, {{"v", -1}}};
    CHECK_THROWS_AS(decode_thread_array(bad), domain_error);
    ThreadArray missing;
    missing.columns = {{{"u", 1}, {"v", 1}}, {{"v", -1}}};
    CHECK_THROWS_AS(decode_thread_array(missing), domain_error);
    ThreadArray disconnected;
    disconnected.columns = {{{"u", 1}}, {{"u", -1}}, {{"v", 1}}, {{"v", -1}}};
    CHECK_THROWS_AS(decode_thread_array(disconnected), domain_error);
}

TEST_CASE("oracle threads agree with the chain construction") {
    for (const char* name : {"example2_2.q", "a2.q", "sec6_quiver1.q", "sec6_quiver2.q"}) {
        Presentation p = load_fixture(name);
        SignAssignment sa = assign_signs(p);
        ThreadSystem ts = compute_threads(p, sa);
        testsupport::OracleThreads ot = testsupport::oracle_threads(p, sa);
        CHECK(arrow_sets(ts.permitted, false) == arrow_sets(ot.permitted, false));
        CHECK(arrow_sets(ts.forbidden, false) == arrow_sets(ot.forbidden, false));
        CHECK(std::set<std::vector<std::string>>(ts.cycles.begin(), ts.cycles.end()) ==
              std::set<std::vector<std::string>>(ot.cycles.begin(), ot.cycles.end()));
    }
}

TEST_CASE("dual coverage: forbidden token slots cover each vertex twice") {
    for (const char* name : {"example2_2.q", "a2.q", "sec6_quiver1.q", "sec6_quiver2.q"}) {
        Presentation p = load_fixture(name);
        SignAssignment sa = assign_signs(p);
        ThreadSystem ts = compute_threads(p, sa);
        std::map<std::string, std::set<int>> slots;
        auto add = [&](const std::string& v, int sign) {
            CHECK(slots[v].insert(sign).second);  // each token once
        };
        for (const Thread& t : ts.forbidden) {
            if (t.trivial()) {
                add(t.anchor, t.sigma);
                continue;
            }
            for (const std::string& a : t.arrows) add(p.arrow(a).source, sa.sigma.at(a));
            add(t.end, sa.eps.at(t.arrows.back()));
        }
        for (const auto& cyc : ts.cycles)
            for (const std::string& a : cyc) add(p.arrow(a).source, sa.sigma.at(a));
        for (const std::string& v : p.vertices) CHECK(slots[v].size() == 2);
    }
}

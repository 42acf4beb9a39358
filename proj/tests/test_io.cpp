#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"

using namespace etopaq;
using namespace etopaq::testing;

namespace {

const char* kSmall = R"(# two locations
clock x
action a c
action u u

location l0 init inv x <= 3
location lpriv private
location lf final inv x <= 0
edge l0 lpriv u guard 0 < x < 1
edge lpriv lf ~ guard 3 > x & x >= 0 reset x
edge l0 lf a guard x = 2 reset x   # trailing comment
)";

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("parsing the automaton format") {
    auto ta = parse_ta(kSmall);
    CHECK(ta.clocks == std::vector<std::string>{"x"});
    CHECK(ta.locations.size() == 3);
    CHECK(ta.init == 0);
    CHECK(ta.priv == 1);
    CHECK(ta.finals == std::vector<int>{2});
    REQUIRE(ta.edges.size() == 3);
    // chain form splits into two atoms
    REQUIRE(ta.edges[0].guard.size() == 2);
    CHECK(ta.edges[0].guard[0].rel == Rel::GT);
    CHECK(ta.edges[0].guard[0].bound == 0);
    CHECK(ta.edges[0].guard[1].rel == Rel::LT);
    CHECK(ta.edges[0].guard[1].bound == 1);
    // reversed atoms are flipped
    CHECK(ta.edges[1].action == -1);
    CHECK(ta.edges[1].guard[0].rel == Rel::LT);
    CHECK(ta.edges[1].guard[0].bound == 3);
    CHECK(ta.edges[1].resets == std::vector<int>{0});
    CHECK(constraint_str(ta, ta.edges[0].guard) == "x > 0 & x < 1");
    CHECK(constraint_str(ta, {}) == "true");
    CHECK(ta.action_name(ta.edges[2].action) == "a");
}

TEST_CASE("printing is canonical and round-trips") {
    auto ta = parse_ta(kSmall);
    std::string text = print_ta(ta);
    CHECK(parse_ta(text) == ta);
    CHECK(print_ta(parse_ta(text)) == text);
    for (const auto& name : automaton_fixtures()) {
        CAPTURE(name);
        auto f = fixture(name);
        CHECK(print_ta(f) == read_file(fixture_path(name + ".ta")));
        CHECK(parse_ta(print_ta(f)) == f);
        auto p = prepare(f);
        CHECK(parse_ta(print_ta(p)) == p);
    }
    std::mt19937 rng(41);
    for (int i = 0; i < 200; ++i) {
        auto r = random_ta(rng);
        CHECK(parse_ta(print_ta(r)) == r);
    }
}

TEST_CASE("parse errors name the line") {
    struct Bad {
        std::string text, message;
    };
    std::vector<Bad> cases = {
        {"clock x\nlocation l0 init\nedge l0 zz ~\n", "line 3: unknown location 'zz'"},
        {"clock x\nclock x\n", "line 2: duplicate clock 'x'"},
        {"location l0 init\nlocation l0\n", "line 2: duplicate location 'l0'"},
        {"clock x\nlocation l0 init inv y <= 1\n", "line 2: unknown clock 'y'"},
        {"clock x\nlocation l0 init inv x ~ 1\n", "line 2: cannot parse constraint"},
        {"clock x\nlocation l0 init inv x <= 1.5\n", "line 2: cannot parse constraint 'x <= 1.5'"},
        {"clock x\nlocation l0 init inv x <= y\n", "line 2: expected an integer constant, got 'y'"},
        {"location l0\n", "no initial location"},
        {"", "no locations"},
        {"action a q\n", "line 1: usage: action <name> c|u"},
        {"frobnicate\n", "line 1: unknown directive 'frobnicate'"},
        {"location l0 init init\n", "line 1"},
        {"location l0 init shiny\n", "unknown location flag 'shiny'"},
        {"location l0 init\nedge l0 l0 b\n", "line 2"},
    };
    for (const auto& c : cases) {
        CAPTURE(c.text);
        try {
            parse_ta(c.text);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK_MESSAGE(contains(e.what(), c.message), e.what());
        }
    }
    CHECK_THROWS_AS(load_ta("/nonexistent/file.ta"), ParseError);
}

TEST_CASE("meta-strategy files") {
    auto ta = fixture("ta_counterex");
    auto phi = msf(ta, "counterex");
    REQUIRE(phi.stem.size() == 2);
    CHECK(phi.stem[0].in_interval.size() == 2);
    CHECK(phi.stem[0].in_interval[0] == ta.mask_of({"a"}));
    CHECK(phi.stem[1].in_interval[1] == ta.mask_of({"b"}));
    CHECK(parse_msf(ta, print_msf(ta, phi)) == phi);
    CHECK(print_msf(ta, phi) == read_file(fixture_path("counterex.msf")));
    std::mt19937 rng(43);
    auto t1 = fixture("ta1");
    for (int i = 0; i < 100; ++i) {
        auto p = random_phi(t1, rng);
        CHECK(parse_msf(t1, print_msf(t1, p)) == p);
    }
    for (const char* bad : {R"({"loop": []})", R"({"stem": []})", R"([1, 2])", R"({"loop": [{"point": ["u"], "interval": [[]]}]})",
                            R"({"loop": [{"point": ["zz"], "interval": [[]]}]})", R"({"loop": [{"point": [], "interval": []}]})",
                            R"({"loop": [{"point": []}]})", R"({"loop": [{"point": [3], "interval": [[]]}]})", "{not json"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_msf(t1, bad), ParseError);
    }
}

TEST_CASE("DOT exports") {
    Setup s("ta_opaque");
    std::string r = regions_dot(*s.rs, 1000);
    CHECK(r.rfind("digraph", 0) == 0);
    CHECK(contains(r, "->"));
    auto g = s.bs->explore();
    std::string b = beliefs_dot(*s.bs, g, true);
    CHECK(b.rfind("digraph", 0) == 0);
    CHECK(contains(b, "bot"));
    CHECK(contains(b, "b0"));
    CHECK(contains(b, "b(0,1)'"));
    auto names = pretty_belief_names(*s.bs, g);
    CHECK(names.size() == g.states.size());
    auto gg = explore_game(*s.bs, Mode::Full);
    std::string d = game_dot(*s.bs, gg);
    CHECK(d.rfind("digraph", 0) == 0);
    size_t arrows = 0;
    for (size_t p = d.find("->"); p != std::string::npos; p = d.find("->", p + 1)) ++arrows;
    CHECK(arrows == gg.edges.size());
    auto res = solve(*s.bs, Mode::Full);
    CHECK(contains(witness_str(s.ta, res.witness), "{a}"));
}

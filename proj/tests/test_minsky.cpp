#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"

#include <set>

using namespace etopaq;
using namespace etopaq::testing;

namespace {

std::vector<MinskyMachine> machines() {
    std::vector<MinskyMachine> out;
    for (const auto& [name, text] : sample_machines()) out.push_back(parse_machine(text));
    out.push_back(parse_machine("INC C2\nDEC C2\nIFZ C2 3 0\nHALT\n"));
    out.push_back(parse_machine("INC C1\nINC C2\nDEC C1\nIFZ C2 5 4\nDEC C2\nHALT\n"));
    return out;
}

}  // namespace

TEST_CASE("machine parsing") {
    auto m = parse_machine("# comment\nINC C1\n\nIFZ C2 2 0  # trailing\nHALT\n");
    REQUIRE(m.commands.size() == 3);
    CHECK(m.commands[0].op == Op::Inc);
    CHECK(m.commands[0].counter == 1);
    CHECK(m.commands[1].op == Op::IfZero);
    CHECK(m.commands[1].counter == 2);
    CHECK(m.commands[1].goto_zero == 2);
    CHECK(m.commands[1].goto_nonzero == 0);
    CHECK(m.commands[2].op == Op::Halt);
    for (const char* bad : {"", "INC C1\n", "INC C3\nHALT\n", "IFZ C1 7 0\nHALT\n", "JMP 1\nHALT\n",
                            "IFZ C1 0\nHALT\n", "HALT\nINC C1\n"})
        CHECK_THROWS_AS(parse_machine(bad), std::runtime_error);
}

TEST_CASE("closed-form sizes") {
    auto halt = parse_machine("HALT\n");
    CHECK(expected_locations(halt) == 19);
    CHECK(expected_edges(halt) == 96);
    auto loop = parse_machine(sample_machines()[2].second);
    CHECK(expected_locations(loop) == 32);
    CHECK(expected_edges(loop) == 122);
    for (const auto& m : machines()) {
        auto ta = encode(m, true);
        CHECK(ta.locations.size() == expected_locations(m));
        CHECK(ta.edges.size() == expected_edges(m));
    }
}

TEST_CASE("encodings pass the structural check and validation") {
    for (const auto& m : machines()) {
        auto ta = encode(m);
        auto rep = structural_check(ta, m);
        CHECK(rep.ok);
        CHECK(rep.mismatches.empty());
        CHECK(validate(ta).empty());
        CHECK(ta.locations[size_t(ta.priv)].name == "lpriv");
        REQUIRE(ta.finals.size() == 1);
        CHECK(ta.locations[size_t(ta.finals[0])].name == "lf");
        CHECK(ta.locations[size_t(ta.init)].name == "init");
        for (const char* name : {"1act.init", "1act.e", "GC1.init", "GC1.l", "GC2.init", "c0.init"})
            CHECK(ta.find_location(name) >= 0);
    }
}

TEST_CASE("guard and invariant constants stay small") {
    for (const auto& m : machines()) {
        auto ta = encode(m);
        std::set<long> consts;
        for (const auto& e : ta.edges)
            for (const auto& a : e.guard) consts.insert(a.bound);
        for (const auto& l : ta.locations)
            for (const auto& a : l.invariant) consts.insert(a.bound);
        for (long c : consts) {
            CHECK(c >= 0);
            CHECK(c <= 3);
        }
    }
}

TEST_CASE("encoding is deterministic") {
    for (const auto& m : machines()) {
        CHECK(encode(m) == encode(m));
        CHECK(print_ta(encode(m)) == print_ta(encode(m)));
    }
}

TEST_CASE("tampered encodings are caught") {
    auto m = parse_machine(sample_machines()[2].second);
    auto ta = encode(m);
    SUBCASE("a missing edge") {
        ta.edges.pop_back();
        auto rep = structural_check(ta, m);
        CHECK_FALSE(rep.ok);
        CHECK_FALSE(rep.mismatches.empty());
    }
    SUBCASE("a missing location") {
        int victim = ta.find_location("c0.l2");
        REQUIRE(victim >= 0);
        ta.locations[size_t(victim)].name = "stray";
        CHECK_FALSE(structural_check(ta, m).ok);
    }
    SUBCASE("a large guard constant") {
        for (auto& e : ta.edges)
            if (!e.guard.empty()) {
                e.guard[0].bound = 4;
                break;
            }
        CHECK_FALSE(structural_check(ta, m).ok);
    }
    SUBCASE("the wrong machine") {
        CHECK_FALSE(structural_check(ta, parse_machine("HALT\n")).ok);
    }
}

TEST_CASE("counter commands use their own clock window") {
    auto ta = encode(parse_machine("INC C2\nHALT\n"));
    int x = ta.find_clock("x");
    REQUIRE(x >= 0);
    bool saw_c2_window = false;
    for (const auto& e : ta.edges) {
        std::string src = ta.locations[size_t(e.src)].name;
        if (src.rfind("c0.", 0) != 0) continue;
        for (const auto& a : e.guard)
            if (a.bound == 2 && a.clock == x) saw_c2_window = true;
    }
    CHECK(saw_c2_window);
}

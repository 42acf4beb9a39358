#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "etopaq/rational.hpp"

namespace etopaq {

enum class Rel { LT, LE, EQ, GE, GT };

const char* rel_str(Rel r);

struct Atom {
    int clock = 0;
    Rel rel = Rel::EQ;
    int bound = 0;
    bool operator==(const Atom&) const = default;
};

// conjunction; empty means true
using Constraint = std::vector<Atom>;

constexpr int kSilent = -1;

struct Action {
    std::string name;
    bool controllable = false;
    bool operator==(const Action&) const = default;
};

// bit i set <=> action i enabled (only controllable bits are meaningful)
using ActionMask = std::uint64_t;

struct Location {
    std::string name;
    Constraint invariant;
    bool secret = false;  // only meaningful in a duplicated automaton
    bool operator==(const Location&) const = default;
};

struct Edge {
    int src = 0;
    Constraint guard;
    int action = kSilent;
    std::vector<int> resets;
    int dst = 0;
    int origin = -1;  // index of the edge this one was copied from (-1: none / tick loop)
    bool operator==(const Edge&) const = default;
};

struct TimedAutomaton {
    std::vector<std::string> clocks;
    std::vector<Action> actions;
    std::vector<Location> locations;
    int init = 0;
    int priv = -1;
    std::vector<int> finals;  // sorted
    std::vector<Edge> edges;
    int tick_clock = -1;
    bool duplicated = false;

    bool operator==(const TimedAutomaton&) const = default;

    bool is_final(int loc) const;
    int find_location(const std::string& name) const;  // -1 if absent
    int find_clock(const std::string& name) const;
    int find_action(const std::string& name) const;
    int location_index(const std::string& name) const;  // throws
    int action_index(const std::string& name) const;    // throws

    ActionMask controllable_mask() const;
    bool action_allowed(int action, ActionMask enabled) const;  // silent/uncontrollable always
    std::string action_name(int action) const;                 // "~" for silent
    std::string mask_str(ActionMask m) const;                   // "{a,b}"
    ActionMask mask_of(const std::vector<std::string>& names) const;  // throws on bad name
    std::vector<ActionMask> controllable_subsets() const;
};

struct Violation {
    std::string rule;  // private-is-final, final-has-outgoing, final-not-urgent, bad-reference, ...
    std::string where;
    std::string message;
};

std::vector<Violation> validate(const TimedAutomaton& ta);

// adds a fresh clock "xf" (reset on every edge into a final, xf = 0 in every final
// invariant) unless an existing clock already witnesses urgency
TimedAutomaton make_finals_urgent(const TimedAutomaton& ta);

TimedAutomaton add_tick_clock(const TimedAutomaton& ta);
TimedAutomaton duplicate(const TimedAutomaton& ta);

// duplicate, then add the tick clock
TimedAutomaton prepare(const TimedAutomaton& ta);

// ---------------------------------------------------------------------------
// concrete semantics

struct State {
    int loc = 0;
    std::vector<Rational> val;
    Rational time;
};

struct Step {
    Rational delay;
    int edge = 0;
};

using Run = std::vector<Step>;

bool holds(const Atom& a, const Rational& v);
// first violated atom, if any
std::optional<Atom> first_violation(const Constraint& c, const std::vector<Rational>& val);

State initial_state(const TimedAutomaton& ta);
State step_delay(const TimedAutomaton& ta, const State& s, const Rational& d);
State step_discrete(const TimedAutomaton& ta, const State& s, int edge);
// states s0..sn along the run; throws std::runtime_error on an illegal step
std::vector<State> replay(const TimedAutomaton& ta, const Run& run);

enum class RunClass { Private, Public, Neither };
const char* run_class_str(RunClass c);

struct Classification {
    RunClass cls = RunClass::Neither;
    Rational duration;
};

Classification classify_run(const TimedAutomaton& dup, const Run& run);

// map a run of the original automaton to the prepared one (inserting tick
// self-loops wherever z would exceed 1) and back
Run lift_run(const TimedAutomaton& prepared, const Run& original);
Run project_run(const TimedAutomaton& prepared, const Run& lifted);

}  // namespace etopaq

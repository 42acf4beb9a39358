#pragma once

#include <optional>
#include <string>
#include <vector>

#include "etopaq/belief.hpp"

namespace etopaq {

struct UnitPlan {
    ActionMask at_point = 0;
    std::vector<ActionMask> in_interval{0};  // nonempty
    bool operator==(const UnitPlan&) const = default;
};

// eventually periodic: stem, then loop forever
struct MetaStrategy {
    std::vector<UnitPlan> stem;
    std::vector<UnitPlan> loop;  // nonempty
    bool operator==(const MetaStrategy&) const = default;

    const UnitPlan& unit(long k) const;
    // index into stem ++ loop of unit k
    size_t lasso_index(long k) const;
    void check() const;  // throws on an empty loop / empty interval plan
};

struct Choice {
    Tick tick = Tick::Zero;
    ActionMask enabled = 0;
    bool operator==(const Choice&) const = default;
};

std::string choices_str(const TimedAutomaton& ta, const std::vector<Choice>& v);

// phi with every controllable action enabled everywhere
MetaStrategy all_enabled(const TimedAutomaton& ta);

Choice next_choice(const MetaStrategy& phi, const std::vector<Choice>& v);

// the unique label sequence followed by the controlled belief automaton
std::vector<Choice> phi_sequence(const MetaStrategy& phi, size_t length);

// ---------------------------------------------------------------------------
// controlled belief automaton

struct ControlledState {
    std::vector<Choice> v;
    BeliefId belief = kBottom;
};

ControlledState controlled_successor(BeliefSpace& bs, const MetaStrategy& phi, const ControlledState& s);

// bucket 2k is the point [k,k], bucket 2k+1 the interval (k,k+1)
std::string bucket_str(int bucket);

struct Encountered {
    std::vector<BeliefId> buckets;  // bucket index -> belief
    int loop_start = 0;             // buckets[loop_start..] repeat forever
};

Encountered encountered_beliefs(BeliefSpace& bs, const MetaStrategy& phi);

// ---------------------------------------------------------------------------
// admission and feasibility (runs of the prepared automaton)

bool run_admits(const TimedAutomaton& prepared, const Run& run, const std::vector<Choice>& v);

// a witness sequence v when the run is feasible
std::optional<std::vector<Choice>> is_feasible(BeliefSpace& bs, const MetaStrategy& phi, const Run& run);

// ---------------------------------------------------------------------------
// concrete (finitely-varying) strategies

struct Piece {
    Rational lo, hi;
    bool lo_closed = true, hi_closed = true;
    ActionMask mask = 0;
};

// pieces cover [0, period_start + period) in order; time beyond wraps into
// [period_start, period_start + period)
struct ConcreteStrategy {
    std::vector<Piece> pieces;
    long period_start = 0;
    long period = 1;

    ActionMask at(const Rational& t) const;
    void check() const;
};

ConcreteStrategy sample_strategy(const MetaStrategy& phi);
MetaStrategy meta_of(const ConcreteStrategy& sigma);
bool satisfies(const ConcreteStrategy& sigma, const MetaStrategy& phi);

// every discrete step is silent, uncontrollable, or enabled at its absolute time
bool sigma_compatible(const TimedAutomaton& ta, const Run& run, const ConcreteStrategy& sigma);

}  // namespace etopaq

#pragma once

#include <stdexcept>
#include <string>

#include "etopaq/game.hpp"

namespace etopaq {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// line-oriented automaton format (grammar in README.md)
TimedAutomaton parse_ta(const std::string& text);
std::string print_ta(const TimedAutomaton& ta);
TimedAutomaton load_ta(const std::string& path);

std::string constraint_str(const TimedAutomaton& ta, const Constraint& c);  // "x >= 1 & x < 2", "true"

// meta-strategy JSON: {"stem": [plan...], "loop": [plan...]},
// plan = {"point": [names], "interval": [[names], ...]}
MetaStrategy parse_msf(const TimedAutomaton& ta, const std::string& text);
std::string print_msf(const TimedAutomaton& ta, const MetaStrategy& phi);
MetaStrategy load_msf(const TimedAutomaton& ta, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// DOT exports; `pretty` names beliefs b<k>, b(<k>,<k+1>) with a prime when no
// public final is present
std::string regions_dot(RegionSpace& rs, size_t cap);
std::string beliefs_dot(BeliefSpace& bs, const BeliefGraph& g, bool pretty);
std::string game_dot(BeliefSpace& bs, const GameGraph& g);

// short names (bot, b<k>, b(<k>,<k+1>), primed without a public final) for an explored belief graph
std::vector<std::string> pretty_belief_names(BeliefSpace& bs, const BeliefGraph& g);

std::string witness_str(const TimedAutomaton& ta, const Witness& w);

}  // namespace etopaq

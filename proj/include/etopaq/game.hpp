#pragma once

#include <optional>
#include <string>
#include <vector>

#include "etopaq/oracle.hpp"

namespace etopaq {

// (current belief, belief accumulated since the last tick-1 label, phase,
// closed-mode bookkeeping)
struct GameState {
    BeliefId cur = kBottom;
    BeliefId acc = kBottom;
    bool at_integer = true;
    bool obligation = false;  // closed: the next interval must contain a final
    bool prev_final = false;  // closed: the last interval contained a final
    bool operator==(const GameState&) const = default;
};

struct GameStateHash {
    size_t operator()(const GameState& s) const;
};

struct GameMove {
    Choice label;
    GameState dst;
};

// legal moves (offending tick-1 labels pruned) in a fixed label order
std::vector<GameMove> game_successors(BeliefSpace& bs, const GameState& s, Mode mode);

struct GameEdge {
    int src, dst;
    Choice label;
};

struct GameGraph {
    std::vector<GameState> states;  // BFS order, states[0] initial
    std::vector<GameEdge> edges;
    std::vector<int> parent;        // BFS tree
    std::vector<int> parent_edge;
    bool complete = true;
    std::string stop_reason;
};

struct SolveOptions {
    size_t state_cap = 0;       // 0: ETOPAQ_STATE_CAP or the built-in default
    double time_limit_s = 60.0;
    int workers = 1;            // accepted for interface stability; exploration is sequential
};

size_t default_state_cap();

GameGraph explore_game(BeliefSpace& bs, Mode mode, const SolveOptions& opt = {});

struct Witness {
    std::vector<Choice> stem;
    std::vector<Choice> loop;
};

enum class Status { Sat, Unsat, Indeterminate };
const char* status_str(Status s);

struct SolveResult {
    Status status = Status::Indeterminate;
    Witness witness;
    size_t states = 0;
    size_t edges = 0;
    std::string diagnostics;
};

SolveResult solve(BeliefSpace& bs, Mode mode, const SolveOptions& opt = {});
SolveResult solve(BeliefSpace& bs, Mode mode, const SolveOptions& opt, GameGraph& graph);

MetaStrategy witness_to_metastrategy(const Witness& w);

// per-bucket flags read off the encountered beliefs
BucketTable belief_buckets(BeliefSpace& bs, const MetaStrategy& phi);
Verdict check_metastrategy(BeliefSpace& bs, const MetaStrategy& phi, Mode mode);

// buckets (under the all-enabled meta-strategy, one lasso period) holding both
// a private and a public final; nonempty iff existentially opaque
std::vector<int> check_exists(BeliefSpace& bs);

}  // namespace etopaq

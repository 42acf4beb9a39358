#pragma once

#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "etopaq/region.hpp"

namespace etopaq {

using BeliefId = int;
constexpr BeliefId kBottom = -1;

struct BeliefEdge {
    BeliefId src;
    Tick tick;
    ActionMask enabled;
    BeliefId dst;
};

struct BeliefGraph {
    std::vector<BeliefId> states;  // kBottom first, then BFS order
    std::vector<BeliefEdge> edges;
    bool complete = true;
};

// Hash-consed sets of regions with memoized successors. The empty set is a
// legitimate (dead, absorbing) belief; kBottom is the pre-initial state.
class BeliefSpace {
   public:
    explicit BeliefSpace(RegionSpace& rs, bool strict_initial = false);

    RegionSpace& regions() { return rs_; }
    const TimedAutomaton& ta() const { return rs_.ta(); }

    BeliefId intern(std::vector<RegionId> regions);
    const std::vector<RegionId>& members(BeliefId b) const { return beliefs_.at(b); }
    size_t size() const { return beliefs_.size(); }
    BeliefId empty() { return intern({}); }

    BeliefId initial(ActionMask enabled);
    BeliefId successor(BeliefId b, Tick tick, ActionMask enabled);
    BeliefId unite(BeliefId a, BeliefId b);
    bool subset(BeliefId a, BeliefId b) const;

    bool has_private_final(BeliefId b) const;
    bool has_public_final(BeliefId b) const;
    bool leaking_full(BeliefId b) const { return has_private_final(b) != has_public_final(b); }
    bool leaking_weak(BeliefId b) const { return has_private_final(b) && !has_public_final(b); }
    bool finals_present(BeliefId b) const { return has_private_final(b) || has_public_final(b); }

    std::string to_string(BeliefId b) const;

    // breadth-first exploration of the belief automaton over all labels
    BeliefGraph explore(size_t cap = 100000);

   private:
    std::vector<RegionId> close(std::vector<RegionId> seed, ActionMask enabled, bool eps, bool delays);

    RegionSpace& rs_;
    bool strict_initial_;
    std::vector<std::vector<RegionId>> beliefs_;
    std::map<std::vector<RegionId>, BeliefId> index_;
    std::vector<signed char> priv_final_, pub_final_;
    std::map<std::tuple<BeliefId, int, ActionMask>, BeliefId> succ_memo_;
    std::map<ActionMask, BeliefId> init_memo_;
};

}  // namespace etopaq

#include "etopaq/belief.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace etopaq {

BeliefSpace::BeliefSpace(RegionSpace& rs, bool strict_initial) : rs_(rs), strict_initial_(strict_initial) {}

BeliefId BeliefSpace::intern(std::vector<RegionId> regions) {
    std::sort(regions.begin(), regions.end());
    regions.erase(std::unique(regions.begin(), regions.end()), regions.end());
    auto it = index_.find(regions);
    if (it != index_.end()) return it->second;
    BeliefId id = BeliefId(beliefs_.size());
    bool pv = false, pb = false;
    for (RegionId r : regions) {
        if (!rs_.is_final(r)) continue;
        if (rs_.is_secret(r))
            pv = true;
        else
            pb = true;
    }
    priv_final_.push_back(pv);
    pub_final_.push_back(pb);
    index_.emplace(regions, id);
    beliefs_.push_back(std::move(regions));
    return id;
}

std::vector<RegionId> BeliefSpace::close(std::vector<RegionId> seed, ActionMask enabled, bool eps, bool delays) {
    const auto& ta = rs_.ta();
    std::set<RegionId> seen(seed.begin(), seed.end());
    std::vector<RegionId> stack(seen.begin(), seen.end());
    while (!stack.empty()) {
        RegionId r = stack.back();
        stack.pop_back();
        for (const auto& t : rs_.discretes(r)) {
            if (t.action == kSilent ? !eps : !ta.action_allowed(t.action, enabled)) continue;
            if (seen.insert(t.dst).second) stack.push_back(t.dst);
        }
        if (!delays) continue;
        for (const auto& t : rs_.delays(r)) {
            if (t.tick != Tick::ZeroPlus) continue;
            if (seen.insert(t.dst).second) stack.push_back(t.dst);
        }
    }
    return {seen.begin(), seen.end()};
}

BeliefId BeliefSpace::initial(ActionMask enabled) {
    auto it = init_memo_.find(enabled);
    if (it != init_memo_.end()) return it->second;
    BeliefId b = intern(close({rs_.initial()}, enabled, !strict_initial_, false));
    init_memo_[enabled] = b;
    return b;
}

BeliefId BeliefSpace::successor(BeliefId b, Tick tick, ActionMask enabled) {
    if (b == kBottom) {
        if (tick != Tick::Zero) throw std::runtime_error("the bottom belief only takes (0, E) labels");
        return initial(enabled);
    }
    if (tick == Tick::Zero) throw std::runtime_error("(0, E) labels only leave the bottom belief");
    auto key = std::make_tuple(b, int(tick), enabled);
    auto it = succ_memo_.find(key);
    if (it != succ_memo_.end()) return it->second;
    std::vector<RegionId> first;
    for (RegionId r : beliefs_[b])
        for (const auto& t : rs_.delays(r))
            if (t.tick == tick) first.push_back(t.dst);
    BeliefId out = intern(close(std::move(first), enabled, true, true));
    succ_memo_[key] = out;
    return out;
}

BeliefId BeliefSpace::unite(BeliefId a, BeliefId b) {
    if (a == b) return a;
    std::vector<RegionId> u;
    std::set_union(beliefs_[a].begin(), beliefs_[a].end(), beliefs_[b].begin(), beliefs_[b].end(),
                   std::back_inserter(u));
    return intern(std::move(u));
}

bool BeliefSpace::subset(BeliefId a, BeliefId b) const {
    return std::includes(beliefs_[b].begin(), beliefs_[b].end(), beliefs_[a].begin(), beliefs_[a].end());
}

bool BeliefSpace::has_private_final(BeliefId b) const { return b != kBottom && priv_final_[b]; }
bool BeliefSpace::has_public_final(BeliefId b) const { return b != kBottom && pub_final_[b]; }

std::string BeliefSpace::to_string(BeliefId b) const {
    if (b == kBottom) return "bot";
    std::string s = "{";
    for (size_t i = 0; i < beliefs_[b].size(); ++i) s += (i ? ", " : "") + rs_.to_string(beliefs_[b][i]);
    return s + "}";
}

BeliefGraph BeliefSpace::explore(size_t cap) {
    BeliefGraph g;
    auto subsets = ta().controllable_subsets();
    std::set<BeliefId> seen{kBottom};
    std::deque<BeliefId> queue{kBottom};
    g.states.push_back(kBottom);
    while (!queue.empty()) {
        BeliefId b = queue.front();
        queue.pop_front();
        std::vector<Tick> ticks = b == kBottom ? std::vector<Tick>{Tick::Zero}
                                               : std::vector<Tick>{Tick::ZeroPlus, Tick::One};
        for (Tick t : ticks) {
            for (ActionMask e : subsets) {
                BeliefId d = successor(b, t, e);
                g.edges.push_back({b, t, e, d});
                if (seen.insert(d).second) {
                    if (g.states.size() >= cap) {
                        g.complete = false;
                        continue;
                    }
                    g.states.push_back(d);
                    queue.push_back(d);
                }
            }
        }
    }
    return g;
}

}  // namespace etopaq

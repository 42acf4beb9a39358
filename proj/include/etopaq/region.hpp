#pragma once

#include <functional>
#include <tuple>
#include <string>
#include <unordered_map>
#include <vector>

#include "etopaq/ta.hpp"

namespace etopaq {

enum class Tick { Zero, ZeroPlus, One };

const char* tick_str(Tick t);  // "0", "0+", "1"

constexpr int kAbove = -1;

// ip[c] is the integer part (0..cmax[c]) or kAbove; rank[c] is 0 for a zero
// fractional part, 1..G for the fractional groups in increasing order (unused
// for ABOVE clocks, kept at 0)
struct Region {
    int loc = 0;
    std::vector<int> ip;
    std::vector<int> rank;
    bool operator==(const Region&) const = default;
    bool operator<(const Region& o) const {
        return std::tie(loc, ip, rank) < std::tie(o.loc, o.ip, o.rank);
    }
};

struct RegionHash {
    size_t operator()(const Region& r) const;
};

using RegionId = int;

struct RegionTrans {
    Tick tick = Tick::Zero;
    int action = kSilent;  // kSilent for delays
    int edge = -1;         // -1 for delays
    RegionId dst = 0;
};

// largest constant compared with each clock in guards and invariants
std::vector<int> compute_cmax(const TimedAutomaton& ta);

Region region_of(int loc, const std::vector<Rational>& val, const std::vector<int>& cmax);

// immediate time successor; false when every clock is ABOVE
bool time_successor(const Region& r, const std::vector<int>& cmax, int tick_clock, Region& out, Tick& tag);

// exact satisfaction of one atom / a conjunction by all valuations of the region
bool satisfies(const Region& r, const Atom& a);
bool satisfies(const Region& r, const Constraint& c);

Region apply_resets(const Region& r, const std::vector<int>& resets, int dst);

bool is_open(const Region& r);

// a valuation inside the region
std::vector<Rational> representative(const Region& r, const std::vector<int>& cmax);

// Lazily explored labelled region automaton over a prepared (duplicated, tick
// augmented) automaton. Regions are interned; successors are memoized.
class RegionSpace {
   public:
    explicit RegionSpace(TimedAutomaton prepared);

    const TimedAutomaton& ta() const { return ta_; }
    const std::vector<int>& cmax() const { return cmax_; }

    RegionId intern(const Region& r);
    const Region& region(RegionId id) const { return regions_[id]; }
    size_t size() const { return regions_.size(); }

    RegionId initial();
    RegionId of(int loc, const std::vector<Rational>& val) { return intern(region_of(loc, val, cmax_)); }

    // delay transitions: the time successor when it satisfies the invariant,
    // plus the (0+, eps) self-loop for open regions
    const std::vector<RegionTrans>& delays(RegionId id);
    // discrete transitions for every edge (callers filter on the action)
    const std::vector<RegionTrans>& discretes(RegionId id);

    bool is_final(RegionId id) const { return ta_.is_final(regions_[id].loc); }
    bool is_secret(RegionId id) const { return ta_.locations[regions_[id].loc].secret; }
    bool is_public(RegionId id) const { return !is_secret(id); }

    std::string to_string(RegionId id) const;
    // region string restricted to the given clocks (used to compare with figures)
    std::string to_string(RegionId id, const std::vector<int>& clocks) const;

   private:
    TimedAutomaton ta_;
    std::vector<int> cmax_;
    std::vector<Region> regions_;
    std::unordered_map<Region, RegionId, RegionHash> index_;
    std::vector<std::vector<RegionTrans>> delay_memo_, disc_memo_;
    std::vector<char> delay_done_, disc_done_;
};

}  // namespace etopaq

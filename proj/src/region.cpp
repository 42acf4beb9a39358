#include "etopaq/region.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace etopaq {

const char* tick_str(Tick t) {
    switch (t) {
        case Tick::Zero: return "0";
        case Tick::ZeroPlus: return "0+";
        case Tick::One: return "1";
    }
    return "?";
}

size_t RegionHash::operator()(const Region& r) const {
    size_t h = std::hash<int>()(r.loc);
    auto mix = [&](int v) { h ^= std::hash<int>()(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    for (int v : r.ip) mix(v);
    for (int v : r.rank) mix(v);
    return h;
}

std::vector<int> compute_cmax(const TimedAutomaton& ta) {
    std::vector<int> c(ta.clocks.size(), 0);
    auto scan = [&](const Constraint& k) {
        for (const auto& a : k) c[a.clock] = std::max(c[a.clock], a.bound);
    };
    for (const auto& l : ta.locations) scan(l.invariant);
    for (const auto& e : ta.edges) scan(e.guard);
    return c;
}

namespace {

// renumber fractional ranks densely (1..G), keeping 0 for zero fractions
void normalize(Region& r) {
    std::vector<int> used;
    for (size_t c = 0; c < r.ip.size(); ++c)
        if (r.ip[c] != kAbove && r.rank[c] > 0) used.push_back(r.rank[c]);
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    for (size_t c = 0; c < r.ip.size(); ++c) {
        if (r.ip[c] == kAbove) {
            r.rank[c] = 0;
        } else if (r.rank[c] > 0) {
            r.rank[c] = int(std::lower_bound(used.begin(), used.end(), r.rank[c]) - used.begin()) + 1;
        }
    }
}

int max_rank(const Region& r) {
    int g = 0;
    for (size_t c = 0; c < r.ip.size(); ++c)
        if (r.ip[c] != kAbove) g = std::max(g, r.rank[c]);
    return g;
}

}  // namespace

Region region_of(int loc, const std::vector<Rational>& val, const std::vector<int>& cmax) {
    Region r;
    r.loc = loc;
    size_t n = val.size();
    r.ip.assign(n, 0);
    r.rank.assign(n, 0);
    std::vector<Rational> fr(n);
    std::vector<Rational> distinct;
    for (size_t c = 0; c < n; ++c) {
        long ip = floor_int(val[c]);
        fr[c] = frac(val[c]);
        if (val[c] > cmax[c]) {
            r.ip[c] = kAbove;
            continue;
        }
        r.ip[c] = int(ip);
        if (fr[c] != 0) distinct.push_back(fr[c]);
    }
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (size_t c = 0; c < n; ++c) {
        if (r.ip[c] == kAbove || fr[c] == 0) continue;
        r.rank[c] = int(std::lower_bound(distinct.begin(), distinct.end(), fr[c]) - distinct.begin()) + 1;
    }
    return r;
}

bool time_successor(const Region& r, const std::vector<int>& cmax, int tick_clock, Region& out, Tick& tag) {
    size_t n = r.ip.size();
    out = r;
    bool has_zero = false;
    for (size_t c = 0; c < n; ++c)
        if (r.ip[c] != kAbove && r.rank[c] == 0) has_zero = true;
    bool z_flips = false;
    if (has_zero) {
        // every zero-fraction clock starts moving; it becomes the smallest fraction
        for (size_t c = 0; c < n; ++c) {
            if (r.ip[c] == kAbove) continue;
            if (r.rank[c] == 0) {
                if (int(c) == tick_clock) z_flips = true;
                if (r.ip[c] >= cmax[c]) {
                    out.ip[c] = kAbove;
                    out.rank[c] = 0;
                } else {
                    out.rank[c] = 1;
                }
            } else {
                out.rank[c] = r.rank[c] + 1;
            }
        }
    } else {
        int g = max_rank(r);
        if (g == 0) return false;
        for (size_t c = 0; c < n; ++c) {
            if (r.ip[c] == kAbove || r.rank[c] != g) continue;
            if (int(c) == tick_clock) z_flips = true;
            out.ip[c] = r.ip[c] + 1;
            out.rank[c] = 0;
        }
    }
    normalize(out);
    tag = z_flips ? Tick::One : Tick::ZeroPlus;
    return true;
}

bool satisfies(const Region& r, const Atom& a) {
    int ip = r.ip[a.clock];
    int b = a.bound;
    if (ip == kAbove) {
        // the value exceeds cmax >= b
        return a.rel == Rel::GE || a.rel == Rel::GT;
    }
    if (r.rank[a.clock] == 0) {
        switch (a.rel) {
            case Rel::LT: return ip < b;
            case Rel::LE: return ip <= b;
            case Rel::EQ: return ip == b;
            case Rel::GE: return ip >= b;
            case Rel::GT: return ip > b;
        }
    }
    // value in the open interval (ip, ip+1)
    switch (a.rel) {
        case Rel::LT:
        case Rel::LE: return ip + 1 <= b;
        case Rel::EQ: return false;
        case Rel::GE:
        case Rel::GT: return ip >= b;
    }
    return false;
}

bool satisfies(const Region& r, const Constraint& c) {
    for (const auto& a : c)
        if (!satisfies(r, a)) return false;
    return true;
}

Region apply_resets(const Region& r, const std::vector<int>& resets, int dst) {
    Region out = r;
    out.loc = dst;
    for (int c : resets) {
        out.ip[c] = 0;
        out.rank[c] = 0;
    }
    normalize(out);
    return out;
}

bool is_open(const Region& r) {
    for (size_t c = 0; c < r.ip.size(); ++c)
        if (r.ip[c] != kAbove && r.rank[c] == 0) return false;
    return true;
}

std::vector<Rational> representative(const Region& r, const std::vector<int>& cmax) {
    int g = max_rank(r);
    std::vector<Rational> v(r.ip.size());
    for (size_t c = 0; c < r.ip.size(); ++c) {
        if (r.ip[c] == kAbove)
            v[c] = Rational(2 * cmax[c] + 3, 2);
        else
            v[c] = Rational(r.ip[c]) + Rational(r.rank[c], g + 1);
        v[c].canonicalize();
    }
    return v;
}

// ============================================================================

RegionSpace::RegionSpace(TimedAutomaton prepared) : ta_(std::move(prepared)) {
    cmax_ = compute_cmax(ta_);
}

RegionId RegionSpace::intern(const Region& r) {
    auto it = index_.find(r);
    if (it != index_.end()) return it->second;
    RegionId id = RegionId(regions_.size());
    regions_.push_back(r);
    index_.emplace(r, id);
    delay_memo_.emplace_back();
    disc_memo_.emplace_back();
    delay_done_.push_back(0);
    disc_done_.push_back(0);
    return id;
}

RegionId RegionSpace::initial() {
    return of(ta_.init, std::vector<Rational>(ta_.clocks.size(), Rational(0)));
}

const std::vector<RegionTrans>& RegionSpace::delays(RegionId id) {
    if (delay_done_[id]) return delay_memo_[id];
    std::vector<RegionTrans> out;
    Region r = regions_[id];
    const auto& inv = ta_.locations[r.loc].invariant;
    if (satisfies(r, inv)) {
        Region s;
        Tick tag;
        if (time_successor(r, cmax_, ta_.tick_clock, s, tag) && satisfies(s, inv)) {
            RegionId sid = intern(s);
            out.push_back({tag, kSilent, -1, sid});
        }
        if (is_open(r)) out.push_back({Tick::ZeroPlus, kSilent, -1, id});
    }
    std::sort(out.begin(), out.end(), [](const RegionTrans& a, const RegionTrans& b) {
        return std::tie(a.tick, a.dst) < std::tie(b.tick, b.dst);
    });
    delay_done_[id] = 1;
    delay_memo_[id] = std::move(out);
    return delay_memo_[id];
}

const std::vector<RegionTrans>& RegionSpace::discretes(RegionId id) {
    if (disc_done_[id]) return disc_memo_[id];
    std::vector<RegionTrans> out;
    Region r = regions_[id];
    for (size_t i = 0; i < ta_.edges.size(); ++i) {
        const Edge& e = ta_.edges[i];
        if (e.src != r.loc || !satisfies(r, e.guard)) continue;
        Region t = apply_resets(r, e.resets, e.dst);
        if (!satisfies(t, ta_.locations[e.dst].invariant)) continue;
        RegionId tid = intern(t);
        out.push_back({Tick::Zero, e.action, int(i), tid});
    }
    disc_done_[id] = 1;
    disc_memo_[id] = std::move(out);
    return disc_memo_[id];
}

std::string RegionSpace::to_string(RegionId id) const {
    std::vector<int> all(ta_.clocks.size());
    for (size_t c = 0; c < all.size(); ++c) all[c] = int(c);
    return to_string(id, all);
}

std::string RegionSpace::to_string(RegionId id, const std::vector<int>& clocks) const {
    const Region& r = regions_[id];
    std::string s = "(" + ta_.locations[r.loc].name;
    for (int c : clocks) {
        s += ", " + ta_.clocks[c];
        if (r.ip[c] == kAbove)
            s += ">" + std::to_string(cmax_[c]);
        else if (r.rank[c] == 0)
            s += "=" + std::to_string(r.ip[c]);
        else
            s += " in (" + std::to_string(r.ip[c]) + "," + std::to_string(r.ip[c] + 1) + ")";
    }
    // fractional ordering among the listed clocks
    std::map<int, std::vector<std::string>> groups;
    for (int c : clocks)
        if (r.ip[c] != kAbove && r.rank[c] > 0) groups[r.rank[c]].push_back(ta_.clocks[c]);
    if (groups.size() > 1 || (groups.size() == 1 && groups.begin()->second.size() > 1)) {
        s += " | ";
        bool first = true;
        for (const auto& [rank, names] : groups) {
            if (!first) s += " < ";
            first = false;
            for (size_t i = 0; i < names.size(); ++i) s += (i ? "~" : "") + names[i];
        }
    }
    return s + ")";
}

}  // namespace etopaq

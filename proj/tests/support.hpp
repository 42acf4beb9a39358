#pragma once
// shared helpers for the unit, property and acceptance tests

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "etopaq/game.hpp"
#include "etopaq/io.hpp"
#include "etopaq/minsky.hpp"

#ifndef ETOPAQ_FIXTURES
#error "ETOPAQ_FIXTURES must point at the fixtures directory"
#endif

namespace etopaq::testing {

inline std::string fixture_path(const std::string& name) { return std::string(ETOPAQ_FIXTURES) + "/" + name; }

inline TimedAutomaton fixture(const std::string& name) { return load_ta(fixture_path(name + ".ta")); }

inline const std::vector<std::string>& automaton_fixtures() {
    static const std::vector<std::string> names = {"ta1", "ta_opaque", "ta_opaque2", "ta_counterex", "t2", "t3"};
    return names;
}

// the automaton plus its region and belief spaces
struct Setup {
    TimedAutomaton ta;
    std::unique_ptr<RegionSpace> rs;
    std::unique_ptr<BeliefSpace> bs;
    explicit Setup(TimedAutomaton a) : ta(std::move(a)) {
        rs = std::make_unique<RegionSpace>(prepare(ta));
        bs = std::make_unique<BeliefSpace>(*rs);
    }
    explicit Setup(const std::string& name) : Setup(fixture(name)) {}
    const TimedAutomaton& prepared() const { return rs->ta(); }
};

inline MetaStrategy msf(const TimedAutomaton& ta, const std::string& name) {
    return load_msf(ta, fixture_path(name + ".msf"));
}

inline Rational q(const std::string& s) { return parse_rational(s); }

// ============================================================================
// region equivalence, from its three textual conditions (pairwise and direct)

inline bool equivalent(const std::vector<Rational>& v, const std::vector<Rational>& w, const std::vector<int>& cmax) {
    size_t n = v.size();
    for (size_t i = 0; i < n; ++i) {
        bool vi = v[i] > cmax[i], wi = w[i] > cmax[i];
        if (vi != wi) return false;
        if (vi) continue;
        if (floor_int(v[i]) != floor_int(w[i])) return false;
        if ((frac(v[i]) == 0) != (frac(w[i]) == 0)) return false;
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (v[i] > cmax[i] || v[j] > cmax[j]) continue;
            if ((frac(v[i]) <= frac(v[j])) != (frac(w[i]) <= frac(w[j]))) return false;
        }
    return true;
}

inline std::vector<Rational> random_valuation(std::mt19937& rng, const std::vector<int>& cmax) {
    // a small denominator so that collisions of fractional parts are frequent
    std::vector<Rational> v;
    for (int c : cmax) {
        Rational r(std::uniform_int_distribution<int>(0, 4 * (c + 2))(rng), 4);
        r.canonicalize();
        v.push_back(r);
    }
    return v;
}

// ============================================================================
// random small automata and meta-strategies

inline TimedAutomaton random_ta(std::mt19937& rng) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    TimedAutomaton ta;
    int nclocks = pick(1, 2);
    for (int c = 0; c < nclocks; ++c) ta.clocks.push_back(c == 0 ? "x" : "y");
    ta.actions = {{"a", true}, {"b", true}, {"u", false}};
    int nloc = pick(3, 4);
    std::vector<std::string> names = {"l0", "lpriv", "lf", "l1"};
    for (int l = 0; l < nloc; ++l) ta.locations.push_back({names[size_t(l)], {}, false});
    ta.init = 0;
    ta.priv = 1;
    ta.finals = {2};
    auto atom = [&](bool invariant) {
        Atom a;
        a.clock = pick(0, nclocks - 1);
        static const Rel rels[] = {Rel::LT, Rel::LE, Rel::EQ, Rel::GE, Rel::GT};
        a.rel = invariant ? (pick(0, 1) ? Rel::LE : Rel::LT) : rels[pick(0, 4)];
        a.bound = pick(invariant && a.rel == Rel::LT ? 1 : 0, 2);
        return a;
    };
    for (int l = 0; l < nloc; ++l)
        if (l != 2 && pick(0, 3) == 0) ta.locations[size_t(l)].invariant.push_back(atom(true));
    int nedges = pick(2, 6);
    std::vector<int> sources;
    for (int l = 0; l < nloc; ++l)
        if (l != 2) sources.push_back(l);
    for (int i = 0; i < nedges; ++i) {
        Edge e;
        e.src = sources[size_t(pick(0, int(sources.size()) - 1))];
        e.dst = pick(0, nloc - 1);
        if (i == 0) e = Edge{0, {}, 2, {}, 1};  // l0 -> lpriv
        if (i == 1) e.src = 1, e.dst = 2;       // lpriv -> lf
        e.action = pick(-1, 2);
        int g = pick(0, 2);
        for (int k = 0; k < g; ++k) e.guard.push_back(atom(false));
        for (int c = 0; c < nclocks; ++c)
            if (pick(0, 3) == 0) e.resets.push_back(c);
        ta.edges.push_back(e);
    }
    return make_finals_urgent(ta);
}

inline MetaStrategy random_phi(const TimedAutomaton& ta, std::mt19937& rng) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto subsets = ta.controllable_subsets();
    auto mask = [&] { return subsets[size_t(pick(0, int(subsets.size()) - 1))]; };
    auto unit = [&] {
        UnitPlan u;
        u.at_point = mask();
        u.in_interval.clear();
        int m = pick(1, 2);
        for (int j = 0; j < m; ++j) u.in_interval.push_back(mask());
        return u;
    };
    MetaStrategy phi;
    int s = pick(0, 2), l = pick(1, 2);
    for (int i = 0; i < s; ++i) phi.stem.push_back(unit());
    for (int i = 0; i < l; ++i) phi.loop.push_back(unit());
    return phi;
}

// ============================================================================
// admission, transcribed case by case (recursion over run prefixes)

inline bool direct_admits(const TimedAutomaton& ta, const Run& run, size_t n, const std::vector<Choice>& v) {
    if (n == 0) return v.size() == 1 && v[0].tick == Tick::Zero;
    if (v.empty()) return false;
    auto states = replay(ta, Run(run.begin(), run.begin() + long(n)));
    const Step& st = run[n - 1];
    int act = ta.edges[size_t(st.edge)].action;
    const Rational& d = st.delay;
    int z = ta.tick_clock;
    bool fz_before = frac(states[n - 1].val[size_t(z)]) != 0;
    bool fz_after = frac(states[n - 1].val[size_t(z)] + d) != 0;
    auto prefix = [&](size_t len) { return std::vector<Choice>(v.begin(), v.begin() + long(len)); };
    // case 1
    if (d == 0) return ta.action_allowed(act, v.back().enabled) && direct_admits(ta, run, n - 1, v);
    if (!ta.action_allowed(act, v.back().enabled)) return false;
    // v = v' (1,E0) (0+,E1) ... (0+,E_{m-1}) (dag_m, E_m)
    for (size_t p = 0; p < v.size(); ++p) {
        if (v[p].tick != Tick::One) continue;
        size_t m = v.size() - 1 - p;
        bool middle = true;
        for (size_t j = p + 1; j + 1 < v.size(); ++j) middle = middle && v[j].tick == Tick::ZeroPlus;
        if (!middle) continue;
        Tick dag = v.back().tick;
        if (d < 1) {
            // (a) both ends strictly inside a unit
            if (fz_before && fz_after && (m == 0 || dag == Tick::ZeroPlus))
                for (size_t i = 0; i <= m; ++i)
                    if (direct_admits(ta, run, n - 1, prefix(p + 1 + i))) return true;
            // (b) start on an integer
            if (!fz_before && (m == 0 || dag == Tick::ZeroPlus) && direct_admits(ta, run, n - 1, prefix(p)))
                return true;
            // (c) end on an integer
            if (!fz_after && m >= 1 && dag == Tick::One)
                for (size_t i = 0; i + 1 <= m; ++i)
                    if (direct_admits(ta, run, n - 1, prefix(p + 1 + i))) return true;
        } else if (d == 1) {
            // case 3: v = v' (1,E0) (0+,E1) ... (0+,Em) (1,E)
            if (m >= 1 && dag == Tick::One && direct_admits(ta, run, n - 1, prefix(p))) return true;
        }
    }
    return false;
}

// every label sequence of length 1..len over the automaton's alphabet (tick 0 first)
inline std::vector<std::vector<Choice>> all_sequences(const TimedAutomaton& ta, size_t len) {
    auto subsets = ta.controllable_subsets();
    std::vector<std::vector<Choice>> out, frontier;
    for (ActionMask e : subsets) frontier.push_back({{Tick::Zero, e}});
    for (size_t l = 1; l <= len; ++l) {
        out.insert(out.end(), frontier.begin(), frontier.end());
        if (l == len) break;
        std::vector<std::vector<Choice>> next;
        for (const auto& v : frontier)
            for (Tick t : {Tick::ZeroPlus, Tick::One})
                for (ActionMask e : subsets) {
                    auto w = v;
                    w.push_back({t, e});
                    next.push_back(std::move(w));
                }
        frontier = std::move(next);
    }
    return out;
}

// ============================================================================
// belief-automaton figures

struct FigureEdge {
    std::string src;
    std::string label;  // "1, {a}"
    std::string dst;
};

inline std::string edge_label(const TimedAutomaton& ta, Tick t, ActionMask e) {
    return std::string(tick_str(t)) + ", " + ta.mask_str(e);
}

// edges of the explored belief automaton with the empty belief dropped
inline std::vector<BeliefEdge> drawn_edges(BeliefSpace& bs, const BeliefGraph& g) {
    std::vector<BeliefEdge> out;
    for (const auto& e : g.edges)
        if (!bs.members(e.dst).empty()) out.push_back(e);
    return out;
}

// rooted isomorphism of deterministic labelled graphs; on success `names`
// maps every drawn belief to its figure name
inline bool isomorphic_to_figure(BeliefSpace& bs, const BeliefGraph& g, const std::vector<FigureEdge>& fig,
                                 std::map<BeliefId, std::string>& names, std::string& why) {
    const auto& ta = bs.ta();
    std::map<BeliefId, std::map<std::string, BeliefId>> ours;
    for (const auto& e : drawn_edges(bs, g)) ours[e.src][edge_label(ta, e.tick, e.enabled)] = e.dst;
    std::map<std::string, std::map<std::string, std::string>> theirs;
    std::set<std::string> fig_states{"bot"};
    for (const auto& e : fig) {
        if (theirs[e.src].count(e.label)) {
            why = "figure is not deterministic at " + e.src;
            return false;
        }
        theirs[e.src][e.label] = e.dst;
        fig_states.insert(e.src);
        fig_states.insert(e.dst);
    }
    names.clear();
    std::map<std::string, BeliefId> back;
    std::deque<BeliefId> queue{kBottom};
    names[kBottom] = "bot";
    back["bot"] = kBottom;
    while (!queue.empty()) {
        BeliefId b = queue.front();
        queue.pop_front();
        const auto& mine = ours[b];
        const auto& want = theirs[names[b]];
        if (mine.size() != want.size()) {
            why = names[b] + ": " + std::to_string(mine.size()) + " edges, figure has " + std::to_string(want.size());
            return false;
        }
        for (const auto& [lbl, d] : mine) {
            auto it = want.find(lbl);
            if (it == want.end()) {
                why = names[b] + ": label (" + lbl + ") not in figure";
                return false;
            }
            auto nb = names.find(d);
            auto bb = back.find(it->second);
            if (nb == names.end() && bb == back.end()) {
                names[d] = it->second;
                back[it->second] = d;
                queue.push_back(d);
            } else if (nb == names.end() || bb == back.end() || nb->second != it->second) {
                why = names[b] + " --(" + lbl + ")--> mismatch at " + it->second;
                return false;
            }
        }
    }
    if (names.size() != fig_states.size()) {
        why = "reached " + std::to_string(names.size()) + " states, figure has " + std::to_string(fig_states.size());
        return false;
    }
    return true;
}

// belief automaton of TA_opaque as drawn (b01 = b(0,1))
inline std::vector<FigureEdge> opaque_figure() {
    return {
        {"bot", "0, {}", "b0'"},   {"bot", "0, {a}", "b0"},
        {"b0", "1, {a}", "b01"},   {"b0", "1, {}", "b01'"},   {"b0'", "1, {a}", "b01"},  {"b0'", "1, {}", "b01'"},
        {"b01", "1, {a}", "b1"},   {"b01", "1, {}", "b1'"},   {"b01", "0+, {}", "b01'"}, {"b01", "0+, {a}", "b01"},
        {"b01'", "1, {a}", "b1"},  {"b01'", "1, {}", "b1'"},  {"b01'", "0+, {a}", "b01"}, {"b01'", "0+, {}", "b01'"},
        {"b1", "1, {a}", "b01"},   {"b1", "1, {}", "b01'"},   {"b1'", "1, {a}", "b01"},  {"b1'", "1, {}", "b01'"},
    };
}

// belief automaton of TA'_opaque as drawn: points b0..b3 and intervals
// b01, b12, b23, each with a primed twin; b3 loops back into b23
inline std::vector<FigureEdge> opaque2_figure() {
    std::vector<FigureEdge> f = {{"bot", "0, {}", "b0'"}, {"bot", "0, {a}", "b0"}};
    const std::vector<std::string> pts = {"b0", "b1", "b2", "b3"};
    const std::vector<std::string> ivs = {"b01", "b12", "b23"};
    for (int k = 0; k < 4; ++k) {
        std::string iv = ivs[size_t(std::min(k, 2))];
        for (const std::string p : {pts[size_t(k)], pts[size_t(k)] + "'"}) {
            f.push_back({p, "1, {a}", iv});
            f.push_back({p, "1, {}", iv + "'"});
        }
    }
    for (int k = 0; k < 3; ++k) {
        const std::string& iv = ivs[size_t(k)];
        const std::string& nx = pts[size_t(k + 1)];
        for (const std::string s : {iv, iv + "'"}) {
            f.push_back({s, "1, {a}", nx});
            f.push_back({s, "1, {}", nx + "'"});
        }
        f.push_back({iv, "0+, {}", iv + "'"});
        f.push_back({iv + "'", "0+, {a}", iv});
        f.push_back({iv, "0+, {a}", iv});
        f.push_back({iv + "'", "0+, {}", iv + "'"});
    }
    return f;
}

// projection of a belief onto the automaton's own clocks (no z / xf)
inline std::set<std::string> projected(BeliefSpace& bs, BeliefId b, const std::vector<std::string>& clocks) {
    std::vector<int> ids;
    for (const auto& c : clocks) ids.push_back(bs.ta().find_clock(c));
    std::set<std::string> out;
    for (RegionId r : bs.members(b)) out.insert(bs.regions().to_string(r, ids));
    return out;
}

// ============================================================================
// Minsky sample machines

inline const std::vector<std::pair<std::string, std::string>>& sample_machines() {
    static const std::vector<std::pair<std::string, std::string>> m = {
        {"halt", "HALT\n"},
        {"inc", "INC C1\nHALT\n"},
        {"ifz_loop", "INC C1\nDEC C1\nIFZ C1 3 1\nHALT\n"},
    };
    return m;
}

}  // namespace etopaq::testing

#include "etopaq/ta.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace etopaq {

const char* rel_str(Rel r) {
    switch (r) {
        case Rel::LT: return "<";
        case Rel::LE: return "<=";
        case Rel::EQ: return "=";
        case Rel::GE: return ">=";
        case Rel::GT: return ">";
    }
    return "?";
}

bool TimedAutomaton::is_final(int loc) const {
    return std::binary_search(finals.begin(), finals.end(), loc);
}

int TimedAutomaton::find_location(const std::string& name) const {
    for (size_t i = 0; i < locations.size(); ++i)
        if (locations[i].name == name) return int(i);
    return -1;
}

int TimedAutomaton::find_clock(const std::string& name) const {
    for (size_t i = 0; i < clocks.size(); ++i)
        if (clocks[i] == name) return int(i);
    return -1;
}

int TimedAutomaton::find_action(const std::string& name) const {
    for (size_t i = 0; i < actions.size(); ++i)
        if (actions[i].name == name) return int(i);
    return -1;
}

int TimedAutomaton::location_index(const std::string& name) const {
    int i = find_location(name);
    if (i < 0) throw std::runtime_error("unknown location '" + name + "'");
    return i;
}

int TimedAutomaton::action_index(const std::string& name) const {
    int i = find_action(name);
    if (i < 0) throw std::runtime_error("unknown action '" + name + "'");
    return i;
}

ActionMask TimedAutomaton::controllable_mask() const {
    ActionMask m = 0;
    for (size_t i = 0; i < actions.size(); ++i)
        if (actions[i].controllable) m |= ActionMask(1) << i;
    return m;
}

bool TimedAutomaton::action_allowed(int action, ActionMask enabled) const {
    if (action == kSilent) return true;
    if (!actions[action].controllable) return true;
    return (enabled >> action) & 1;
}

std::string TimedAutomaton::action_name(int action) const {
    return action == kSilent ? std::string("~") : actions[action].name;
}

std::string TimedAutomaton::mask_str(ActionMask m) const {
    std::string s = "{";
    bool first = true;
    for (size_t i = 0; i < actions.size(); ++i) {
        if (!((m >> i) & 1)) continue;
        if (!first) s += ",";
        s += actions[i].name;
        first = false;
    }
    return s + "}";
}

ActionMask TimedAutomaton::mask_of(const std::vector<std::string>& names) const {
    ActionMask m = 0;
    for (const auto& n : names) {
        int a = action_index(n);
        if (!actions[a].controllable)
            throw std::runtime_error("action '" + n + "' is not controllable");
        m |= ActionMask(1) << a;
    }
    return m;
}

std::vector<ActionMask> TimedAutomaton::controllable_subsets() const {
    std::vector<int> bits;
    for (size_t i = 0; i < actions.size(); ++i)
        if (actions[i].controllable) bits.push_back(int(i));
    if (bits.size() > 20) throw std::runtime_error("too many controllable actions to enumerate");
    std::vector<ActionMask> out;
    for (std::uint64_t s = 0; s < (std::uint64_t(1) << bits.size()); ++s) {
        ActionMask m = 0;
        for (size_t j = 0; j < bits.size(); ++j)
            if ((s >> j) & 1) m |= ActionMask(1) << bits[j];
        out.push_back(m);
    }
    return out;
}

// ============================================================================
// validation

namespace {

bool is_tick_loop(const TimedAutomaton& ta, const Edge& e) {
    if (ta.tick_clock < 0 || e.src != e.dst || e.action != kSilent) return false;
    return e.resets == std::vector<int>{ta.tick_clock} && e.guard.size() == 1 &&
           e.guard[0] == Atom{ta.tick_clock, Rel::EQ, 1};
}

bool pins_zero(const Constraint& inv, int clock) {
    for (const auto& a : inv)
        if (a.clock == clock && a.bound == 0 && (a.rel == Rel::EQ || a.rel == Rel::LE)) return true;
    return false;
}

// a clock reset on every edge entering a final and pinned to 0 in every final
int urgency_witness(const TimedAutomaton& ta) {
    for (size_t x = 0; x < ta.clocks.size(); ++x) {
        if (int(x) == ta.tick_clock) continue;
        bool ok = true;
        for (int f : ta.finals)
            if (!pins_zero(ta.locations[f].invariant, int(x))) ok = false;
        for (const auto& e : ta.edges) {
            if (!ok) break;
            if (!ta.is_final(e.dst) || is_tick_loop(ta, e)) continue;
            if (std::find(e.resets.begin(), e.resets.end(), int(x)) == e.resets.end()) ok = false;
        }
        if (ok) return int(x);
    }
    return -1;
}

std::string fresh_name(const std::vector<std::string>& taken, const std::string& base) {
    auto used = [&](const std::string& n) {
        return std::find(taken.begin(), taken.end(), n) != taken.end();
    };
    if (!used(base)) return base;
    for (int i = 1;; ++i)
        if (!used(base + std::to_string(i))) return base + std::to_string(i);
}

}  // namespace

std::vector<Violation> validate(const TimedAutomaton& ta) {
    std::vector<Violation> out;
    auto bad = [&](std::string rule, std::string where, std::string msg) {
        out.push_back({std::move(rule), std::move(where), std::move(msg)});
    };
    int nl = int(ta.locations.size()), nc = int(ta.clocks.size()), na = int(ta.actions.size());

    auto dup_names = [&](const std::vector<std::string>& names, const char* what) {
        std::set<std::string> seen;
        for (const auto& n : names)
            if (!seen.insert(n).second) bad("duplicate-name", what, "name '" + n + "' declared twice");
    };
    dup_names(ta.clocks, "clocks");
    {
        std::vector<std::string> ln, an;
        for (const auto& l : ta.locations) ln.push_back(l.name);
        for (const auto& a : ta.actions) an.push_back(a.name);
        dup_names(ln, "locations");
        dup_names(an, "actions");
    }
    if (na > 64) bad("bad-reference", "actions", "at most 64 actions are supported");

    auto check_constraint = [&](const Constraint& c, const std::string& where) {
        for (const auto& a : c) {
            if (a.clock < 0 || a.clock >= nc) bad("bad-reference", where, "unknown clock in constraint");
            if (a.bound < 0) bad("negative-bound", where, "negative constant in constraint");
        }
    };
    if (ta.init < 0 || ta.init >= nl) bad("bad-reference", "init", "initial location out of range");
    if (ta.priv < 0 || ta.priv >= nl) bad("bad-reference", "private", "private location missing");
    for (int f : ta.finals)
        if (f < 0 || f >= nl) bad("bad-reference", "finals", "final location out of range");
    for (int i = 0; i < nl; ++i)
        check_constraint(ta.locations[i].invariant, "location " + ta.locations[i].name);
    for (size_t i = 0; i < ta.edges.size(); ++i) {
        const auto& e = ta.edges[i];
        std::string where = "edge " + std::to_string(i);
        if (e.src < 0 || e.src >= nl || e.dst < 0 || e.dst >= nl)
            bad("bad-reference", where, "edge endpoint out of range");
        if (e.action != kSilent && (e.action < 0 || e.action >= na))
            bad("bad-reference", where, "unknown action");
        for (int r : e.resets)
            if (r < 0 || r >= nc) bad("bad-reference", where, "unknown reset clock");
        check_constraint(e.guard, where);
    }
    if (!out.empty()) return out;

    if (ta.is_final(ta.priv))
        bad("private-is-final", "location " + ta.locations[ta.priv].name,
            "the private location must not be final");
    for (size_t i = 0; i < ta.edges.size(); ++i) {
        const auto& e = ta.edges[i];
        if (ta.is_final(e.src) && !is_tick_loop(ta, e))
            bad("final-has-outgoing", "edge " + std::to_string(i),
                "final location " + ta.locations[e.src].name + " has an outgoing edge");
    }
    if (!ta.finals.empty() && urgency_witness(ta) < 0)
        bad("final-not-urgent", "finals",
            "no clock is reset on every edge into a final and pinned to 0 there");
    return out;
}

TimedAutomaton make_finals_urgent(const TimedAutomaton& ta) {
    if (ta.finals.empty() || urgency_witness(ta) >= 0) return ta;
    TimedAutomaton out = ta;
    int xf = int(out.clocks.size());
    out.clocks.push_back(fresh_name(out.clocks, "xf"));
    for (auto& e : out.edges)
        if (out.is_final(e.dst) && !is_tick_loop(out, e)) e.resets.push_back(xf);
    for (int f : out.finals) out.locations[f].invariant.push_back({xf, Rel::EQ, 0});
    return out;
}

TimedAutomaton add_tick_clock(const TimedAutomaton& ta) {
    if (ta.tick_clock >= 0) throw std::runtime_error("automaton already carries a tick clock");
    TimedAutomaton out = ta;
    int z = int(out.clocks.size());
    out.clocks.push_back(fresh_name(out.clocks, "z"));
    out.tick_clock = z;
    for (size_t l = 0; l < out.locations.size(); ++l) {
        out.locations[l].invariant.push_back({z, Rel::LE, 1});
        Edge loop;
        loop.src = loop.dst = int(l);
        loop.guard = {{z, Rel::EQ, 1}};
        loop.action = kSilent;
        loop.resets = {z};
        loop.origin = -1;
        out.edges.push_back(loop);
    }
    return out;
}

TimedAutomaton duplicate(const TimedAutomaton& ta) {
    if (ta.duplicated) throw std::runtime_error("automaton is already duplicated");
    if (ta.priv < 0) throw std::runtime_error("automaton has no private location");
    TimedAutomaton out;
    out.clocks = ta.clocks;
    out.actions = ta.actions;
    out.tick_clock = ta.tick_clock;
    out.duplicated = true;
    int n = int(ta.locations.size());
    out.locations = ta.locations;
    for (auto& l : out.locations) l.secret = false;
    out.locations[ta.priv].secret = true;
    for (int l = 0; l < n; ++l) {
        Location p = ta.locations[l];
        p.name += "'";
        p.secret = true;
        out.locations.push_back(p);
    }
    auto primed = [n](int l) { return l + n; };
    out.init = ta.init;
    out.priv = ta.priv;
    out.finals = ta.finals;
    for (int f : ta.finals) out.finals.push_back(primed(f));
    std::sort(out.finals.begin(), out.finals.end());

    for (size_t i = 0; i < ta.edges.size(); ++i) {
        if (ta.edges[i].src == ta.priv) continue;
        Edge e = ta.edges[i];
        e.origin = int(i);
        out.edges.push_back(e);
    }
    for (size_t i = 0; i < ta.edges.size(); ++i) {
        Edge e = ta.edges[i];
        e.src = primed(e.src);
        e.dst = primed(e.dst);
        e.origin = int(i);
        out.edges.push_back(e);
    }
    for (size_t i = 0; i < ta.edges.size(); ++i) {
        if (ta.edges[i].src != ta.priv) continue;
        Edge e = ta.edges[i];
        e.dst = primed(e.dst);
        e.origin = int(i);
        out.edges.push_back(e);
    }
    return out;
}

TimedAutomaton prepare(const TimedAutomaton& ta) { return add_tick_clock(duplicate(ta)); }

// ============================================================================
// concrete semantics

bool holds(const Atom& a, const Rational& v) {
    Rational b(a.bound);
    switch (a.rel) {
        case Rel::LT: return v < b;
        case Rel::LE: return v <= b;
        case Rel::EQ: return v == b;
        case Rel::GE: return v >= b;
        case Rel::GT: return v > b;
    }
    return false;
}

std::optional<Atom> first_violation(const Constraint& c, const std::vector<Rational>& val) {
    for (const auto& a : c)
        if (!holds(a, val[a.clock])) return a;
    return std::nullopt;
}

namespace {

std::string atom_text(const TimedAutomaton& ta, const Atom& a) {
    return ta.clocks[a.clock] + " " + rel_str(a.rel) + " " + std::to_string(a.bound);
}

}  // namespace

State initial_state(const TimedAutomaton& ta) {
    State s;
    s.loc = ta.init;
    s.val.assign(ta.clocks.size(), Rational(0));
    s.time = 0;
    if (auto v = first_violation(ta.locations[s.loc].invariant, s.val))
        throw std::runtime_error("initial state violates invariant " + atom_text(ta, *v));
    return s;
}

State step_delay(const TimedAutomaton& ta, const State& s, const Rational& d) {
    if (d < 0) throw std::runtime_error("negative delay");
    const auto& inv = ta.locations[s.loc].invariant;
    if (auto v = first_violation(inv, s.val))
        throw std::runtime_error("invariant " + atom_text(ta, *v) + " violated before delay");
    State t = s;
    for (auto& x : t.val) x += d;
    t.time += d;
    // invariants are convex: checking both ends covers the whole delay
    if (auto v = first_violation(inv, t.val))
        throw std::runtime_error("invariant " + atom_text(ta, *v) + " violated after delay " +
                                 to_string(d) + " in " + ta.locations[s.loc].name);
    return t;
}

State step_discrete(const TimedAutomaton& ta, const State& s, int edge) {
    if (edge < 0 || edge >= int(ta.edges.size())) throw std::runtime_error("edge out of range");
    const Edge& e = ta.edges[edge];
    if (e.src != s.loc)
        throw std::runtime_error("edge " + std::to_string(edge) + " does not leave " +
                                 ta.locations[s.loc].name);
    if (auto v = first_violation(e.guard, s.val))
        throw std::runtime_error("guard " + atom_text(ta, *v) + " of edge " + std::to_string(edge) +
                                 " not satisfied");
    State t = s;
    for (int r : e.resets) t.val[r] = 0;
    t.loc = e.dst;
    if (auto v = first_violation(ta.locations[t.loc].invariant, t.val))
        throw std::runtime_error("target invariant " + atom_text(ta, *v) + " violated by edge " +
                                 std::to_string(edge));
    return t;
}

std::vector<State> replay(const TimedAutomaton& ta, const Run& run) {
    std::vector<State> out{initial_state(ta)};
    for (const auto& st : run) {
        State mid = step_delay(ta, out.back(), st.delay);
        out.push_back(step_discrete(ta, mid, st.edge));
    }
    return out;
}

const char* run_class_str(RunClass c) {
    switch (c) {
        case RunClass::Private: return "private";
        case RunClass::Public: return "public";
        case RunClass::Neither: return "neither";
    }
    return "?";
}

Classification classify_run(const TimedAutomaton& dup, const Run& run) {
    auto states = replay(dup, run);
    Classification c;
    for (const auto& st : run) c.duration += st.delay;
    int last = states.back().loc;
    if (!dup.is_final(last)) return c;
    bool secret;
    if (dup.duplicated) {
        secret = dup.locations[last].secret;
    } else {
        secret = false;
        for (const auto& s : states)
            if (s.loc == dup.priv) secret = true;
    }
    c.cls = secret ? RunClass::Private : RunClass::Public;
    return c;
}

Run lift_run(const TimedAutomaton& prepared, const Run& original) {
    if (prepared.tick_clock < 0 || !prepared.duplicated)
        throw std::runtime_error("lift_run needs a duplicated, tick-augmented automaton");
    std::map<int, int> loop_of;
    std::map<std::pair<int, int>, int> copy_of;  // (origin, src) -> edge
    for (size_t i = 0; i < prepared.edges.size(); ++i) {
        const auto& e = prepared.edges[i];
        if (e.origin < 0)
            loop_of[e.src] = int(i);
        else
            copy_of[{e.origin, e.src}] = int(i);
    }
    Run out;
    int loc = prepared.init;
    Rational z = 0;
    for (const auto& st : original) {
        Rational d = st.delay;
        while (z + d > 1) {
            Rational part = 1 - z;
            out.push_back({part, loop_of.at(loc)});
            d -= part;
            z = 0;
        }
        z += d;
        auto it = copy_of.find({st.edge, loc});
        if (it == copy_of.end())
            throw std::runtime_error("edge " + std::to_string(st.edge) + " cannot be taken from " +
                                     prepared.locations[loc].name);
        out.push_back({d, it->second});
        loc = prepared.edges[it->second].dst;
        if (std::find(prepared.edges[it->second].resets.begin(), prepared.edges[it->second].resets.end(),
                      prepared.tick_clock) != prepared.edges[it->second].resets.end())
            z = 0;
    }
    return out;
}

Run project_run(const TimedAutomaton& prepared, const Run& lifted) {
    Run out;
    Rational pending = 0;
    for (const auto& st : lifted) {
        const auto& e = prepared.edges.at(st.edge);
        pending += st.delay;
        if (e.origin < 0) continue;
        out.push_back({pending, e.origin});
        pending = 0;
    }
    return out;
}

}  // namespace etopaq

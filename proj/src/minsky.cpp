#include "etopaq/minsky.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace etopaq {

void MinskyMachine::check() const {
    if (commands.empty() || commands.back().op != Op::Halt) throw std::runtime_error("machine must end with HALT");
    int n = int(commands.size());
    for (int i = 0; i < n; ++i) {
        const auto& c = commands[i];
        if (c.op == Op::Halt) continue;
        if (c.counter != 1 && c.counter != 2) throw std::runtime_error("counter must be C1 or C2");
        if (c.op == Op::IfZero && (c.goto_zero < 0 || c.goto_zero >= n || c.goto_nonzero < 0 || c.goto_nonzero >= n))
            throw std::runtime_error("IFZ target out of range in command " + std::to_string(i));
    }
}

MinskyMachine parse_machine(const std::string& text) {
    MinskyMachine m;
    std::istringstream in(text);
    int lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        std::istringstream ls(line);
        std::vector<std::string> w;
        for (std::string t; ls >> t;) w.push_back(t);
        if (w.empty()) continue;
        auto fail = [&](const std::string& msg) {
            return std::runtime_error("line " + std::to_string(lineno) + ": " + msg);
        };
        auto counter = [&](const std::string& s) {
            if (s == "C1") return 1;
            if (s == "C2") return 2;
            throw fail("unknown counter '" + s + "'");
        };
        auto target = [&](const std::string& s) {
            try {
                size_t pos = 0;
                int v = std::stoi(s, &pos);
                if (pos != s.size()) throw 0;
                return v;
            } catch (...) {
                throw fail("bad goto target '" + s + "'");
            }
        };
        Command c;
        if (w[0] == "INC" || w[0] == "DEC") {
            if (w.size() != 2) throw fail("usage: " + w[0] + " C1|C2");
            c.op = w[0] == "INC" ? Op::Inc : Op::Dec;
            c.counter = counter(w[1]);
        } else if (w[0] == "IFZ") {
            if (w.size() != 4) throw fail("usage: IFZ C1|C2 <zero> <nonzero>");
            c.op = Op::IfZero;
            c.counter = counter(w[1]);
            c.goto_zero = target(w[2]);
            c.goto_nonzero = target(w[3]);
        } else if (w[0] == "HALT") {
            if (w.size() != 1) throw fail("HALT takes no operand");
        } else {
            throw fail("unknown command '" + w[0] + "'");
        }
        m.commands.push_back(c);
    }
    m.check();
    return m;
}

// ============================================================================
// gadgets

namespace {

const std::vector<std::pair<std::string, bool>> kAlphabet = {
    {"u", false},     {"a_C1", true},   {"a_C2", true},  {"inc_C1", true}, {"inc_C2", true},
    {"dec_C1", true}, {"dec_C2", true}, {"eq0", true},   {"neq0", true},
};

struct Builder {
    TimedAutomaton ta;
    int x = 0;

    int loc(const std::string& name) {
        ta.locations.push_back({name, {}, false});
        return int(ta.locations.size()) - 1;
    }
    int act(const std::string& name) { return ta.action_index(name); }
    void edge(int src, int dst, const std::string& action, Constraint guard, bool reset) {
        Edge e;
        e.src = src;
        e.dst = dst;
        e.action = act(action);
        e.guard = std::move(guard);
        if (reset) e.resets = {x};
        ta.edges.push_back(e);
    }
    Constraint eq(int c) { return {{x, Rel::EQ, c}}; }
    Constraint window(int lo) { return {{x, Rel::GT, lo}, {x, Rel::LT, lo + 1}}; }
};

}  // namespace

TimedAutomaton encode(const MinskyMachine& m, bool raw) {
    m.check();
    Builder b;
    b.ta.clocks = {"x"};
    for (const auto& [n, c] : kAlphabet) b.ta.actions.push_back({n, c});
    int init = b.loc("init");
    int priv = b.loc("lpriv");
    int fin = b.loc("lf");
    b.ta.init = init;
    b.ta.priv = priv;
    b.ta.finals = {fin};
    b.edge(priv, fin, "u", b.eq(0), false);  // shared by every gadget

    // one action at a time
    int a_init = b.loc("1act.init");
    int a_e = b.loc("1act.e");
    std::vector<int> lv;
    for (const auto& [n, c] : kAlphabet) lv.push_back(b.loc("1act.v_" + n));
    for (size_t v = 0; v < kAlphabet.size(); ++v) b.edge(a_init, lv[v], kAlphabet[v].first, {}, true);
    for (size_t v = 0; v < kAlphabet.size(); ++v)
        for (size_t w = 0; w < kAlphabet.size(); ++w)
            if (v != w) b.edge(lv[v], a_e, kAlphabet[w].first, b.eq(0), false);
    b.edge(a_e, fin, "u", {}, false);

    // per-counter repetition gadgets
    int g_init[3], g_loc[3];
    for (int c = 1; c <= 2; ++c) {
        std::string C = "C" + std::to_string(c);
        g_init[c] = b.loc("G" + C + ".init");
        g_loc[c] = b.loc("G" + C + ".l");
        b.edge(g_init[c], g_init[c], "u", b.eq(3), true);
        b.edge(g_init[c], g_loc[c], "a_" + C, b.window(c - 1), true);
        b.edge(g_loc[c], priv, "u", b.eq(0), false);
        b.edge(g_loc[c], fin, "u", b.eq(3), false);
    }

    // commands
    int n = int(m.commands.size());
    std::vector<int> cinit(n);
    for (int i = 0; i < n; ++i) cinit[i] = b.loc("c" + std::to_string(i) + ".init");
    for (int i = 0; i < n; ++i) {
        const auto& cmd = m.commands[i];
        std::string p = "c" + std::to_string(i) + ".";
        std::string C = "C" + std::to_string(cmd.counter);
        int lo = cmd.counter - 1;  // window (lo, lo+1)
        int at = cmd.counter;      // instant closing the window
        switch (cmd.op) {
            case Op::Inc:
            case Op::Dec: {
                std::string a = (cmd.op == Op::Inc ? "inc_" : "dec_") + C;
                int l1 = b.loc(p + "l1"), l2 = b.loc(p + "l2"), l3 = b.loc(p + "l3");
                b.edge(cinit[i], cinit[i + 1], "u", b.eq(3), true);
                b.edge(cinit[i], l1, a, b.window(lo), false);
                b.edge(cinit[i], l2, a, b.window(lo), true);
                b.edge(cinit[i], fin, "u", b.eq(at), false);
                b.edge(l1, priv, "u", b.eq(at), true);
                if (cmd.op == Op::Inc)
                    b.edge(l2, fin, "u", b.eq(3), false);
                else
                    b.edge(l2, priv, "u", b.eq(0), false);
                b.edge(l2, l3, a, b.window(0), false);  // measured from the reset into l2
                b.edge(l3, fin, "u", {}, false);
                break;
            }
            case Op::IfZero: {
                int leq = b.loc(p + "eq"), leq2 = b.loc(p + "eq2"), lne = b.loc(p + "neq"), lne2 = b.loc(p + "neq2");
                b.edge(cinit[i], leq, "eq0", b.eq(0), false);
                b.edge(cinit[i], lne, "neq0", b.eq(0), false);
                b.edge(cinit[i], fin, "u", b.eq(at), false);
                b.edge(leq, cinit[cmd.goto_zero], "u", b.eq(3), true);
                b.edge(leq, priv, "u", b.eq(at), true);
                b.edge(leq, leq2, "a_" + C, b.window(lo), false);
                b.edge(leq2, fin, "u", {}, false);
                b.edge(lne, cinit[cmd.goto_nonzero], "u", b.eq(3), true);
                b.edge(lne, lne2, "a_" + C, b.window(lo), false);
                b.edge(lne2, priv, "u", b.eq(at), true);
                break;
            }
            case Op::Halt:
                b.edge(cinit[i], fin, "u", {}, false);
                break;
        }
    }

    for (int target : {a_init, g_init[1], g_init[2], cinit[0]}) b.edge(init, target, "u", b.eq(0), false);

    return raw ? b.ta : make_finals_urgent(b.ta);
}

// ============================================================================
// structural counts

namespace {

struct Counts {
    size_t locations = 0, edges = 0;
};

std::map<std::string, Counts> expected_by_gadget(const MinskyMachine& m) {
    std::map<std::string, Counts> e;
    e["init"] = {1, 4};
    e["shared"] = {2, 1};
    e["1act"] = {2 + kAlphabet.size(), kAlphabet.size() * kAlphabet.size() + 1};
    e["GC1"] = {2, 4};
    e["GC2"] = {2, 4};
    for (size_t i = 0; i < m.commands.size(); ++i) {
        Counts c;
        switch (m.commands[i].op) {
            case Op::Inc:
            case Op::Dec: c = {4, 8}; break;
            case Op::IfZero: c = {5, 10}; break;
            case Op::Halt: c = {1, 1}; break;
        }
        e["c" + std::to_string(i)] = c;
    }
    return e;
}

std::string gadget_of(const std::string& loc) {
    if (loc == "lpriv" || loc == "lf") return "shared";
    auto dot = loc.find('.');
    return dot == std::string::npos ? loc : loc.substr(0, dot);
}

}  // namespace

size_t expected_locations(const MinskyMachine& m) {
    size_t n = 0;
    for (auto& [g, c] : expected_by_gadget(m)) n += c.locations;
    return n;
}

size_t expected_edges(const MinskyMachine& m) {
    size_t n = 0;
    for (auto& [g, c] : expected_by_gadget(m)) n += c.edges;
    return n;
}

StructuralReport structural_check(const TimedAutomaton& ta, const MinskyMachine& m) {
    StructuralReport r;
    r.locations = ta.locations.size();
    r.edges = ta.edges.size();
    auto want = expected_by_gadget(m);
    std::map<std::string, Counts> got;
    for (const auto& l : ta.locations) got[gadget_of(l.name)].locations++;
    for (const auto& e : ta.edges) got[gadget_of(ta.locations[e.src].name)].edges++;
    auto miss = [&](const std::string& what, size_t a, size_t b) {
        r.ok = false;
        r.mismatches.push_back(what + ": expected " + std::to_string(a) + ", got " + std::to_string(b));
    };
    std::set<std::string> names;
    for (auto& [g, c] : want) names.insert(g);
    for (auto& [g, c] : got) names.insert(g);
    for (const auto& g : names) {
        Counts w = want.count(g) ? want[g] : Counts{};
        Counts h = got.count(g) ? got[g] : Counts{};
        if (w.locations != h.locations) miss(g + "/locations", w.locations, h.locations);
        if (w.edges != h.edges) miss(g + "/edges", w.edges, h.edges);
    }
    if (r.locations != expected_locations(m)) miss("total/locations", expected_locations(m), r.locations);
    if (r.edges != expected_edges(m)) miss("total/edges", expected_edges(m), r.edges);
    int x = ta.find_clock("x");
    std::set<int> consts;
    for (const auto& e : ta.edges)
        for (const auto& a : e.guard)
            if (a.clock == x) consts.insert(a.bound);
    for (int c : consts)
        if (c < 0 || c > 3) {
            r.ok = false;
            r.mismatches.push_back("guards: constant " + std::to_string(c) + " outside {0,1,2,3}");
        }
    if (x < 0) {
        r.ok = false;
        r.mismatches.push_back("clocks: no clock x");
    }
    return r;
}

}  // namespace etopaq

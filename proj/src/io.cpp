#include "etopaq/io.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"

namespace etopaq {

using json = nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

// ============================================================================
// automaton text format

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string w; ss >> w;) out.push_back(w);
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

Rel flip(Rel r) {
    switch (r) {
        case Rel::LT: return Rel::GT;
        case Rel::LE: return Rel::GE;
        case Rel::GE: return Rel::LE;
        case Rel::GT: return Rel::LT;
        default: return r;
    }
}

Rel parse_rel(const std::string& s) {
    if (s == "<") return Rel::LT;
    if (s == "<=") return Rel::LE;
    if (s == "=" || s == "==") return Rel::EQ;
    if (s == ">=") return Rel::GE;
    if (s == ">") return Rel::GT;
    throw ParseError("bad relation '" + s + "'");
}

// atoms separated by '&'; each "x <= 3", "3 > x" or the chain "0 < x < 1"
Constraint parse_constraint(const TimedAutomaton& ta, const std::string& text) {
    Constraint c;
    std::string t = trim(text);
    if (t.empty() || t == "true") return c;
    static const std::regex tok(R"(\s*([A-Za-z_][A-Za-z0-9_']*|\d+|<=|>=|==|<|>|=)\s*)");
    std::stringstream parts(t);
    for (std::string part; std::getline(parts, part, '&');) {
        std::vector<std::string> toks;
        std::string rest = part;
        std::smatch m;
        while (!trim(rest).empty()) {
            if (!std::regex_search(rest, m, tok, std::regex_constants::match_continuous))
                throw ParseError("cannot parse constraint '" + trim(part) + "'");
            toks.push_back(m[1]);
            rest = m.suffix();
        }
        auto is_num = [](const std::string& s) { return !s.empty() && std::all_of(s.begin(), s.end(), ::isdigit); };
        auto clock = [&](const std::string& s) {
            int k = ta.find_clock(s);
            if (k < 0) throw ParseError("unknown clock '" + s + "'");
            return k;
        };
        auto bound = [&](const std::string& s) {
            if (!is_num(s)) throw ParseError("expected an integer constant, got '" + s + "'");
            return std::stoi(s);
        };
        if (toks.size() == 3 && !is_num(toks[0])) {
            c.push_back({clock(toks[0]), parse_rel(toks[1]), bound(toks[2])});
        } else if (toks.size() == 3) {
            c.push_back({clock(toks[2]), flip(parse_rel(toks[1])), bound(toks[0])});
        } else if (toks.size() == 5) {
            int k = clock(toks[2]);
            c.push_back({k, flip(parse_rel(toks[1])), bound(toks[0])});
            c.push_back({k, parse_rel(toks[3]), bound(toks[4])});
        } else {
            throw ParseError("cannot parse constraint '" + trim(part) + "'");
        }
    }
    return c;
}

}  // namespace

std::string constraint_str(const TimedAutomaton& ta, const Constraint& c) {
    if (c.empty()) return "true";
    std::string s;
    for (size_t i = 0; i < c.size(); ++i) {
        if (i) s += " & ";
        s += ta.clocks[c[i].clock] + " " + rel_str(c[i].rel) + " " + std::to_string(c[i].bound);
    }
    return s;
}

TimedAutomaton parse_ta(const std::string& text) {
    TimedAutomaton ta;
    bool have_init = false;
    std::string tick_name;
    // edges and locations reference names declared anywhere; resolve after a first pass
    struct Pending {
        int line;
        std::string body;
        bool edge;
    };
    std::vector<Pending> pending;
    std::istringstream in(text);
    int lineno = 0;
    auto fail = [&](int ln, const std::string& msg) -> ParseError {
        return ParseError("line " + std::to_string(ln) + ": " + msg);
    };
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto w = split_ws(line);
        if (w.empty()) continue;
        const std::string& kw = w[0];
        if (kw == "clock") {
            if (w.size() != 2) throw fail(lineno, "usage: clock <name>");
            if (ta.find_clock(w[1]) >= 0) throw fail(lineno, "duplicate clock '" + w[1] + "'");
            ta.clocks.push_back(w[1]);
        } else if (kw == "tick") {
            if (w.size() != 2) throw fail(lineno, "usage: tick <clock>");
            tick_name = w[1];
        } else if (kw == "duplicated") {
            ta.duplicated = true;
        } else if (kw == "action") {
            if (w.size() != 3 || (w[2] != "c" && w[2] != "u")) throw fail(lineno, "usage: action <name> c|u");
            if (w[1] == "~") throw fail(lineno, "'~' is reserved for the silent action");
            if (ta.find_action(w[1]) >= 0) throw fail(lineno, "duplicate action '" + w[1] + "'");
            if (ta.actions.size() >= 64) throw fail(lineno, "at most 64 actions are supported");
            ta.actions.push_back({w[1], w[2] == "c"});
        } else if (kw == "location" || kw == "edge") {
            pending.push_back({lineno, line, kw == "edge"});
            if (kw == "location") {
                if (w.size() < 2) throw fail(lineno, "usage: location <name> [flags] [inv <constraint>]");
                if (ta.find_location(w[1]) >= 0) throw fail(lineno, "duplicate location '" + w[1] + "'");
                ta.locations.push_back({w[1], {}, false});
            }
        } else {
            throw fail(lineno, "unknown directive '" + kw + "'");
        }
    }
    if (!tick_name.empty()) {
        ta.tick_clock = ta.find_clock(tick_name);
        if (ta.tick_clock < 0) throw ParseError("tick clock '" + tick_name + "' is not declared");
    }
    for (const auto& p : pending) {
        auto w = split_ws(p.body);
        try {
            if (!p.edge) {
                int l = ta.location_index(w[1]);
                size_t i = 2;
                for (; i < w.size() && w[i] != "inv"; ++i) {
                    if (w[i] == "init") {
                        if (have_init) throw fail(p.line, "second initial location");
                        have_init = true;
                        ta.init = l;
                    } else if (w[i] == "private") {
                        if (ta.priv >= 0) throw fail(p.line, "second private location");
                        ta.priv = l;
                    } else if (w[i] == "final") {
                        ta.finals.push_back(l);
                    } else if (w[i] == "secret") {
                        ta.locations[l].secret = true;
                    } else {
                        throw fail(p.line, "unknown location flag '" + w[i] + "'");
                    }
                }
                if (i < w.size()) {
                    std::string rest;
                    for (size_t j = i + 1; j < w.size(); ++j) rest += w[j] + " ";
                    ta.locations[l].invariant = parse_constraint(ta, rest);
                }
                continue;
            }
            if (w.size() < 4) throw fail(p.line, "usage: edge <src> <dst> <action|~> [guard <c>] [reset <clocks>] [from <n>]");
            Edge e;
            e.src = ta.location_index(w[1]);
            e.dst = ta.location_index(w[2]);
            e.action = w[3] == "~" ? kSilent : ta.action_index(w[3]);
            std::string section, guard, reset, from;
            for (size_t i = 4; i < w.size(); ++i) {
                if (w[i] == "guard" || w[i] == "reset" || w[i] == "from") {
                    section = w[i];
                    continue;
                }
                if (section == "guard")
                    guard += w[i] + " ";
                else if (section == "reset")
                    reset += w[i] + " ";
                else if (section == "from")
                    from += w[i];
                else
                    throw fail(p.line, "unexpected token '" + w[i] + "'");
            }
            e.guard = parse_constraint(ta, guard);
            std::replace(reset.begin(), reset.end(), ',', ' ');
            for (const auto& r : split_ws(reset)) {
                int k = ta.find_clock(r);
                if (k < 0) throw fail(p.line, "unknown clock '" + r + "'");
                e.resets.push_back(k);
            }
            if (!from.empty()) {
                try {
                    e.origin = std::stoi(from);
                } catch (const std::exception&) {
                    throw fail(p.line, "bad edge origin '" + from + "'");
                }
            }
            ta.edges.push_back(e);
        } catch (const ParseError& ex) {
            if (std::string(ex.what()).rfind("line ", 0) == 0) throw;
            throw fail(p.line, ex.what());
        } catch (const std::exception& ex) {
            throw fail(p.line, ex.what());
        }
    }
    if (ta.locations.empty()) throw ParseError("automaton has no locations");
    if (!have_init) throw ParseError("no initial location");
    std::sort(ta.finals.begin(), ta.finals.end());
    ta.finals.erase(std::unique(ta.finals.begin(), ta.finals.end()), ta.finals.end());
    return ta;
}

std::string print_ta(const TimedAutomaton& ta) {
    std::ostringstream s;
    for (const auto& c : ta.clocks) s << "clock " << c << "\n";
    if (ta.tick_clock >= 0) s << "tick " << ta.clocks[ta.tick_clock] << "\n";
    if (ta.duplicated) s << "duplicated\n";
    for (const auto& a : ta.actions) s << "action " << a.name << (a.controllable ? " c" : " u") << "\n";
    for (size_t l = 0; l < ta.locations.size(); ++l) {
        const auto& loc = ta.locations[l];
        s << "location " << loc.name;
        if (int(l) == ta.init) s << " init";
        if (int(l) == ta.priv) s << " private";
        if (ta.is_final(int(l))) s << " final";
        if (loc.secret) s << " secret";
        if (!loc.invariant.empty()) s << " inv " << constraint_str(ta, loc.invariant);
        s << "\n";
    }
    for (const auto& e : ta.edges) {
        s << "edge " << ta.locations[e.src].name << " " << ta.locations[e.dst].name << " " << ta.action_name(e.action);
        if (!e.guard.empty()) s << " guard " << constraint_str(ta, e.guard);
        if (!e.resets.empty()) {
            s << " reset ";
            for (size_t i = 0; i < e.resets.size(); ++i) s << (i ? "," : "") << ta.clocks[e.resets[i]];
        }
        if (e.origin >= 0) s << " from " << e.origin;
        s << "\n";
    }
    return s.str();
}

TimedAutomaton load_ta(const std::string& path) {
    try {
        return parse_ta(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

// ============================================================================
// meta-strategy files

namespace {

ActionMask mask_json(const TimedAutomaton& ta, const json& j) {
    if (!j.is_array()) throw ParseError("expected an array of action names");
    ActionMask m = 0;
    for (const auto& x : j) {
        if (!x.is_string()) throw ParseError("action names must be strings");
        int a = ta.find_action(x.get<std::string>());
        if (a < 0) throw ParseError("unknown action '" + x.get<std::string>() + "'");
        if (!ta.actions[a].controllable)
            throw ParseError("action '" + x.get<std::string>() + "' is not controllable");
        m |= ActionMask(1) << a;
    }
    return m;
}

json names_json(const TimedAutomaton& ta, ActionMask m) {
    json arr = json::array();
    for (size_t a = 0; a < ta.actions.size(); ++a)
        if (ta.actions[a].controllable && ((m >> a) & 1)) arr.push_back(ta.actions[a].name);
    return arr;
}

}  // namespace

MetaStrategy parse_msf(const TimedAutomaton& ta, const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("meta-strategy JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("meta-strategy must be a JSON object");
    MetaStrategy phi;
    for (const char* part : {"stem", "loop"}) {
        if (!doc.contains(part)) {
            if (std::string(part) == "stem") continue;
            throw ParseError("meta-strategy needs a \"loop\"");
        }
        if (!doc[part].is_array()) throw ParseError(std::string("\"") + part + "\" must be an array");
        for (const auto& u : doc[part]) {
            if (!u.is_object() || !u.contains("point") || !u.contains("interval"))
                throw ParseError("unit plans need \"point\" and \"interval\"");
            UnitPlan p;
            p.at_point = mask_json(ta, u["point"]);
            p.in_interval.clear();
            if (!u["interval"].is_array() || u["interval"].empty())
                throw ParseError("\"interval\" must be a nonempty array of action lists");
            for (const auto& e : u["interval"]) p.in_interval.push_back(mask_json(ta, e));
            (std::string(part) == "stem" ? phi.stem : phi.loop).push_back(p);
        }
    }
    if (phi.loop.empty()) throw ParseError("meta-strategy loop must be nonempty");
    return phi;
}

std::string print_msf(const TimedAutomaton& ta, const MetaStrategy& phi) {
    // one unit plan per line, stem omitted when empty
    auto list = [&](ActionMask m) {
        std::string out = "[";
        for (const auto& name : names_json(ta, m)) out += (out.size() > 1 ? ", " : "") + name.dump();
        return out + "]";
    };
    std::ostringstream os;
    os << "{\n";
    auto section = [&](const char* name, const std::vector<UnitPlan>& units, bool last) {
        os << "  \"" << name << "\": [\n";
        for (size_t i = 0; i < units.size(); ++i) {
            std::string iv = "[";
            for (ActionMask m : units[i].in_interval) iv += (iv.size() > 1 ? ", " : "") + list(m);
            os << "    {\"point\": " << list(units[i].at_point) << ", \"interval\": " << iv << "]}"
               << (i + 1 < units.size() ? "," : "") << "\n";
        }
        os << "  ]" << (last ? "" : ",") << "\n";
    };
    if (!phi.stem.empty()) section("stem", phi.stem, false);
    section("loop", phi.loop, true);
    os << "}\n";
    return os.str();
}

MetaStrategy load_msf(const TimedAutomaton& ta, const std::string& path) {
    try {
        return parse_msf(ta, read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

// ============================================================================
// DOT

namespace {

std::string esc(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '"' || c == '\\') o += '\\';
        o += c;
    }
    return o;
}

std::string label_str(const TimedAutomaton& ta, const Choice& c) {
    return std::string(tick_str(c.tick)) + ", " + ta.mask_str(c.enabled);
}

}  // namespace

std::string regions_dot(RegionSpace& rs, size_t cap) {
    std::ostringstream s;
    s << "digraph regions {\n  rankdir=LR;\n";
    std::deque<RegionId> q{rs.initial()};
    std::set<RegionId> seen{rs.initial()};
    std::vector<std::tuple<RegionId, std::string, RegionId>> edges;
    while (!q.empty()) {
        RegionId r = q.front();
        q.pop_front();
        auto visit = [&](const RegionTrans& t, const std::string& lbl) {
            edges.emplace_back(r, lbl, t.dst);
            if (seen.size() < cap && seen.insert(t.dst).second) q.push_back(t.dst);
        };
        for (const auto& t : rs.delays(r)) visit(t, tick_str(t.tick));
        for (const auto& t : rs.discretes(r)) visit(t, rs.ta().action_name(t.action));
    }
    for (RegionId r : seen) {
        s << "  r" << r << " [label=\"" << esc(rs.to_string(r)) << "\"";
        if (rs.is_final(r)) s << ", shape=doublecircle";
        s << "];\n";
    }
    for (auto& [a, l, b] : edges)
        if (seen.count(a) && seen.count(b)) s << "  r" << a << " -> r" << b << " [label=\"" << esc(l) << "\"];\n";
    s << "}\n";
    return s.str();
}

std::vector<std::string> pretty_belief_names(BeliefSpace& bs, const BeliefGraph& g) {
    // tick-1 count along a BFS tree path gives the time unit of a belief
    std::map<BeliefId, int> ones{{kBottom, 0}};
    std::deque<BeliefId> q{kBottom};
    std::map<BeliefId, std::vector<const BeliefEdge*>> out;
    for (const auto& e : g.edges) out[e.src].push_back(&e);
    while (!q.empty()) {
        BeliefId b = q.front();
        q.pop_front();
        for (const auto* e : out[b]) {
            if (ones.count(e->dst)) continue;
            ones[e->dst] = ones[b] + (e->tick == Tick::One);
            q.push_back(e->dst);
        }
    }
    std::vector<std::string> names;
    std::map<std::string, int> used;
    for (BeliefId b : g.states) {
        std::string n;
        if (b == kBottom) {
            n = "bot";
        } else if (bs.members(b).empty()) {
            n = "empty";
        } else {
            int t = ones.count(b) ? ones[b] : 0;
            int k = t / 2;
            n = t % 2 == 0 ? "b" + std::to_string(k) : "b(" + std::to_string(k) + "," + std::to_string(k + 1) + ")";
            if (!bs.has_public_final(b)) n += "'";
        }
        int c = used[n]++;
        names.push_back(c ? n + "#" + std::to_string(c) : n);
    }
    return names;
}

std::string beliefs_dot(BeliefSpace& bs, const BeliefGraph& g, bool pretty) {
    std::vector<std::string> names;
    if (pretty) names = pretty_belief_names(bs, g);
    std::map<BeliefId, size_t> pos;
    for (size_t i = 0; i < g.states.size(); ++i) pos[g.states[i]] = i;
    auto node = [&](BeliefId b) { return b == kBottom ? std::string("bot") : "b" + std::to_string(b); };
    std::ostringstream s;
    s << "digraph beliefs {\n  rankdir=LR;\n";
    for (size_t i = 0; i < g.states.size(); ++i) {
        BeliefId b = g.states[i];
        std::string lbl = pretty ? names[i] : bs.to_string(b);
        s << "  " << node(b) << " [label=\"" << esc(lbl) << "\"";
        if (b != kBottom && bs.leaking_full(b)) s << ", color=red";
        s << "];\n";
    }
    for (const auto& e : g.edges) {
        if (!pos.count(e.dst)) continue;
        s << "  " << node(e.src) << " -> " << node(e.dst) << " [label=\""
          << esc(label_str(bs.ta(), {e.tick, e.enabled})) << "\"];\n";
    }
    s << "}\n";
    return s.str();
}

std::string game_dot(BeliefSpace& bs, const GameGraph& g) {
    std::ostringstream s;
    s << "digraph game {\n  rankdir=LR;\n";
    for (size_t i = 0; i < g.states.size(); ++i) {
        const auto& st = g.states[i];
        s << "  g" << i << " [label=\"cur=" << st.cur << " acc=" << st.acc << (st.at_integer ? " point" : " interval");
        if (st.obligation) s << " obl";
        if (st.prev_final) s << " pf";
        s << "\"];\n";
    }
    for (const auto& e : g.edges)
        s << "  g" << e.src << " -> g" << e.dst << " [label=\"" << esc(label_str(bs.ta(), e.label)) << "\""
          << (e.label.tick == Tick::One ? ", style=bold" : "") << "];\n";
    s << "}\n";
    return s.str();
}

std::string witness_str(const TimedAutomaton& ta, const Witness& w) {
    return "stem " + choices_str(ta, w.stem) + "\nloop " + choices_str(ta, w.loop) + "\n";
}

}  // namespace etopaq

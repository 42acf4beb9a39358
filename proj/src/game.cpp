#include "etopaq/game.hpp"

#include <chrono>
#include <cstdlib>
#include <deque>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace etopaq {

size_t GameStateHash::operator()(const GameState& s) const {
    size_t h = std::hash<int>()(s.cur);
    h = h * 1000003u ^ std::hash<int>()(s.acc);
    return h * 31u + (size_t(s.at_integer) | size_t(s.obligation) << 1 | size_t(s.prev_final) << 2);
}

const char* status_str(Status s) {
    switch (s) {
        case Status::Sat: return "SAT";
        case Status::Unsat: return "UNSAT";
        case Status::Indeterminate: return "INDETERMINATE";
    }
    return "?";
}

size_t default_state_cap() {
    if (const char* env = std::getenv("ETOPAQ_STATE_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return size_t(v);
    }
    return 200000;
}

// ============================================================================
// game transitions

std::vector<GameMove> game_successors(BeliefSpace& bs, const GameState& s, Mode mode) {
    std::vector<GameMove> out;
    auto subsets = bs.ta().controllable_subsets();
    if (s.cur == kBottom) {
        for (ActionMask e : subsets) {
            BeliefId b = bs.initial(e);
            out.push_back({{Tick::Zero, e}, GameState{b, b, true, false, false}});
        }
        return out;
    }
    if (!s.at_integer) {
        for (ActionMask e : subsets) {
            BeliefId b = bs.successor(s.cur, Tick::ZeroPlus, e);
            GameState t = s;
            t.cur = b;
            t.acc = bs.unite(s.acc, b);
            out.push_back({{Tick::ZeroPlus, e}, t});
        }
    }
    // a tick-1 label closes the accumulated belief of the current bucket
    GameState closed = s;
    bool point = s.at_integer;
    switch (mode) {
        case Mode::Full:
            if (bs.leaking_full(s.acc)) return out;
            break;
        case Mode::Weak:
            if (bs.leaking_weak(s.acc)) return out;
            break;
        case Mode::AlmostFull:
            if (!point && bs.leaking_full(s.acc)) return out;
            break;
        case Mode::ClosedFull:
            if (point) {
                if (bs.leaking_full(s.acc) && !s.prev_final) closed.obligation = true;
            } else {
                if (bs.leaking_full(s.acc)) return out;
                if (s.obligation && !bs.finals_present(s.acc)) return out;
                closed.obligation = false;
                closed.prev_final = bs.finals_present(s.acc);
            }
            break;
    }
    for (ActionMask e : subsets) {
        BeliefId b = bs.successor(s.cur, Tick::One, e);
        GameState t = closed;
        t.cur = b;
        t.acc = b;
        t.at_integer = !point;
        out.push_back({{Tick::One, e}, t});
    }
    return out;
}

GameGraph explore_game(BeliefSpace& bs, Mode mode, const SolveOptions& opt) {
    size_t cap = opt.state_cap ? opt.state_cap : default_state_cap();
    auto t0 = std::chrono::steady_clock::now();
    GameGraph g;
    std::unordered_map<GameState, int, GameStateHash> index;
    g.states.push_back(GameState{});
    g.parent.push_back(-1);
    g.parent_edge.push_back(-1);
    index.emplace(GameState{}, 0);
    for (size_t head = 0; head < g.states.size(); ++head) {
        if ((head & 63) == 0) {
            double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (dt > opt.time_limit_s) {
                if (g.complete) {
                    std::ostringstream os;
                    os << "time limit of " << opt.time_limit_s << " s reached";
                    g.stop_reason = os.str();
                }
                g.complete = false;
                break;
            }
        }
        GameState s = g.states[head];
        for (auto& mv : game_successors(bs, s, mode)) {
            auto it = index.find(mv.dst);
            int d;
            if (it != index.end()) {
                d = it->second;
            } else {
                if (g.states.size() >= cap) {
                    g.complete = false;
                    g.stop_reason = "state cap of " + std::to_string(cap) + " reached";
                    continue;
                }
                d = int(g.states.size());
                index.emplace(mv.dst, d);
                g.states.push_back(mv.dst);
                g.parent.push_back(int(head));
                g.parent_edge.push_back(int(g.edges.size()));
            }
            g.edges.push_back({int(head), d, mv.label});
        }
    }
    return g;
}

// ============================================================================
// Buechi lasso search

namespace {

// iterative Tarjan; returns the component id of every state
std::vector<int> tarjan(size_t n, const std::vector<std::vector<int>>& adj) {
    std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on(n, 0);
    std::vector<int> st;
    int counter = 0, ncomp = 0;
    std::vector<std::pair<int, size_t>> call;
    for (size_t root = 0; root < n; ++root) {
        if (idx[root] != -1) continue;
        call.push_back({int(root), 0});
        while (!call.empty()) {
            auto& [v, i] = call.back();
            if (i == 0) {
                idx[v] = low[v] = counter++;
                st.push_back(v);
                on[v] = 1;
            }
            if (i < adj[v].size()) {
                int w = adj[v][i++];
                if (idx[w] == -1) {
                    call.push_back({w, 0});
                } else if (on[w]) {
                    low[v] = std::min(low[v], idx[w]);
                }
                continue;
            }
            if (low[v] == idx[v]) {
                int w;
                do {
                    w = st.back();
                    st.pop_back();
                    on[w] = 0;
                    comp[w] = ncomp;
                } while (w != v);
                ++ncomp;
            }
            int done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    return comp;
}

// shortest path of edge indices inside one component, from src to any state
// accepted by `goal` (src itself counts with an empty path)
std::vector<int> path_within(const GameGraph& g, const std::vector<std::vector<int>>& out_edges,
                             const std::vector<int>& comp, int src, const std::function<bool(int)>& goal) {
    std::vector<int> via(g.states.size(), -2);
    std::deque<int> q{src};
    via[src] = -1;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        if (goal(v)) {
            std::vector<int> path;
            for (int x = v; via[x] != -1; x = g.edges[via[x]].src) path.push_back(via[x]);
            return {path.rbegin(), path.rend()};
        }
        for (int e : out_edges[v]) {
            int w = g.edges[e].dst;
            if (comp[w] != comp[src] || via[w] != -2) continue;
            via[w] = e;
            q.push_back(w);
        }
    }
    throw std::runtime_error("internal: no path inside a strongly connected component");
}

}  // namespace

SolveResult solve(BeliefSpace& bs, Mode mode, const SolveOptions& opt) {
    GameGraph g;
    return solve(bs, mode, opt, g);
}

SolveResult solve(BeliefSpace& bs, Mode mode, const SolveOptions& opt, GameGraph& g) {
    g = explore_game(bs, mode, opt);
    SolveResult res;
    res.states = g.states.size();
    res.edges = g.edges.size();
    size_t n = g.states.size();
    std::vector<std::vector<int>> adj(n), out_edges(n);
    for (size_t e = 0; e < g.edges.size(); ++e) {
        adj[g.edges[e].src].push_back(g.edges[e].dst);
        out_edges[g.edges[e].src].push_back(int(e));
    }
    auto comp = tarjan(n, adj);
    std::vector<char> good(n, 0);  // component has an internal tick-1 edge
    for (const auto& e : g.edges)
        if (e.label.tick == Tick::One && comp[e.src] == comp[e.dst]) good[comp[e.src]] = 1;
    int s = -1;
    for (size_t v = 0; v < n && s < 0; ++v)
        if (good[comp[v]]) s = int(v);
    if (s < 0) {
        res.status = g.complete ? Status::Unsat : Status::Indeterminate;
        res.diagnostics = g.complete ? "exhaustive: " + std::to_string(n) + " game states, no winning lasso"
                                     : g.stop_reason + " after " + std::to_string(n) + " game states";
        return res;
    }
    for (int v = s; g.parent[v] != -1; v = g.parent[v]) res.witness.stem.push_back(g.edges[g.parent_edge[v]].label);
    std::reverse(res.witness.stem.begin(), res.witness.stem.end());
    auto has_one_edge = [&](int v) {
        for (int e : out_edges[v])
            if (g.edges[e].label.tick == Tick::One && comp[g.edges[e].dst] == comp[v]) return true;
        return false;
    };
    auto p1 = path_within(g, out_edges, comp, s, has_one_edge);
    int u = p1.empty() ? s : g.edges[p1.back()].dst;
    int one = -1;
    for (int e : out_edges[u])
        if (g.edges[e].label.tick == Tick::One && comp[g.edges[e].dst] == comp[u]) {
            one = e;
            break;
        }
    int w = g.edges[one].dst;
    auto p2 = path_within(g, out_edges, comp, w, [&](int v) { return v == s; });
    for (int e : p1) res.witness.loop.push_back(g.edges[e].label);
    res.witness.loop.push_back(g.edges[one].label);
    for (int e : p2) res.witness.loop.push_back(g.edges[e].label);
    res.status = Status::Sat;
    res.diagnostics = std::to_string(n) + " game states" + (g.complete ? "" : " (partial: " + g.stop_reason + ")");
    return res;
}

// ============================================================================
// witnesses and meta-strategies

namespace {

std::vector<UnitPlan> segment(const std::vector<Choice>& seq, bool first_is_initial) {
    std::vector<UnitPlan> units;
    for (size_t i = 0; i < seq.size(); ++i) {
        const Choice& c = seq[i];
        bool opens_unit = (i == 0);
        if (opens_unit) {
            Tick want = first_is_initial ? Tick::Zero : Tick::One;
            if (c.tick != want) throw std::runtime_error("witness segment does not start at an integer point");
            units.push_back(UnitPlan{c.enabled, {}});
            continue;
        }
        auto& u = units.back();
        if (c.tick == Tick::One && !u.in_interval.empty()) {
            units.push_back(UnitPlan{c.enabled, {}});
        } else if (c.tick == Tick::One) {
            u.in_interval.push_back(c.enabled);
        } else if (c.tick == Tick::ZeroPlus && !u.in_interval.empty()) {
            u.in_interval.push_back(c.enabled);
        } else {
            throw std::runtime_error("malformed witness label sequence");
        }
    }
    for (const auto& u : units)
        if (u.in_interval.empty()) throw std::runtime_error("witness ends inside a unit");
    return units;
}

}  // namespace

MetaStrategy witness_to_metastrategy(const Witness& w) {
    long loop_ones = 0, stem_ones = 0;
    for (const auto& c : w.loop) loop_ones += c.tick == Tick::One;
    for (const auto& c : w.stem) stem_ones += c.tick == Tick::One;
    if (loop_ones == 0) throw std::runtime_error("witness loop takes no tick-1 label");
    if (w.stem.empty() || w.stem[0].tick != Tick::Zero) throw std::runtime_error("witness must start with a tick-0 label");
    std::vector<Choice> stem = w.stem, loop = w.loop;
    if (loop_ones % 2) loop.insert(loop.end(), w.loop.begin(), w.loop.end());
    // rotate so that the loop starts at a label landing on an integer point
    long ord = stem_ones;
    size_t cut = loop.size();
    for (size_t i = 0; i < loop.size(); ++i) {
        if (loop[i].tick != Tick::One) continue;
        if (++ord % 2 == 0) {
            cut = i;
            break;
        }
    }
    stem.insert(stem.end(), loop.begin(), loop.begin() + long(cut));
    std::rotate(loop.begin(), loop.begin() + long(cut), loop.end());
    MetaStrategy phi;
    phi.stem = segment(stem, true);
    phi.loop = segment(loop, false);
    // minimal lasso: shortest loop period, then fold stem units into the loop
    size_t n = phi.loop.size();
    for (size_t p = 1; p < n; ++p) {
        if (n % p) continue;
        bool periodic = true;
        for (size_t i = p; i < n && periodic; ++i) periodic = phi.loop[i] == phi.loop[i - p];
        if (periodic) {
            phi.loop.resize(p);
            break;
        }
    }
    while (!phi.stem.empty() && phi.stem.back() == phi.loop.back()) {
        std::rotate(phi.loop.rbegin(), phi.loop.rbegin() + 1, phi.loop.rend());
        phi.stem.pop_back();
    }
    phi.check();
    return phi;
}

BucketTable belief_buckets(BeliefSpace& bs, const MetaStrategy& phi) {
    auto enc = encountered_beliefs(bs, phi);
    BucketTable t;
    t.loop_start = enc.loop_start;
    for (BeliefId b : enc.buckets) t.buckets.push_back({bs.has_private_final(b), bs.has_public_final(b)});
    return t;
}

Verdict check_metastrategy(BeliefSpace& bs, const MetaStrategy& phi, Mode mode) {
    return bucket_verdict(belief_buckets(bs, phi), mode);
}

std::vector<int> check_exists(BeliefSpace& bs) {
    auto t = belief_buckets(bs, all_enabled(bs.ta()));
    std::vector<int> out;
    for (size_t b = 0; b < t.buckets.size(); ++b)
        if (t.buckets[b].priv && t.buckets[b].pub) out.push_back(int(b));
    return out;
}

}  // namespace etopaq

#include "etopaq/strategy.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace etopaq {

const UnitPlan& MetaStrategy::unit(long k) const { return lasso_index(k) < stem.size() ? stem[lasso_index(k)] : loop[lasso_index(k) - stem.size()]; }

size_t MetaStrategy::lasso_index(long k) const {
    if (k < 0) throw std::runtime_error("negative unit index");
    if (size_t(k) < stem.size()) return size_t(k);
    if (loop.empty()) throw std::runtime_error("meta-strategy has an empty loop");
    return stem.size() + (size_t(k) - stem.size()) % loop.size();
}

void MetaStrategy::check() const {
    if (loop.empty()) throw std::runtime_error("meta-strategy loop must be nonempty");
    for (const auto* part : {&stem, &loop})
        for (const auto& u : *part)
            if (u.in_interval.empty()) throw std::runtime_error("interval plans must be nonempty");
}

std::string choices_str(const TimedAutomaton& ta, const std::vector<Choice>& v) {
    std::string s;
    for (const auto& c : v) s += std::string("(") + tick_str(c.tick) + "," + ta.mask_str(c.enabled) + ")";
    return s.empty() ? "eps" : s;
}

MetaStrategy all_enabled(const TimedAutomaton& ta) {
    ActionMask all = ta.controllable_mask();
    MetaStrategy phi;
    phi.loop.push_back(UnitPlan{all, {all}});
    return phi;
}

Choice next_choice(const MetaStrategy& phi, const std::vector<Choice>& v) {
    if (v.empty()) return {Tick::Zero, phi.unit(0).at_point};
    if (v[0].tick != Tick::Zero) throw std::runtime_error("choice sequence must start with a tick-0 element");
    long ones = 0;
    for (size_t j = 1; j < v.size(); ++j) {
        if (v[j].tick == Tick::Zero) throw std::runtime_error("tick-0 element after the first position");
        if (v[j].tick == Tick::One) ++ones;
    }
    long k = ones / 2;
    if (ones % 2 == 0) return {Tick::One, phi.unit(k).in_interval.at(0)};
    size_t suffix = 0;
    while (suffix < v.size() && v[v.size() - 1 - suffix].tick != Tick::One) ++suffix;
    // the opening tick-1 element is the first interval element
    size_t i = suffix + 1;
    const auto& plan = phi.unit(k).in_interval;
    if (i < plan.size()) return {Tick::ZeroPlus, plan[i]};
    if (i == plan.size()) return {Tick::One, phi.unit(k + 1).at_point};
    throw std::runtime_error("choice sequence is longer than the interval plan allows");
}

std::vector<Choice> phi_sequence(const MetaStrategy& phi, size_t length) {
    std::vector<Choice> out;
    for (long k = 0; out.size() < length; ++k) {
        const auto& u = phi.unit(k);
        out.push_back({k == 0 ? Tick::Zero : Tick::One, u.at_point});
        for (size_t j = 0; j < u.in_interval.size(); ++j)
            out.push_back({j == 0 ? Tick::One : Tick::ZeroPlus, u.in_interval[j]});
    }
    out.resize(length);
    return out;
}

ControlledState controlled_successor(BeliefSpace& bs, const MetaStrategy& phi, const ControlledState& s) {
    Choice c = next_choice(phi, s.v);
    ControlledState t;
    t.v = s.v;
    t.v.push_back(c);
    t.belief = bs.successor(s.belief, c.tick, c.enabled);
    return t;
}

std::string bucket_str(int bucket) {
    int k = bucket / 2;
    if (bucket % 2 == 0) return "[" + std::to_string(k) + "," + std::to_string(k) + "]";
    return "(" + std::to_string(k) + "," + std::to_string(k + 1) + ")";
}

Encountered encountered_beliefs(BeliefSpace& bs, const MetaStrategy& phi) {
    phi.check();
    Encountered out;
    std::map<std::pair<size_t, BeliefId>, long> seen;
    BeliefId point = bs.initial(phi.unit(0).at_point);
    for (long k = 0;; ++k) {
        auto key = std::make_pair(phi.lasso_index(k), point);
        auto it = seen.find(key);
        if (it != seen.end()) {
            out.loop_start = int(2 * it->second);
            return out;
        }
        seen.emplace(key, k);
        out.buckets.push_back(point);
        const auto& u = phi.unit(k);
        BeliefId cur = bs.successor(point, Tick::One, u.in_interval[0]);
        BeliefId acc = cur;
        for (size_t j = 1; j < u.in_interval.size(); ++j) {
            cur = bs.successor(cur, Tick::ZeroPlus, u.in_interval[j]);
            acc = bs.unite(acc, cur);
        }
        out.buckets.push_back(acc);
        point = bs.successor(cur, Tick::One, phi.unit(k + 1).at_point);
    }
}

// ============================================================================
// admission

namespace {

// row[l] <=> run admits the prefix v[0..l)
std::vector<char> admission_row(const TimedAutomaton& ta, const Run& run, const std::vector<Choice>& v) {
    if (ta.tick_clock < 0) throw std::runtime_error("admission needs a tick-augmented automaton");
    auto states = replay(ta, run);
    size_t L = v.size();
    int z = ta.tick_clock;
    std::vector<char> prev(L + 1, 0), cur(L + 1, 0);
    if (L >= 1 && v[0].tick == Tick::Zero) prev[1] = 1;
    for (size_t j = 1; j <= run.size(); ++j) {
        std::fill(cur.begin(), cur.end(), 0);
        const Rational& d = run[j - 1].delay;
        int action = ta.edges[run[j - 1].edge].action;
        bool fz_prev = frac(states[j - 1].val[z]) != 0;
        bool fz_now = frac(states[j - 1].val[z] + d) != 0;  // before the edge's resets
        for (size_t l = 1; l <= L; ++l) {
            const Choice& last = v[l - 1];
            bool ok = false;
            if (d == 0) {
                ok = prev[l] && ta.action_allowed(action, last.enabled);
            } else if (d < 1) {
                if (!ta.action_allowed(action, last.enabled)) continue;
                // v = v' (1,E0) (0+,E1) ... (0+,E_{m-1}) (dag_m,E_m)
                for (size_t p = l; p-- > 0 && !ok;) {
                    if (v[p].tick != Tick::One) continue;
                    size_t m = l - 1 - p;
                    bool inner = true;
                    for (size_t q = p + 1; q + 1 < l; ++q)
                        if (v[q].tick != Tick::ZeroPlus) inner = false;
                    if (!inner) continue;
                    Tick dag_m = v[l - 1].tick;
                    auto any_prefix = [&](size_t hi) {
                        for (size_t i = 0; i <= hi; ++i)
                            if (prev[p + 1 + i]) return true;
                        return false;
                    };
                    bool open_end = m == 0 || dag_m == Tick::ZeroPlus;
                    if (fz_prev && fz_now && open_end && any_prefix(m)) ok = true;       // (a)
                    if (!fz_prev && prev[p] && open_end) ok = true;                    // (b)
                    if (!fz_now && m >= 1 && dag_m == Tick::One && any_prefix(m - 1)) ok = true;  // (c)
                }
            } else if (d == 1) {
                if (last.tick != Tick::One || !ta.action_allowed(action, last.enabled)) continue;
                // v = v' (1,E0) (0+,E1) ... (0+,Em) (1,E)
                for (size_t p = l - 1; p-- > 0 && !ok;) {
                    if (v[p].tick != Tick::One) continue;
                    bool inner = true;
                    for (size_t q = p + 1; q + 1 < l; ++q)
                        if (v[q].tick != Tick::ZeroPlus) inner = false;
                    if (inner && prev[p]) ok = true;
                }
            }
            cur[l] = ok;
        }
        std::swap(prev, cur);
    }
    return prev;
}

}  // namespace

bool run_admits(const TimedAutomaton& prepared, const Run& run, const std::vector<Choice>& v) {
    return admission_row(prepared, run, v)[v.size()];
}

std::optional<std::vector<Choice>> is_feasible(BeliefSpace& bs, const MetaStrategy& phi, const Run& run) {
    const auto& ta = bs.ta();
    auto states = replay(ta, run);
    RegionId last = bs.regions().of(states.back().loc, states.back().val);
    long units = floor_int(states.back().time) + 2;
    size_t len = 0;
    for (long k = 0; k < units; ++k) len += 1 + phi.unit(k).in_interval.size();
    auto v = phi_sequence(phi, len);
    auto row = admission_row(ta, run, v);
    BeliefId b = kBottom;
    for (size_t l = 1; l <= len; ++l) {
        b = bs.successor(b, v[l - 1].tick, v[l - 1].enabled);
        if (!row[l]) continue;
        const auto& mem = bs.members(b);
        if (std::binary_search(mem.begin(), mem.end(), last))
            return std::vector<Choice>(v.begin(), v.begin() + long(l));
    }
    return std::nullopt;
}

// ============================================================================
// concrete strategies

namespace {

bool contains(const Piece& p, const Rational& t) {
    if (t < p.lo || t > p.hi) return false;
    if (t == p.lo && !p.lo_closed) return false;
    if (t == p.hi && !p.hi_closed) return false;
    return true;
}

Rational fold(const ConcreteStrategy& s, const Rational& t) {
    Rational end(s.period_start + s.period);
    if (t < end) return t;
    Rational off = t - Rational(s.period_start);
    Rational q = off / Rational(s.period);
    return t - Rational(s.period) * Rational(floor_int(q));
}

// masks of the constant runs of sigma inside (k,k+1) (k < horizon), with a
// flag telling whether a run is a single point
std::vector<std::pair<ActionMask, bool>> interval_runs(const ConcreteStrategy& s, long k) {
    std::vector<std::pair<ActionMask, bool>> runs;
    std::vector<std::pair<Rational, Rational>> extent;
    Rational lo(k), hi(k + 1);
    for (const auto& p : s.pieces) {
        Rational a = std::max(p.lo, lo), b = std::min(p.hi, hi);
        if (a > b) continue;
        if (a == b) {
            // a single point survives only strictly inside and when closed on both sides
            if (a == lo || a == hi || !contains(p, a)) continue;
        }
        if (!runs.empty() && runs.back().first == p.mask) {
            extent.back().second = b;
        } else {
            runs.push_back({p.mask, false});
            extent.push_back({a, b});
        }
    }
    for (size_t i = 0; i < runs.size(); ++i) runs[i].second = extent[i].first == extent[i].second;
    return runs;
}

}  // namespace

void ConcreteStrategy::check() const {
    if (period <= 0 || period_start < 0) throw std::runtime_error("strategy period must be positive");
    if (pieces.empty()) throw std::runtime_error("strategy has no pieces");
    if (pieces.front().lo != 0 || !pieces.front().lo_closed) throw std::runtime_error("strategy must start at [0");
    for (size_t i = 0; i < pieces.size(); ++i) {
        const auto& p = pieces[i];
        if (p.lo > p.hi || (p.lo == p.hi && !(p.lo_closed && p.hi_closed)))
            throw std::runtime_error("empty strategy piece");
        if (i > 0) {
            const auto& q = pieces[i - 1];
            if (q.hi != p.lo || q.hi_closed == p.lo_closed)
                throw std::runtime_error("strategy pieces do not partition the time line");
        }
    }
    const auto& b = pieces.back();
    if (b.hi != Rational(period_start + period) || b.hi_closed)
        throw std::runtime_error("strategy pieces must end at the (open) horizon");
}

ActionMask ConcreteStrategy::at(const Rational& t) const {
    Rational u = fold(*this, t);
    for (const auto& p : pieces)
        if (contains(p, u)) return p.mask;
    throw std::runtime_error("strategy undefined at " + to_string(t));
}

ConcreteStrategy sample_strategy(const MetaStrategy& phi) {
    phi.check();
    ConcreteStrategy s;
    s.period_start = long(phi.stem.size());
    s.period = long(phi.loop.size());
    long units = s.period_start + s.period;
    for (long k = 0; k < units; ++k) {
        const auto& u = phi.unit(k);
        s.pieces.push_back({Rational(k), Rational(k), true, true, u.at_point});
        long m = long(u.in_interval.size());
        for (long j = 1; j <= m; ++j) {
            Rational lo = Rational(k) + Rational(j - 1, m), hi = Rational(k) + Rational(j, m);
            lo.canonicalize();
            hi.canonicalize();
            s.pieces.push_back({lo, hi, j > 1, false, u.in_interval[size_t(j - 1)]});
        }
    }
    return s;
}

MetaStrategy meta_of(const ConcreteStrategy& sigma) {
    sigma.check();
    MetaStrategy phi;
    long units = sigma.period_start + sigma.period;
    for (long k = 0; k < units; ++k) {
        UnitPlan u;
        u.at_point = sigma.at(Rational(k));
        u.in_interval.clear();
        Rational lo(k), hi(k + 1);
        for (const auto& p : sigma.pieces) {
            Rational a = std::max(p.lo, lo), b = std::min(p.hi, hi);
            if (a > b) continue;
            if (a == b && (a == lo || a == hi || !contains(p, a))) continue;
            u.in_interval.push_back(p.mask);
        }
        (k < sigma.period_start ? phi.stem : phi.loop).push_back(u);
    }
    return phi;
}

bool satisfies(const ConcreteStrategy& sigma, const MetaStrategy& phi) {
    sigma.check();
    phi.check();
    long start = std::max<long>(sigma.period_start, long(phi.stem.size()));
    long period = std::lcm(sigma.period, long(phi.loop.size()));
    for (long k = 0; k < start + period; ++k) {
        const auto& u = phi.unit(k);
        if (sigma.at(Rational(k)) != u.at_point) return false;
        long kk = floor_int(fold(sigma, Rational(k)));
        auto runs = interval_runs(sigma, kk);
        std::vector<std::pair<ActionMask, size_t>> want;
        for (ActionMask m : u.in_interval) {
            if (!want.empty() && want.back().first == m)
                ++want.back().second;
            else
                want.push_back({m, 1});
        }
        if (runs.size() != want.size()) return false;
        for (size_t i = 0; i < runs.size(); ++i) {
            if (runs[i].first != want[i].first) return false;
            if (runs[i].second && want[i].second > 1) return false;
        }
    }
    return true;
}

bool sigma_compatible(const TimedAutomaton& ta, const Run& run, const ConcreteStrategy& sigma) {
    auto states = replay(ta, run);
    for (size_t i = 0; i < run.size(); ++i) {
        Rational t = states[i].time + run[i].delay;
        if (!ta.action_allowed(ta.edges[run[i].edge].action, sigma.at(t))) return false;
    }
    return true;
}

}  // namespace etopaq

#include "etopaq/oracle.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace etopaq {

const char* mode_str(Mode m) {
    switch (m) {
        case Mode::Full: return "full";
        case Mode::Weak: return "weak";
        case Mode::AlmostFull: return "almost";
        case Mode::ClosedFull: return "closed";
    }
    return "?";
}

Mode parse_mode(const std::string& s) {
    if (s == "full") return Mode::Full;
    if (s == "weak") return Mode::Weak;
    if (s == "almost") return Mode::AlmostFull;
    if (s == "closed") return Mode::ClosedFull;
    throw std::runtime_error("unknown mode '" + s + "'");
}

const BucketFlags& BucketTable::at(long bucket) const {
    long n = long(buckets.size());
    if (bucket < n) return buckets.at(size_t(bucket));
    long period = n - loop_start;
    if (period <= 0) throw std::runtime_error("bucket table has an empty loop");
    return buckets[size_t(loop_start + (bucket - loop_start) % period)];
}

Verdict bucket_verdict(const BucketTable& table, Mode mode) {
    for (size_t b = 0; b < table.buckets.size(); ++b) {
        const auto& f = table.buckets[b];
        bool point = b % 2 == 0;
        bool bad = false;
        switch (mode) {
            case Mode::Full: bad = f.priv != f.pub; break;
            case Mode::Weak: bad = f.priv && !f.pub; break;
            case Mode::AlmostFull: bad = !point && f.priv != f.pub; break;
            case Mode::ClosedFull:
                if (f.priv == f.pub) break;
                if (!point) {
                    bad = true;
                    break;
                }
                // a punctual mismatch vanishes in the closures iff a neighbouring
                // interval carries durations (intervals themselves agree)
                bad = !((b >= 1 && table.at(long(b) - 1).any()) || table.at(long(b) + 1).any());
                break;
        }
        if (bad) return {false, int(b)};
    }
    return {};
}

namespace {

// product search restricted to one time unit: node (region, j), j = 0 for the
// integer point and 1..m for the interval's choice segments
struct UnitSearch {
    RegionSpace& rs;
    const UnitPlan& plan;
    bool strict_point;  // silent moves disabled at the point (initial unit only)
    std::vector<std::set<RegionId>> layer;  // layer[j]
    std::set<RegionId> next_points;          // tick-1 delays out of segment m

    UnitSearch(RegionSpace& r, const UnitPlan& p, bool strict) : rs(r), plan(p), strict_point(strict) {
        layer.resize(p.in_interval.size() + 1);
    }

    ActionMask enabled(size_t j) const { return j == 0 ? plan.at_point : plan.in_interval[j - 1]; }

    void run(const std::vector<RegionId>& seeds) {
        std::vector<std::pair<RegionId, size_t>> stack;
        auto push = [&](RegionId r, size_t j) {
            if (layer[j].insert(r).second) stack.push_back({r, j});
        };
        for (RegionId r : seeds) push(r, 0);
        const auto& ta = rs.ta();
        size_t m = plan.in_interval.size();
        while (!stack.empty()) {
            auto [r, j] = stack.back();
            stack.pop_back();
            for (const auto& t : rs.discretes(r)) {
                bool ok = t.action == kSilent ? !(j == 0 && strict_point) : ta.action_allowed(t.action, enabled(j));
                if (ok) push(t.dst, j);
            }
            for (const auto& t : rs.delays(r)) {
                if (t.tick == Tick::ZeroPlus) {
                    if (j >= 1) push(t.dst, j);
                    if (j >= 1 && j < m) push(t.dst, j + 1);
                } else if (t.tick == Tick::One) {
                    if (j == 0)
                        push(t.dst, 1);
                    else if (j == m)
                        next_points.insert(t.dst);
                }
            }
        }
    }
};

BucketFlags flags_of(RegionSpace& rs, const std::set<RegionId>& regs) {
    BucketFlags f;
    for (RegionId r : regs) {
        if (!rs.is_final(r)) continue;
        (rs.is_secret(r) ? f.priv : f.pub) = true;
    }
    return f;
}

}  // namespace

BucketTable oracle_buckets(RegionSpace& rs, const MetaStrategy& phi, bool strict_initial) {
    phi.check();
    BucketTable table;
    std::map<std::pair<size_t, std::set<RegionId>>, long> seen;
    std::vector<RegionId> seeds{rs.initial()};
    for (long k = 0;; ++k) {
        UnitSearch us(rs, phi.unit(k), k == 0 && strict_initial);
        us.run(seeds);
        auto key = std::make_pair(phi.lasso_index(k), us.layer[0]);
        auto it = seen.find(key);
        if (it != seen.end()) {
            table.loop_start = int(2 * it->second);
            return table;
        }
        seen.emplace(std::move(key), k);
        table.buckets.push_back(flags_of(rs, us.layer[0]));
        std::set<RegionId> interval;
        for (size_t j = 1; j < us.layer.size(); ++j) interval.insert(us.layer[j].begin(), us.layer[j].end());
        table.buckets.push_back(flags_of(rs, interval));
        seeds.assign(us.next_points.begin(), us.next_points.end());
    }
}

Verdict oracle_verdict(RegionSpace& rs, const MetaStrategy& phi, Mode mode) {
    return bucket_verdict(oracle_buckets(rs, phi), mode);
}

std::string bucket_report(const BucketTable& table) {
    std::string s;
    for (size_t b = 0; b < table.buckets.size(); ++b) {
        const auto& f = table.buckets[b];
        s += bucket_str(int(b)) + " | priv=" + (f.priv ? "true" : "false") + " pub=" + (f.pub ? "true" : "false");
        if (int(b) == table.loop_start) s += "  <- loop";
        s += "\n";
    }
    return s;
}

}  // namespace etopaq

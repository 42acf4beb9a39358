#pragma once

#include <string>
#include <vector>

#include "etopaq/strategy.hpp"

namespace etopaq {

enum class Mode { Full, Weak, AlmostFull, ClosedFull };

const char* mode_str(Mode m);     // "full", "weak", "almost", "closed"
Mode parse_mode(const std::string& s);  // throws on an unknown name

struct BucketFlags {
    bool priv = false;  // some secret final region
    bool pub = false;   // some public final region
    bool operator==(const BucketFlags&) const = default;
    bool any() const { return priv || pub; }
};

// bucket 2k = [k,k], 2k+1 = (k,k+1); table[loop_start..] repeats forever
struct BucketTable {
    std::vector<BucketFlags> buckets;
    int loop_start = 0;

    const BucketFlags& at(long bucket) const;  // wraps through the loop
};

struct Verdict {
    bool ok = true;
    int bucket = -1;  // first offending bucket when !ok
    bool operator==(const Verdict&) const = default;
};

// mode predicates over a whole bucket table
Verdict bucket_verdict(const BucketTable& table, Mode mode);

// Region-level product search (region x position in the unit's choice list),
// layered by time unit. Independent of the belief module.
BucketTable oracle_buckets(RegionSpace& rs, const MetaStrategy& phi, bool strict_initial = false);

Verdict oracle_verdict(RegionSpace& rs, const MetaStrategy& phi, Mode mode);

// "k | priv pub" lines
std::string bucket_report(const BucketTable& table);

}  // namespace etopaq

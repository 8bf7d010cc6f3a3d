#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "depscope/graph.hpp"
#include "depscope/rank.hpp"

namespace depscope {

struct AttackPlan {
    enum class Kind { width, tree, throttled };
    Kind kind = Kind::width;
    std::string target;
    std::size_t width = 0;           // bogus direct dependents (width)
    std::size_t depth = 1;           // chain length (tree)
    std::size_t steps = 1;           // throttled schedule
    std::size_t per_step_width = 0;
    Timestamp created_at_base = 1704067200;  // 2024-01-01
    std::int64_t created_at_jitter = 0;      // seconds, uniform in [0, jitter]
    std::int64_t step_interval = 30 * 86400;  // throttled batch spacing
    std::string name_prefix = "sybil-";
    std::uint64_t seed = 0;

    void validate() const;
};

/// Registry-side flagging limits. The real thresholds are secret; no default
/// pretends to be them.
struct SpamThresholds {
    std::size_t width_limit = 0;
    std::size_t tree_limit = 0;
    std::int64_t window = 0;  // seconds

    void validate() const;
};

struct AttackOutcome {
    DepGraph graph;
    std::vector<std::string> injected;  // provenance, in injection order
};

/// Builds a new graph with the plan's bogus packages added. Injected records
/// get version_count 1, status active, tea_registered true and timestamps
/// derived deterministically from the plan seed. The input graph is untouched.
AttackOutcome apply_attack(const DepGraph& g, const AttackPlan& plan);

/// Flags packages from created_at metadata alone: a package whose direct
/// dependents grew by more than width_limit inside any window, or one that
/// terminates a dependent chain longer than tree_limit whose adjacent members
/// were created within a window of each other. Returns flagged names sorted.
std::vector<std::string> flag_spam(const DepGraph& g, const SpamThresholds& t);

struct UpliftResult {
    double raw_before = 0.0;
    double raw_after = 0.0;
    double raw_delta = 0.0;
    double display_delta = 0.0;
    bool converged_before = false;
    bool converged_after = false;
};

UpliftResult rank_uplift(const DepGraph& before, const DepGraph& after,
                         const std::string& target, const RankParams& params);

/// Key-value plan file: one `key = value` per line, '#' comments. Keys match
/// the AttackPlan field names; timestamps in ISO-8601, durations in seconds.
AttackPlan parse_attack_plan(std::istream& in);

}  // namespace depscope

#include "depscope/attack.hpp"

#include <algorithm>
#include <istream>
#include <random>
#include <stdexcept>

namespace depscope {

void AttackPlan::validate() const {
    if (target.empty()) throw std::invalid_argument("attack plan needs a target");
    if (kind == Kind::tree && depth < 1) throw std::invalid_argument("depth must be >= 1");
    if (kind == Kind::throttled && steps < 1)
        throw std::invalid_argument("steps must be >= 1");
    if (created_at_jitter < 0) throw std::invalid_argument("jitter must be >= 0");
    if (kind == Kind::throttled && step_interval <= 0)
        throw std::invalid_argument("step_interval must be positive");
    if (name_prefix.empty()) throw std::invalid_argument("name_prefix must be non-empty");
}

AttackOutcome apply_attack(const DepGraph& g, const AttackPlan& plan) {
    plan.validate();
    if (g.find(plan.target) < 0)
        throw std::invalid_argument("unknown attack target: " + plan.target);

    std::mt19937_64 rng(plan.seed);
    auto jitter = [&]() -> std::int64_t {
        if (plan.created_at_jitter == 0) return 0;
        return std::uniform_int_distribution<std::int64_t>(0, plan.created_at_jitter)(rng);
    };

    std::vector<PackageRecord> records = g.records();
    std::vector<std::string> injected;
    std::size_t counter = 0;
    auto make_record = [&](Timestamp created) -> PackageRecord& {
        std::string num = std::to_string(counter++);
        PackageRecord r;
        r.name = plan.name_prefix + std::string(num.size() < 6 ? 6 - num.size() : 0, '0') + num;
        if (g.find(r.name) >= 0)
            throw std::invalid_argument("injected name collides with existing package: " +
                                        r.name);
        r.registry = g.record(static_cast<std::uint32_t>(g.find(plan.target))).registry;
        r.created_at = created;
        r.version_count = 1;
        r.status = PackageStatus::active;
        r.tea_registered = true;
        injected.push_back(r.name);
        records.push_back(std::move(r));
        return records.back();
    };

    switch (plan.kind) {
        case AttackPlan::Kind::width:
            for (std::size_t i = 0; i < plan.width; ++i)
                make_record(plan.created_at_base + jitter()).dependencies = {plan.target};
            break;
        case AttackPlan::Kind::tree: {
            // c_1 -> c_2 -> ... -> c_depth -> target
            std::size_t first = records.size();
            for (std::size_t i = 0; i < plan.depth; ++i)
                make_record(plan.created_at_base + jitter());
            for (std::size_t i = 0; i < plan.depth; ++i) {
                records[first + i].dependencies = {i + 1 < plan.depth
                                                      ? records[first + i + 1].name
                                                      : plan.target};
            }
            break;
        }
        case AttackPlan::Kind::throttled:
            for (std::size_t step = 0; step < plan.steps; ++step) {
                Timestamp batch = plan.created_at_base +
                                  static_cast<std::int64_t>(step) * plan.step_interval;
                for (std::size_t i = 0; i < plan.per_step_width; ++i)
                    make_record(batch + jitter()).dependencies = {plan.target};
            }
            break;
    }

    return {DepGraph::build(std::move(records), true), std::move(injected)};
}

void SpamThresholds::validate() const {
    if (window <= 0) throw std::invalid_argument("window must be positive");
}

namespace {

// Longest dependent chain continuing from pkg where each link joins packages
// created within `window` of each other. Memoized; cycles contribute nothing.
std::size_t fresh_chain(const DepGraph& g, std::uint32_t pkg, std::int64_t window,
                        std::vector<std::int64_t>& memo, std::vector<char>& state) {
    if (state[pkg] == 1) return 0;  // on the current path
    if (memo[pkg] >= 0) return static_cast<std::size_t>(memo[pkg]);
    state[pkg] = 1;
    std::size_t best = 0;
    for (std::uint32_t dep : g.reverse(pkg)) {
        if (std::llabs(g.record(dep).created_at - g.record(pkg).created_at) <= window)
            best = std::max(best, 1 + fresh_chain(g, dep, window, memo, state));
    }
    state[pkg] = 0;
    memo[pkg] = static_cast<std::int64_t>(best);
    return best;
}

}  // namespace

std::vector<std::string> flag_spam(const DepGraph& g, const SpamThresholds& t) {
    t.validate();
    std::vector<std::int64_t> memo(g.size(), -1);
    std::vector<char> state(g.size(), 0);
    std::vector<std::string> flagged;

    for (std::uint32_t p = 0; p < g.size(); ++p) {
        bool flag = false;

        // width: max dependents created inside any window of length t.window
        const auto& dependents = g.reverse(p);
        if (dependents.size() > t.width_limit) {
            std::vector<Timestamp> times;
            times.reserve(dependents.size());
            for (std::uint32_t d : dependents) times.push_back(g.record(d).created_at);
            std::sort(times.begin(), times.end());
            std::size_t lo = 0;
            for (std::size_t hi = 0; hi < times.size(); ++hi) {
                while (times[hi] - times[lo] > t.window) ++lo;
                if (hi - lo + 1 > t.width_limit) {
                    flag = true;
                    break;
                }
            }
        }

        // tree: a freshly-built dependent chain terminating here
        if (!flag) {
            std::size_t chain = 0;
            for (std::uint32_t dep : dependents)
                chain = std::max(chain, 1 + fresh_chain(g, dep, t.window, memo, state));
            if (chain > t.tree_limit) flag = true;
        }

        if (flag) flagged.push_back(g.record(p).name);
    }
    std::sort(flagged.begin(), flagged.end());
    return flagged;
}

UpliftResult rank_uplift(const DepGraph& before, const DepGraph& after,
                         const std::string& target, const RankParams& params) {
    std::int64_t bi = before.find(target);
    std::int64_t ai = after.find(target);
    if (bi < 0 || ai < 0)
        throw std::invalid_argument("target missing from a graph: " + target);

    RankVector vb = compute_rank(before, params);
    RankVector va = compute_rank(after, params);

    UpliftResult r;
    r.raw_before = vb.values[static_cast<std::size_t>(bi)];
    r.raw_after = va.values[static_cast<std::size_t>(ai)];
    r.raw_delta = r.raw_after - r.raw_before;
    r.display_delta = display_score(r.raw_after) - display_score(r.raw_before);
    r.converged_before = vb.converged;
    r.converged_after = va.converged;
    return r;
}

AttackPlan parse_attack_plan(std::istream& in) {
    AttackPlan plan;
    bool have_kind = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto notspace = [](unsigned char c) { return !std::isspace(c); };
        line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
        line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("plan line " + std::to_string(line_no) +
                                        ": expected key = value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(), key.end());
        value.erase(value.begin(), std::find_if(value.begin(), value.end(), notspace));

        if (key == "kind") {
            if (value == "width")
                plan.kind = AttackPlan::Kind::width;
            else if (value == "tree")
                plan.kind = AttackPlan::Kind::tree;
            else if (value == "throttled")
                plan.kind = AttackPlan::Kind::throttled;
            else
                throw std::invalid_argument("unknown attack kind: " + value);
            have_kind = true;
        } else if (key == "target") {
            plan.target = value;
        } else if (key == "width") {
            plan.width = std::stoull(value);
        } else if (key == "depth") {
            plan.depth = std::stoull(value);
        } else if (key == "steps") {
            plan.steps = std::stoull(value);
        } else if (key == "per_step_width") {
            plan.per_step_width = std::stoull(value);
        } else if (key == "created_at_base") {
            plan.created_at_base = parse_timestamp(value);
        } else if (key == "created_at_jitter") {
            plan.created_at_jitter = std::stoll(value);
        } else if (key == "step_interval") {
            plan.step_interval = std::stoll(value);
        } else if (key == "name_prefix") {
            plan.name_prefix = value;
        } else if (key == "seed") {
            plan.seed = std::stoull(value);
        } else {
            throw std::invalid_argument("unknown plan key: " + key);
        }
    }
    if (!have_kind) throw std::invalid_argument("plan missing 'kind'");
    plan.validate();
    return plan;
}

}  // namespace depscope

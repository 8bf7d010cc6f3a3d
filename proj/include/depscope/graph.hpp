#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "depscope/record.hpp"

namespace depscope {

enum class Direction { dependencies, dependents };

/// Immutable dependency graph. Edge i -> j means "i depends on j".
/// forward(i) holds i's dependencies, reverse(j) holds j's dependents;
/// both sorted ascending, no self-loops, no duplicates.
class DepGraph {
public:
    struct BuildStats {
        std::size_t dropped_self_loops = 0;
        std::size_t dropped_duplicates = 0;
        std::size_t dropped_unresolved = 0;
        std::size_t total_dropped() const {
            return dropped_self_loops + dropped_duplicates + dropped_unresolved;
        }
    };

    static DepGraph build(std::vector<PackageRecord> records, bool strict = false,
                          BuildStats* stats = nullptr);

    std::size_t size() const { return records_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    const PackageRecord& record(std::uint32_t i) const { return records_[i]; }
    const std::vector<PackageRecord>& records() const { return records_; }

    const std::vector<std::uint32_t>& forward(std::uint32_t i) const;
    const std::vector<std::uint32_t>& reverse(std::uint32_t i) const;
    const std::vector<std::uint32_t>& neighbors(std::uint32_t i, Direction dir) const;

    std::size_t out_degree(std::uint32_t i) const { return forward(i).size(); }
    std::size_t in_degree(std::uint32_t i) const { return reverse(i).size(); }

    /// All nodes reachable from pkg in the given direction, excluding pkg
    /// itself (even on cycles back to it). Returned sorted ascending.
    std::vector<std::uint32_t> transitive_closure(std::uint32_t pkg, Direction dir) const;

    /// Top-n packages by direct dependent count or transitive dependent count,
    /// descending; ties broken by ascending name.
    enum class TopMode { direct, transitive };
    std::vector<std::pair<std::uint32_t, std::size_t>> top_n(std::size_t n_top,
                                                             TopMode mode) const;

    /// Index of a package by name, or -1 if absent.
    std::int64_t find(const std::string& name) const;

private:
    std::vector<PackageRecord> records_;
    std::vector<std::vector<std::uint32_t>> forward_;
    std::vector<std::vector<std::uint32_t>> reverse_;
    std::unordered_map<std::string, std::uint32_t> by_name_;
    std::size_t edge_count_ = 0;
};

}  // namespace depscope

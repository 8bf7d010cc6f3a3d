#include "depscope/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace depscope {

DepGraph DepGraph::build(std::vector<PackageRecord> records, bool strict, BuildStats* stats) {
    DepGraph g;
    g.records_ = std::move(records);
    const std::size_t n = g.records_.size();
    g.by_name_.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto& name = g.records_[i].name;
        if (name.empty()) throw std::invalid_argument("empty package name");
        if (!g.by_name_.emplace(name, i).second)
            throw std::invalid_argument("duplicate package name: " + name);
    }

    BuildStats local;
    g.forward_.resize(n);
    g.reverse_.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        auto& fwd = g.forward_[i];
        for (const auto& dep : g.records_[i].dependencies) {
            auto it = g.by_name_.find(dep);
            if (it == g.by_name_.end()) {
                if (strict)
                    throw std::invalid_argument("unresolvable dependency '" + dep +
                                                "' of package '" + g.records_[i].name + "'");
                ++local.dropped_unresolved;
                continue;
            }
            if (it->second == i) {
                if (strict)
                    throw std::invalid_argument("self-dependency in package '" +
                                                g.records_[i].name + "'");
                ++local.dropped_self_loops;
                continue;
            }
            fwd.push_back(it->second);
        }
        std::sort(fwd.begin(), fwd.end());
        auto last = std::unique(fwd.begin(), fwd.end());
        local.dropped_duplicates += static_cast<std::size_t>(fwd.end() - last);
        fwd.erase(last, fwd.end());
        g.edge_count_ += fwd.size();
        for (std::uint32_t j : fwd) g.reverse_[j].push_back(i);
    }
    for (auto& rev : g.reverse_) std::sort(rev.begin(), rev.end());
    if (stats) *stats = local;
    return g;
}

const std::vector<std::uint32_t>& DepGraph::forward(std::uint32_t i) const {
    if (i >= forward_.size()) throw std::out_of_range("package index out of range");
    return forward_[i];
}

const std::vector<std::uint32_t>& DepGraph::reverse(std::uint32_t i) const {
    if (i >= reverse_.size()) throw std::out_of_range("package index out of range");
    return reverse_[i];
}

const std::vector<std::uint32_t>& DepGraph::neighbors(std::uint32_t i, Direction dir) const {
    return dir == Direction::dependencies ? forward(i) : reverse(i);
}

std::vector<std::uint32_t> DepGraph::transitive_closure(std::uint32_t pkg,
                                                        Direction dir) const {
    if (pkg >= records_.size()) throw std::out_of_range("package index out of range");
    std::vector<bool> seen(records_.size(), false);
    std::vector<std::uint32_t> stack{pkg};
    seen[pkg] = true;
    std::vector<std::uint32_t> out;
    while (!stack.empty()) {
        std::uint32_t cur = stack.back();
        stack.pop_back();
        for (std::uint32_t next : neighbors(cur, dir)) {
            if (!seen[next]) {
                seen[next] = true;
                out.push_back(next);
                stack.push_back(next);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<std::uint32_t, std::size_t>> DepGraph::top_n(std::size_t n_top,
                                                                   TopMode mode) const {
    if (n_top < 1) throw std::invalid_argument("n_top must be >= 1");
    std::vector<std::pair<std::uint32_t, std::size_t>> all(records_.size());
    for (std::uint32_t i = 0; i < records_.size(); ++i) {
        std::size_t count = mode == TopMode::direct
                                ? reverse_[i].size()
                                : transitive_closure(i, Direction::dependents).size();
        all[i] = {i, count};
    }
    std::sort(all.begin(), all.end(), [this](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return records_[a.first].name < records_[b.first].name;
    });
    if (all.size() > n_top) all.resize(n_top);
    return all;
}

std::int64_t DepGraph::find(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

}  // namespace depscope

#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "depscope/graph.hpp"
#include "depscope/rank.hpp"

namespace depscope::testing {

inline PackageRecord make_record(std::string name, std::vector<std::string> deps = {},
                                 Timestamp created = 1577836800 /* 2020-01-01 */,
                                 std::uint32_t versions = 15,
                                 PackageStatus status = PackageStatus::active,
                                 bool tea = true) {
    PackageRecord r;
    r.name = std::move(name);
    r.dependencies = std::move(deps);
    r.created_at = created;
    r.version_count = versions;
    r.status = status;
    r.tea_registered = tea;
    return r;
}

inline DepGraph graph_from(std::vector<PackageRecord> records, bool strict = true) {
    return DepGraph::build(std::move(records), strict);
}

/// Random graph on n nodes with independent edge probability p, self-loops
/// excluded. Cycles allowed.
inline DepGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution edge(p);
    std::vector<PackageRecord> records;
    for (std::size_t i = 0; i < n; ++i)
        records.push_back(make_record("p" + std::to_string(i)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && edge(rng))
                records[i].dependencies.push_back("p" + std::to_string(j));
    return graph_from(std::move(records));
}

/// Dense reference for the rank recurrence: solves (I - (1-d)T) v = d*E by
/// Gaussian elimination with partial pivoting. Independent of the sparse
/// operator and the power iteration.
inline std::vector<double> dense_rank_oracle(const DepGraph& g, double kappa, double d) {
    const std::size_t n = g.size();
    std::vector<std::vector<double>> T(n, std::vector<double>(n, 0.0));
    for (std::uint32_t i = 0; i < n; ++i) {
        std::size_t deg = g.out_degree(i);
        for (std::uint32_t j : g.forward(i))
            T[j][i] += (1.0 - kappa) / static_cast<double>(deg);
        T[i][i] += kappa;
    }
    // M = I - (1-d)T, rhs = d/n
    std::vector<std::vector<double>> M(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c)
            M[r][c] = (r == c ? 1.0 : 0.0) - (1.0 - d) * T[r][c];
        M[r][n] = d / static_cast<double>(n);
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
        if (std::abs(M[piv][col]) < 1e-14)
            throw std::runtime_error("singular system in dense oracle");
        std::swap(M[col], M[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = M[r][col] / M[col][col];
            for (std::size_t c = col; c <= n; ++c) M[r][c] -= f * M[col][c];
        }
    }
    std::vector<double> v(n);
    for (std::size_t r = 0; r < n; ++r) v[r] = M[r][n] / M[r][r];
    return v;
}

}  // namespace depscope::testing

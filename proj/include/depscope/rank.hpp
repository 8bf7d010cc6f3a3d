#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "depscope/graph.hpp"

namespace depscope {

struct RankParams {
    double kappa = 0.0;
    double d = 0.85;
    double tol = 1e-10;
    std::uint32_t max_iters = 200;

    void validate() const;
};

/// The sparse transition operator T = (1-kappa)*A + kappa*I, where column i of
/// A spreads mass 1/outdeg(i) to each of package i's dependencies. Dangling
/// columns of A are zero; mass placed there is only refilled by the restart
/// term of the iteration.
class TransitionOp {
public:
    TransitionOp(const DepGraph& g, double kappa);

    /// dst = T * x. scratch must hold n doubles; x and dst must not alias.
    void apply(const double* x, double* dst, double* scratch) const;

    double kappa() const { return kappa_; }
    const DepGraph& graph() const { return *graph_; }

private:
    const DepGraph* graph_;
    double kappa_;
    std::vector<double> inv_outdeg_;  // 0 for dangling packages
};

struct RankVector {
    std::vector<double> values;
    std::uint32_t iterations_used = 0;
    double final_residual = 0.0;
    bool converged = false;
};

/// Power iteration v_k = (1-d)*T*v_{k-1} + d*(1/n,...,1/n), starting from the
/// uniform vector, until the L1 step falls below params.tol.
RankVector power_iterate(const TransitionOp& op, const RankParams& params);

RankVector compute_rank(const DepGraph& g, const RankParams& params);

/// Frontend display transform f(t) = 100*(log10(t)/9 + 1). Not clamped.
double display_score(double t);
/// Inverse of display_score: 10^(9*(s/100 - 1)).
double inverse_display(double s);

/// Mean over compared indices of max(p/o, o/p). >= 1, equals 1 iff identical
/// on the mask. mask == nullptr compares every index.
double mean_multiplicative_error(const std::vector<double>& predicted,
                                 const std::vector<double>& observed,
                                 const std::vector<std::uint32_t>* mask = nullptr);

/// CSV export: package_name,raw_rank,display_score sorted descending by raw
/// rank (ties by ascending name).
void write_rank_csv(const DepGraph& g, const RankVector& v, std::ostream& out);

/// Shortest round-trip decimal formatting, shared by all machine outputs.
std::string format_double(double x);

}  // namespace depscope

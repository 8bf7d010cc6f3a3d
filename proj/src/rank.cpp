#include "depscope/rank.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "depscope/kernels.hpp"

namespace depscope {

void RankParams::validate() const {
    if (kappa < 0.0 || kappa > 1.0) throw std::invalid_argument("kappa must be in [0,1]");
    if (d < 0.0 || d > 1.0) throw std::invalid_argument("d must be in [0,1]");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
}

TransitionOp::TransitionOp(const DepGraph& g, double kappa) : graph_(&g), kappa_(kappa) {
    if (kappa < 0.0 || kappa > 1.0) throw std::invalid_argument("kappa must be in [0,1]");
    inv_outdeg_.resize(g.size());
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        std::size_t deg = g.out_degree(i);
        inv_outdeg_[i] = deg == 0 ? 0.0 : 1.0 / static_cast<double>(deg);
    }
}

void TransitionOp::apply(const double* x, double* dst, double* scratch) const {
    const auto& k = kernels::active();
    const std::size_t n = graph_->size();
    k.mul(scratch, x, inv_outdeg_.data(), n);  // scratch[i] = x[i]/outdeg(i)
    // Pull accumulation over sorted dependent lists keeps summation order fixed.
    for (std::uint32_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::uint32_t i : graph_->reverse(j)) acc += scratch[i];
        dst[j] = acc;
    }
    // dst = (1-kappa)*A*x + kappa*x
    k.affine(dst, dst, x, 1.0 - kappa_, kappa_, 0.0, n);
}

RankVector power_iterate(const TransitionOp& op, const RankParams& params) {
    params.validate();
    const std::size_t n = op.graph().size();
    if (n == 0) throw std::invalid_argument("empty graph");
    const auto& k = kernels::active();

    const double restart = params.d / static_cast<double>(n);
    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n), scratch(n);

    RankVector out;
    for (std::uint32_t iter = 1; iter <= params.max_iters; ++iter) {
        op.apply(v.data(), next.data(), scratch.data());
        // v_k = (1-d)*T*v + d*E
        k.affine(next.data(), next.data(), v.data(), 1.0 - params.d, 0.0, restart, n);
        out.final_residual = k.l1_diff(next.data(), v.data(), n);
        out.iterations_used = iter;
        v.swap(next);
        if (out.final_residual < params.tol) {
            out.converged = true;
            break;
        }
    }
    out.values = std::move(v);
    return out;
}

RankVector compute_rank(const DepGraph& g, const RankParams& params) {
    TransitionOp op(g, params.kappa);
    return power_iterate(op, params);
}

double display_score(double t) {
    if (!(t > 0.0)) throw std::invalid_argument("display_score requires t > 0");
    return 100.0 * (std::log10(t) / 9.0 + 1.0);
}

double inverse_display(double s) { return std::pow(10.0, 9.0 * (s / 100.0 - 1.0)); }

double mean_multiplicative_error(const std::vector<double>& predicted,
                                 const std::vector<double>& observed,
                                 const std::vector<std::uint32_t>* mask) {
    if (predicted.size() != observed.size())
        throw std::invalid_argument("mismatched vector lengths");
    double total = 0.0;
    std::size_t count = 0;
    auto accumulate = [&](std::uint32_t i) {
        double p = predicted[i], o = observed[i];
        if (!(p > 0.0) || !(o > 0.0))
            throw std::invalid_argument("non-positive entry in compared positions");
        total += std::max(p / o, o / p);
        ++count;
    };
    if (mask) {
        for (std::uint32_t i : *mask) {
            if (i >= predicted.size()) throw std::out_of_range("mask index out of range");
            accumulate(i);
        }
    } else {
        for (std::uint32_t i = 0; i < predicted.size(); ++i) accumulate(i);
    }
    if (count == 0) throw std::invalid_argument("empty comparison set");
    return total / static_cast<double>(count);
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_rank_csv(const DepGraph& g, const RankVector& v, std::ostream& out) {
    std::vector<std::uint32_t> order(g.size());
    for (std::uint32_t i = 0; i < g.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (v.values[a] != v.values[b]) return v.values[a] > v.values[b];
        return g.record(a).name < g.record(b).name;
    });
    out << "package_name,raw_rank,display_score\n";
    for (std::uint32_t i : order) {
        out << g.record(i).name << ',' << format_double(v.values[i]) << ',';
        // display transform is undefined at 0 (possible when d=0)
        if (v.values[i] > 0.0) out << format_double(display_score(v.values[i]));
        out << '\n';
    }
}

}  // namespace depscope

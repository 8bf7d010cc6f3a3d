#include "depscope/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "depscope/kernels.hpp"

namespace depscope {

CalibrationResult grid_search(const DepGraph& g, double granularity, bool renormalize,
                              const RankParams& base) {
    if (!(granularity > 0.0) || granularity > 0.5)
        throw std::invalid_argument("granularity must be in (0, 0.5]");

    std::vector<std::uint32_t> mask;
    std::vector<double> observed_raw(g.size(), 0.0);
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        if (g.record(i).observed_display_score) {
            mask.push_back(i);
            observed_raw[i] = inverse_display(*g.record(i).observed_display_score);
        }
    }
    if (mask.empty()) throw std::invalid_argument("no observed display scores in snapshot");

    CalibrationResult res;
    res.granularity = granularity;
    res.compared_count = mask.size();
    const std::size_t steps = static_cast<std::size_t>(std::floor(1.0 / granularity + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i)
        res.grid.push_back(std::min(1.0, static_cast<double>(i) * granularity));

    const double inf = std::numeric_limits<double>::infinity();
    res.best_error = inf;
    res.surface.assign(res.grid.size(), std::vector<double>(res.grid.size(), inf));

    for (std::size_t ki = 0; ki < res.grid.size(); ++ki) {
        double row_best = inf;
        double row_best_d = res.grid[0];
        for (std::size_t di = 0; di < res.grid.size(); ++di) {
            RankParams p = base;
            p.kappa = res.grid[ki];
            p.d = res.grid[di];
            RankVector v = compute_rank(g, p);
            if (renormalize) {
                double total = kernels::active().sum(v.values.data(), v.values.size());
                if (total > 0.0)
                    kernels::active().scale(v.values.data(), 1.0 / total, v.values.size());
            }
            double err;
            try {
                err = mean_multiplicative_error(v.values, observed_raw, &mask);
            } catch (const std::invalid_argument&) {
                continue;  // zero rank mass on a compared package; cell stays +inf
            }
            res.surface[ki][di] = err;
            if (err < row_best) {
                row_best = err;
                row_best_d = res.grid[di];
            }
            if (err < res.best_error) {
                res.best_error = err;
                res.best_kappa = res.grid[ki];
                res.best_d = res.grid[di];
            }
        }
        res.ridge.emplace_back(res.grid[ki], row_best_d);
    }
    if (!std::isfinite(res.best_error))
        throw std::runtime_error("no grid cell produced a comparable rank vector");
    return res;
}

void write_surface_csv(const CalibrationResult& r, std::ostream& out) {
    out << "kappa,d,mme\n";
    for (std::size_t ki = 0; ki < r.grid.size(); ++ki) {
        for (std::size_t di = 0; di < r.grid.size(); ++di) {
            out << format_double(r.grid[ki]) << ',' << format_double(r.grid[di]) << ','
                << (std::isfinite(r.surface[ki][di]) ? format_double(r.surface[ki][di])
                                                     : std::string("inf"))
                << '\n';
        }
    }
}

}  // namespace depscope

#pragma once

#include <iosfwd>
#include <vector>

#include "depscope/rank.hpp"

namespace depscope {

struct CalibrationResult {
    double best_kappa = 0.0;
    double best_d = 0.0;
    double best_error = 0.0;
    std::vector<double> grid;  // shared axis for kappa and d
    /// surface[ki][di] = mean multiplicative error; +inf where the comparison
    /// is undefined (some compared rank entry is zero, e.g. d=0 cells).
    std::vector<std::vector<double>> surface;
    double granularity = 0.0;
    std::size_t compared_count = 0;
    /// For each kappa grid point, the d minimizing the error in that row.
    std::vector<std::pair<double, double>> ridge;
};

/// Grid search over (kappa, d) in {0, g, 2g, ..., 1}^2 fitting computed ranks
/// against the records' observed display scores (inverted to raw scale).
/// Ties broken by smaller kappa, then smaller d. renormalize rescales each
/// rank vector to sum 1 before comparison.
CalibrationResult grid_search(const DepGraph& g, double granularity, bool renormalize,
                              const RankParams& base = {});

/// CSV export: kappa,d,mme (one row per grid cell).
void write_surface_csv(const CalibrationResult& r, std::ostream& out);

}  // namespace depscope

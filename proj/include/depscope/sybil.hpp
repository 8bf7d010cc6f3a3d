#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "depscope/graph.hpp"

namespace depscope {

struct SybilCriteria {
    Timestamp cutoff_date = 1704067200;        // 2024-01-01T00:00:00Z
    std::uint32_t max_versions = 10;           // seed requires version_count < this
    std::int64_t dep_window = 28 * 86400;      // seconds
    double dep_window_fraction = 0.95;         // strictly more than
    std::uint32_t heavy_dependent_deps = 100;  // strictly more than
    double heavy_dependent_fraction = 0.80;    // strictly more than
    enum class Scope { tea_registered_only, all_packages };
    Scope scope = Scope::tea_registered_only;

    void validate() const;
};

enum class SybilLabel { benign, seed_sybil, propagated_sybil };

enum class SeedTrigger { dep_window, heavy_dependents, status };

enum class ClassAnnotation {
    create_next_app,
    wallet_chains,
    no_code,
    static_strings,
    package_clone,
    unpublished_or_private,
    security_holding,
    other
};

const char* to_string(SybilLabel l);
const char* to_string(SeedTrigger t);
const char* to_string(ClassAnnotation c);
ClassAnnotation class_annotation_from_string(const std::string& s);

struct SybilVerdict {
    std::uint32_t package = 0;
    SybilLabel label = SybilLabel::benign;
    std::optional<SeedTrigger> trigger;        // seeds only
    std::optional<std::uint32_t> origin;       // propagated only; smallest seed index
    std::optional<ClassAnnotation> class_annotation;  // manual-audit import only
};

/// Seed classification: in scope, created at/after cutoff, fewer than
/// max_versions versions, and at least one of the three criteria. The trigger
/// records the first satisfied criterion in order dep_window,
/// heavy_dependents, status.
std::vector<SybilVerdict> classify_seeds(const DepGraph& g, const SybilCriteria& c);

/// Extends seeds with every transitive dependent of a seed, labeled
/// propagated with the smallest reaching seed index as origin. Output covers
/// all packages in index order.
std::vector<SybilVerdict> propagate(const DepGraph& g,
                                    const std::vector<SybilVerdict>& seeds);

/// Uniform sample without replacement from sybil-labeled packages,
/// reproducible from seed, returned sorted by package name.
std::vector<std::uint32_t> sample_for_audit(const DepGraph& g,
                                            const std::vector<SybilVerdict>& verdicts,
                                            std::size_t sample_size, std::uint64_t seed);

/// Exact one-sided Clopper-Pearson upper bound: largest p with
/// P(Binomial(n, p) <= k) >= alpha.
double upper_confidence_bound(std::uint64_t n, std::uint64_t k, double alpha);

/// Count of sybil-labeled packages among top_n(g, n_top, mode).
std::size_t overlap_with_top(const DepGraph& g, const std::vector<SybilVerdict>& verdicts,
                             std::size_t n_top, DepGraph::TopMode mode);

/// CSV export: name,label,trigger,origin,class_annotation.
void write_verdicts_csv(const DepGraph& g, const std::vector<SybilVerdict>& verdicts,
                        std::ostream& out);

/// CSV import (name,class_annotation) merging annotations into verdicts.
/// Unknown names throw.
void import_annotations_csv(const DepGraph& g, std::vector<SybilVerdict>& verdicts,
                            std::istream& in);

}  // namespace depscope

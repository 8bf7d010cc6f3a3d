#include "depscope/sybil.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace depscope {

void SybilCriteria::validate() const {
    if (!(dep_window_fraction > 0.0) || dep_window_fraction > 1.0)
        throw std::invalid_argument("dep_window_fraction must be in (0,1]");
    if (!(heavy_dependent_fraction > 0.0) || heavy_dependent_fraction > 1.0)
        throw std::invalid_argument("heavy_dependent_fraction must be in (0,1]");
    if (dep_window <= 0) throw std::invalid_argument("dep_window must be positive");
    if (max_versions == 0) throw std::invalid_argument("max_versions must be positive");
    if (heavy_dependent_deps == 0)
        throw std::invalid_argument("heavy_dependent_deps must be positive");
}

const char* to_string(SybilLabel l) {
    switch (l) {
        case SybilLabel::benign: return "benign";
        case SybilLabel::seed_sybil: return "seed_sybil";
        case SybilLabel::propagated_sybil: return "propagated_sybil";
    }
    return "benign";
}

const char* to_string(SeedTrigger t) {
    switch (t) {
        case SeedTrigger::dep_window: return "dep_window";
        case SeedTrigger::heavy_dependents: return "heavy_dependents";
        case SeedTrigger::status: return "status";
    }
    return "dep_window";
}

const char* to_string(ClassAnnotation c) {
    switch (c) {
        case ClassAnnotation::create_next_app: return "create_next_app";
        case ClassAnnotation::wallet_chains: return "wallet_chains";
        case ClassAnnotation::no_code: return "no_code";
        case ClassAnnotation::static_strings: return "static_strings";
        case ClassAnnotation::package_clone: return "package_clone";
        case ClassAnnotation::unpublished_or_private: return "unpublished_or_private";
        case ClassAnnotation::security_holding: return "security_holding";
        case ClassAnnotation::other: return "other";
    }
    return "other";
}

ClassAnnotation class_annotation_from_string(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(ClassAnnotation::other); ++i) {
        auto c = static_cast<ClassAnnotation>(i);
        if (s == to_string(c)) return c;
    }
    throw std::invalid_argument("unknown class annotation: " + s);
}

std::vector<SybilVerdict> classify_seeds(const DepGraph& g, const SybilCriteria& c) {
    c.validate();
    std::vector<SybilVerdict> seeds;
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        const PackageRecord& r = g.record(i);
        if (c.scope == SybilCriteria::Scope::tea_registered_only && !r.tea_registered)
            continue;
        if (r.created_at < c.cutoff_date) continue;
        if (r.version_count >= c.max_versions) continue;

        std::optional<SeedTrigger> trigger;

        // criterion 1: most transitive dependencies created close to this package
        auto deps = g.transitive_closure(i, Direction::dependencies);
        if (!deps.empty()) {
            std::size_t close = 0;
            for (std::uint32_t d : deps) {
                if (std::llabs(g.record(d).created_at - r.created_at) <= c.dep_window)
                    ++close;
            }
            if (static_cast<double>(close) >
                c.dep_window_fraction * static_cast<double>(deps.size()))
                trigger = SeedTrigger::dep_window;
        }

        // criterion 2: most direct dependents carry very many dependencies
        if (!trigger) {
            const auto& dependents = g.reverse(i);
            if (!dependents.empty()) {
                std::size_t heavy = 0;
                for (std::uint32_t d : dependents) {
                    if (g.out_degree(d) > c.heavy_dependent_deps) ++heavy;
                }
                if (static_cast<double>(heavy) >
                    c.heavy_dependent_fraction * static_cast<double>(dependents.size()))
                    trigger = SeedTrigger::heavy_dependents;
            }
        }

        // criterion 3: removed from the registry
        if (!trigger && (r.status == PackageStatus::unpublished ||
                         r.status == PackageStatus::security_holding))
            trigger = SeedTrigger::status;

        if (trigger)
            seeds.push_back({i, SybilLabel::seed_sybil, trigger, std::nullopt, std::nullopt});
    }
    return seeds;
}

std::vector<SybilVerdict> propagate(const DepGraph& g,
                                    const std::vector<SybilVerdict>& seeds) {
    std::vector<SybilVerdict> out(g.size());
    for (std::uint32_t i = 0; i < g.size(); ++i) out[i].package = i;
    for (const auto& s : seeds) out[s.package] = s;

    std::vector<std::uint32_t> seed_idx;
    for (const auto& s : seeds) seed_idx.push_back(s.package);
    std::sort(seed_idx.begin(), seed_idx.end());

    // Ascending seed order makes the recorded origin the smallest reaching seed.
    for (std::uint32_t s : seed_idx) {
        for (std::uint32_t dep : g.transitive_closure(s, Direction::dependents)) {
            if (out[dep].label == SybilLabel::benign) {
                out[dep].label = SybilLabel::propagated_sybil;
                out[dep].origin = s;
            }
        }
    }
    return out;
}

std::vector<std::uint32_t> sample_for_audit(const DepGraph& g,
                                            const std::vector<SybilVerdict>& verdicts,
                                            std::size_t sample_size, std::uint64_t seed) {
    std::vector<std::uint32_t> pool;
    for (const auto& v : verdicts)
        if (v.label != SybilLabel::benign) pool.push_back(v.package);
    if (sample_size > pool.size())
        throw std::invalid_argument("sample_size exceeds sybil-labeled package count");

    std::sort(pool.begin(), pool.end(), [&](std::uint32_t a, std::uint32_t b) {
        return g.record(a).name < g.record(b).name;
    });
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < sample_size; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(sample_size);
    std::sort(pool.begin(), pool.end(), [&](std::uint32_t a, std::uint32_t b) {
        return g.record(a).name < g.record(b).name;
    });
    return pool;
}

namespace {

// log P(Binomial(n, p) <= k), stable summation in log space
double log_binom_cdf(std::uint64_t n, std::uint64_t k, double p) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return k >= n ? 0.0 : -std::numeric_limits<double>::infinity();
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(k + 1);
    for (std::uint64_t j = 0; j <= k; ++j) {
        double lc = std::lgamma(static_cast<double>(n) + 1.0) -
                    std::lgamma(static_cast<double>(j) + 1.0) -
                    std::lgamma(static_cast<double>(n - j) + 1.0);
        terms[j] = lc + static_cast<double>(j) * lp + static_cast<double>(n - j) * lq;
        max_term = std::max(max_term, terms[j]);
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - max_term);
    return max_term + std::log(acc);
}

}  // namespace

double upper_confidence_bound(std::uint64_t n, std::uint64_t k, double alpha) {
    if (n == 0) throw std::invalid_argument("n must be positive");
    if (k > n) throw std::invalid_argument("k must not exceed n");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("alpha must be in (0,1)");
    if (k == n) return 1.0;

    const double log_alpha = std::log(alpha);
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (log_binom_cdf(n, k, mid) >= log_alpha)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

std::size_t overlap_with_top(const DepGraph& g, const std::vector<SybilVerdict>& verdicts,
                             std::size_t n_top, DepGraph::TopMode mode) {
    if (verdicts.size() != g.size())
        throw std::invalid_argument("verdicts must cover the graph");
    std::size_t overlap = 0;
    for (const auto& [pkg, count] : g.top_n(n_top, mode)) {
        (void)count;
        if (verdicts[pkg].label != SybilLabel::benign) ++overlap;
    }
    return overlap;
}

void write_verdicts_csv(const DepGraph& g, const std::vector<SybilVerdict>& verdicts,
                        std::ostream& out) {
    std::vector<std::uint32_t> order;
    for (const auto& v : verdicts) order.push_back(v.package);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return g.record(a).name < g.record(b).name;
    });
    std::vector<const SybilVerdict*> by_pkg(g.size(), nullptr);
    for (const auto& v : verdicts) by_pkg[v.package] = &v;

    out << "name,label,trigger,origin,class_annotation\n";
    for (std::uint32_t i : order) {
        const SybilVerdict& v = *by_pkg[i];
        out << g.record(i).name << ',' << to_string(v.label) << ',';
        if (v.trigger) out << to_string(*v.trigger);
        out << ',';
        if (v.origin) out << g.record(*v.origin).name;
        out << ',';
        if (v.class_annotation) out << to_string(*v.class_annotation);
        out << '\n';
    }
}

void import_annotations_csv(const DepGraph& g, std::vector<SybilVerdict>& verdicts,
                            std::istream& in) {
    std::vector<SybilVerdict*> by_pkg(g.size(), nullptr);
    for (auto& v : verdicts) by_pkg[v.package] = &v;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1 && line == "name,class_annotation") continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("annotation line " + std::to_string(line_no) +
                                        ": expected name,class_annotation");
        std::string name = line.substr(0, comma);
        std::int64_t idx = g.find(name);
        if (idx < 0)
            throw std::invalid_argument("annotation line " + std::to_string(line_no) +
                                        ": unknown package " + name);
        if (!by_pkg[idx])
            throw std::invalid_argument("annotation for package without verdict: " + name);
        by_pkg[idx]->class_annotation =
            class_annotation_from_string(line.substr(comma + 1));
    }
}

}  // namespace depscope

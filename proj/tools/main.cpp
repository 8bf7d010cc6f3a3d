#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "depscope/attack.hpp"
#include "depscope/calibrate.hpp"
#include "depscope/graph.hpp"
#include "depscope/kernels.hpp"
#include "depscope/rank.hpp"
#include "depscope/snapshot.hpp"
#include "depscope/sybil.hpp"

namespace {

using namespace depscope;

constexpr std::uint64_t kDefaultSeed = 20240101;

enum class Format { csv, json_lines, human };

std::map<std::string, Format> format_names{
    {"csv", Format::csv}, {"json-lines", Format::json_lines}, {"human", Format::human}};

struct OutputTarget {
    std::string path;
    std::ofstream file;
    std::ostream& stream() {
        if (path.empty()) return std::cout;
        if (!file.is_open()) {
            file.open(path, std::ios::binary | std::ios::trunc);
            if (!file) throw std::runtime_error("cannot open output file: " + path);
        }
        return file;
    }
};

Snapshot load_from(const std::string& path, bool strict) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    return load_snapshot(in, strict);
}

void emit_rank(const DepGraph& g, const RankVector& v, Format fmt, std::ostream& out) {
    std::vector<std::uint32_t> order(g.size());
    for (std::uint32_t i = 0; i < g.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (v.values[a] != v.values[b]) return v.values[a] > v.values[b];
        return g.record(a).name < g.record(b).name;
    });
    switch (fmt) {
        case Format::csv:
            write_rank_csv(g, v, out);
            break;
        case Format::json_lines:
            for (std::uint32_t i : order) {
                out << "{\"name\":\"" << g.record(i).name
                    << "\",\"raw_rank\":" << format_double(v.values[i])
                    << ",\"display_score\":"
                    << (v.values[i] > 0.0 ? format_double(display_score(v.values[i]))
                                          : std::string("null"))
                    << "}\n";
            }
            break;
        case Format::human:
            out << "package                          raw_rank      display\n";
            for (std::uint32_t i : order) {
                char buf[128];
                std::snprintf(buf, sizeof(buf), "%-32s %-13.6g %.2f\n",
                              g.record(i).name.c_str(), v.values[i],
                              v.values[i] > 0.0 ? display_score(v.values[i]) : 0.0);
                out << buf;
            }
            break;
    }
}

int run(int argc, char** argv) {
    CLI::App app{"dependency-graph ranking, calibration, sybil detection and attack simulation"};
    app.require_subcommand(1);

    // shared options, attached per subcommand
    std::string input, output;
    RankParams params;
    std::uint64_t seed = kDefaultSeed;
    Format fmt = Format::csv;
    bool strict = false;
    bool no_simd = false;

    auto add_common = [&](CLI::App* sub, bool with_rank) {
        sub->add_option("--input", input, "snapshot file (newline-delimited records)");
        sub->add_option("--output", output, "output file (default: stdout)");
        sub->add_option("--seed", seed, "RNG seed (never wall-clock)")
            ->default_val(kDefaultSeed);
        sub->add_option("--format", fmt, "output format")
            ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case))
            ->default_str("csv");
        sub->add_flag("--strict", strict, "reject malformed records and edges");
        sub->add_flag("--no-simd", no_simd, "force scalar kernels");
        if (with_rank) {
            sub->add_option("--kappa", params.kappa, "self-edge weight in [0,1]")
                ->default_val(0.0);
            sub->add_option("--d", params.d, "decay / restart factor in [0,1]")
                ->default_val(0.85);
            sub->add_option("--tol", params.tol, "L1 convergence threshold")
                ->default_val(1e-10);
            sub->add_option("--max-iters", params.max_iters, "iteration cap")
                ->default_val(200);
        }
    };

    auto* rank_cmd = app.add_subcommand("rank", "compute ranks and display scores");
    add_common(rank_cmd, true);
    rank_cmd->get_option("--input")->required();

    auto* cal_cmd = app.add_subcommand("calibrate", "grid search (kappa, d) against observed scores");
    double granularity = 0.05;
    bool renormalize = false;
    add_common(cal_cmd, true);
    cal_cmd->get_option("--input")->required();
    cal_cmd->add_option("--granularity", granularity, "grid step in (0, 0.5]")
        ->default_val(0.05);
    cal_cmd->add_flag("--renormalize", renormalize, "rescale rank vectors to sum 1 before comparison");

    auto* detect_cmd = app.add_subcommand("detect", "sybil classification and summary");
    SybilCriteria criteria;
    std::string cutoff_date = "2024-01-01T00:00:00Z";
    double dep_window_days = 28.0;
    std::string scope = "tea";
    std::string annotations;
    std::size_t top = 1000;
    add_common(detect_cmd, false);
    detect_cmd->get_option("--input")->required();
    detect_cmd->add_option("--cutoff-date", cutoff_date, "seed date gate (ISO-8601 Z)")
        ->default_str("2024-01-01T00:00:00Z");
    detect_cmd->add_option("--dep-window-days", dep_window_days, "criterion-1 window in days")
        ->default_val(28.0);
    detect_cmd->add_option("--max-versions", criteria.max_versions, "seed requires fewer versions than this")
        ->default_val(10);
    detect_cmd->add_option("--scope", scope, "tea | all")->default_str("tea");
    detect_cmd->add_option("--annotations", annotations, "manual-audit annotation CSV to merge");
    detect_cmd->add_option("--top", top, "top-N size for overlap reporting")->default_val(1000);

    auto* attack_cmd = app.add_subcommand("attack", "apply an attack plan, report flags and uplift");
    std::string plan_path, provenance_path;
    SpamThresholds thresholds{SIZE_MAX, SIZE_MAX, 28 * 86400};
    add_common(attack_cmd, true);
    attack_cmd->get_option("--input")->required();
    attack_cmd->add_option("--plan", plan_path, "attack plan file (key = value)")->required();
    attack_cmd->add_option("--provenance", provenance_path, "write injected names here");
    attack_cmd->add_option("--width-limit", thresholds.width_limit, "spam width threshold");
    attack_cmd->add_option("--tree-limit", thresholds.tree_limit, "spam tree threshold");
    attack_cmd->add_option("--window", thresholds.window, "spam observation window, seconds")
        ->default_val(28 * 86400);

    auto* audit_cmd = app.add_subcommand("audit", "sample sybil packages / confidence bound");
    std::size_t audit_n = 0, audit_failures = 0, sample_size = 0;
    double alpha = 0.05;
    add_common(audit_cmd, false);
    audit_cmd->add_option("--n", audit_n, "audit sample size");
    audit_cmd->add_option("--failures", audit_failures, "observed misclassifications")
        ->default_val(0);
    audit_cmd->add_option("--alpha", alpha, "significance level")->default_val(0.05);
    audit_cmd->add_option("--sample-size", sample_size, "draw a sample from --input's sybil set");

    auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic snapshot");
    SyntheticSpec spec;
    std::string model = "random_dag";
    std::string date_from = "2020-01-01T00:00:00Z", date_to = "2023-12-31T00:00:00Z";
    add_common(gen_cmd, false);
    gen_cmd->add_option("--n", spec.n, "package count")->required();
    gen_cmd->add_option("--model", model, "random_dag | preferential_attachment")
        ->default_str("random_dag");
    gen_cmd->add_option("--edge-param", spec.edge_param, "mean dependency count")
        ->default_val(2.0);
    gen_cmd->add_option("--date-from", date_from, "earliest creation date")
        ->default_str(date_from);
    gen_cmd->add_option("--date-to", date_to, "latest creation date")->default_str(date_to);
    gen_cmd->add_option("--tea-fraction", spec.tea_fraction, "fraction registered on tea")
        ->default_val(1.0);

    auto* validate_cmd = app.add_subcommand("validate", "lint a snapshot file");
    add_common(validate_cmd, false);
    validate_cmd->get_option("--input")->required();

    CLI11_PARSE(app, argc, argv);

    kernels::select(no_simd ? kernels::Backend::scalar : kernels::Backend::auto_detect);

    OutputTarget out{output, {}};

    if (rank_cmd->parsed()) {
        Snapshot s = load_from(input, strict);
        DepGraph g = DepGraph::build(std::move(s.records), strict);
        RankVector v = compute_rank(g, params);
        emit_rank(g, v, fmt, out.stream());
        if (!v.converged)
            std::cerr << "warning: not converged after " << v.iterations_used
                      << " iterations (residual " << v.final_residual << ")\n";
        return 0;
    }

    if (cal_cmd->parsed()) {
        Snapshot s = load_from(input, strict);
        DepGraph g = DepGraph::build(std::move(s.records), strict);
        CalibrationResult r = grid_search(g, granularity, renormalize, params);
        write_surface_csv(r, out.stream());
        std::ostream& info = output.empty() ? std::cerr : std::cout;
        info << "best_kappa=" << format_double(r.best_kappa)
             << " best_d=" << format_double(r.best_d)
             << " best_error=" << format_double(r.best_error)
             << " compared=" << r.compared_count << "\n";
        for (const auto& [k, d] : r.ridge)
            info << "ridge kappa=" << format_double(k) << " d=" << format_double(d) << "\n";
        return 0;
    }

    if (detect_cmd->parsed()) {
        criteria.cutoff_date = parse_timestamp(cutoff_date);
        criteria.dep_window = static_cast<std::int64_t>(dep_window_days * 86400.0);
        if (scope == "all")
            criteria.scope = SybilCriteria::Scope::all_packages;
        else if (scope != "tea")
            throw std::invalid_argument("--scope must be 'tea' or 'all'");

        Snapshot s = load_from(input, strict);
        DepGraph g = DepGraph::build(std::move(s.records), strict);
        auto seeds = classify_seeds(g, criteria);
        auto verdicts = propagate(g, seeds);
        if (!annotations.empty()) {
            std::ifstream ann(annotations);
            if (!ann) throw std::invalid_argument("cannot open annotations: " + annotations);
            import_annotations_csv(g, verdicts, ann);
        }
        write_verdicts_csv(g, verdicts, out.stream());

        std::size_t total_sybil = seeds.size();
        for (const auto& v : verdicts)
            if (v.label == SybilLabel::propagated_sybil) ++total_sybil;
        double pct = g.size() == 0 ? 0.0
                                   : 100.0 * static_cast<double>(total_sybil) /
                                         static_cast<double>(g.size());
        char pct_buf[32];
        std::snprintf(pct_buf, sizeof(pct_buf), "%.2f", pct);
        std::ostream& info = output.empty() ? std::cerr : std::cout;
        info << "seeds=" << seeds.size() << " propagated=" << (total_sybil - seeds.size())
             << " total=" << total_sybil << " (" << pct_buf << "% of " << g.size()
             << " packages)\n";
        if (g.size() > 0) {
            info << "top-" << top << " direct overlap: "
                 << overlap_with_top(g, verdicts, top, DepGraph::TopMode::direct) << "\n";
            info << "top-" << top << " transitive overlap: "
                 << overlap_with_top(g, verdicts, top, DepGraph::TopMode::transitive) << "\n";
        }
        return 0;
    }

    if (attack_cmd->parsed()) {
        Snapshot s = load_from(input, strict);
        std::string captured_at = s.captured_at;
        DepGraph before = DepGraph::build(std::move(s.records), strict);
        std::ifstream plan_in(plan_path);
        if (!plan_in) throw std::invalid_argument("cannot open plan file: " + plan_path);
        AttackPlan plan = parse_attack_plan(plan_in);
        if (plan.seed == 0) plan.seed = seed;

        AttackOutcome outcome = apply_attack(before, plan);
        if (!provenance_path.empty()) {
            std::ofstream prov(provenance_path, std::ios::binary | std::ios::trunc);
            for (const auto& name : outcome.injected) prov << name << '\n';
        }
        Snapshot after_snap;
        after_snap.captured_at = captured_at;
        after_snap.source = "attack:" + plan.target;
        after_snap.records = outcome.graph.records();
        write_snapshot(after_snap, out.stream());

        auto flagged = flag_spam(outcome.graph, thresholds);
        UpliftResult uplift = rank_uplift(before, outcome.graph, plan.target, params);
        std::ostream& info = output.empty() ? std::cerr : std::cout;
        info << "injected=" << outcome.injected.size() << " flagged=" << flagged.size()
             << "\n";
        for (const auto& name : flagged) info << "flagged " << name << "\n";
        info << "uplift raw=" << format_double(uplift.raw_delta)
             << " display=" << format_double(uplift.display_delta) << "\n";
        if (!uplift.converged_before || !uplift.converged_after)
            std::cerr << "warning: rank computation did not converge\n";
        return 0;
    }

    if (audit_cmd->parsed()) {
        std::ostream& o = out.stream();
        if (!input.empty() && sample_size > 0) {
            Snapshot s = load_from(input, strict);
            DepGraph g = DepGraph::build(std::move(s.records), strict);
            auto verdicts = propagate(g, classify_seeds(g, SybilCriteria{}));
            for (std::uint32_t i : sample_for_audit(g, verdicts, sample_size, seed))
                o << g.record(i).name << '\n';
        }
        if (audit_n > 0) {
            double bound = upper_confidence_bound(audit_n, audit_failures, alpha);
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6f (%.2f%%)", bound, bound * 100.0);
            o << "n=" << audit_n << " failures=" << audit_failures << " alpha="
              << format_double(alpha) << "\n";
            o << "upper_bound=" << buf << "\n";
            if (bound <= 0.03) o << "consistent with <=3% false-positive claim\n";
        }
        return 0;
    }

    if (gen_cmd->parsed()) {
        if (model == "random_dag")
            spec.model = SyntheticSpec::Model::random_dag;
        else if (model == "preferential_attachment")
            spec.model = SyntheticSpec::Model::preferential_attachment;
        else
            throw std::invalid_argument("--model must be random_dag or preferential_attachment");
        spec.date_from = parse_timestamp(date_from);
        spec.date_to = parse_timestamp(date_to);
        Snapshot s = generate_synthetic(spec, seed);
        write_snapshot(s, out.stream());
        return 0;
    }

    if (validate_cmd->parsed()) {
        std::ifstream in(input, std::ios::binary);
        if (!in) throw std::invalid_argument("cannot open input file: " + input);
        LoadReport report;
        Snapshot s = load_snapshot(in, false, &report);
        std::size_t record_count = s.records.size();
        DepGraph::BuildStats stats;
        DepGraph::build(std::move(s.records), false, &stats);
        std::ostream& o = out.stream();
        for (const auto& issue : report.issues)
            o << "line " << issue.line << ": " << issue.message << "\n";
        o << "records=" << record_count << " malformed=" << report.issues.size()
          << " dropped_edges=" << stats.total_dropped() << "\n";
        return report.issues.empty() ? 0 : 1;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}

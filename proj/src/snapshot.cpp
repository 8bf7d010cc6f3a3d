#include "depscope/snapshot.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace depscope {

namespace {

PackageRecord parse_record(const nlohmann::json& j) {
    PackageRecord r;
    if (!j.contains("name") || !j["name"].is_string() || j["name"].get<std::string>().empty())
        throw std::invalid_argument("missing or invalid 'name'");
    r.name = j["name"].get<std::string>();
    if (!j.contains("created")) throw std::invalid_argument("missing 'created'");
    r.created_at = parse_timestamp(j["created"].get<std::string>());
    if (j.contains("registry")) r.registry = registry_from_string(j["registry"]);
    if (j.contains("versions")) {
        if (!j["versions"].is_number_unsigned())
            throw std::invalid_argument("'versions' must be a non-negative integer");
        r.version_count = j["versions"].get<std::uint32_t>();
    }
    if (j.contains("status")) r.status = status_from_string(j["status"]);
    if (j.contains("tea_registered")) r.tea_registered = j["tea_registered"].get<bool>();
    if (j.contains("deps")) {
        std::unordered_set<std::string> seen;
        for (const auto& d : j["deps"]) {
            std::string dep = d.get<std::string>();
            if (seen.insert(dep).second && dep != r.name)
                r.dependencies.push_back(dep);
        }
    }
    if (j.contains("observed_score")) {
        double s = j["observed_score"].get<double>();
        if (s < 0.0 || s > 100.0)
            throw std::invalid_argument("'observed_score' must lie in [0, 100]");
        r.observed_display_score = s;
    }
    return r;
}

}  // namespace

Snapshot load_snapshot(std::istream& in, bool strict, LoadReport* report) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty snapshot: missing header");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed header: ") + e.what());
    }
    if (!header.contains("schema_version"))
        throw std::invalid_argument("malformed header: missing schema_version");
    Snapshot s;
    s.schema_version = header["schema_version"].get<int>();
    if (s.schema_version != 1)
        throw std::invalid_argument("unsupported schema_version " +
                                    std::to_string(s.schema_version));
    if (header.contains("captured_at")) s.captured_at = header["captured_at"];
    if (header.contains("source")) s.source = header["source"];

    LoadReport local;
    std::unordered_set<std::string> names;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            PackageRecord r = parse_record(nlohmann::json::parse(line));
            if (!names.insert(r.name).second)
                throw std::invalid_argument("duplicate package name: " + r.name);
            s.records.push_back(std::move(r));
        } catch (const std::exception& e) {
            local.issues.push_back({line_no, e.what()});
        }
    }
    for (const auto& issue : local.issues) {
        // duplicate names violate the snapshot invariant regardless of mode
        if (issue.message.rfind("duplicate package name", 0) == 0)
            throw std::invalid_argument("line " + std::to_string(issue.line) + ": " +
                                        issue.message);
    }
    if (strict && !local.issues.empty())
        throw std::invalid_argument("line " + std::to_string(local.issues.front().line) +
                                    ": " + local.issues.front().message);
    if (report) *report = std::move(local);
    return s;
}

void write_snapshot(const Snapshot& s, std::ostream& out) {
    nlohmann::ordered_json header;
    header["schema_version"] = s.schema_version;
    header["captured_at"] = s.captured_at;
    header["source"] = s.source;
    out << header.dump() << '\n';

    std::vector<const PackageRecord*> order;
    order.reserve(s.records.size());
    for (const auto& r : s.records) order.push_back(&r);
    std::sort(order.begin(), order.end(),
              [](const PackageRecord* a, const PackageRecord* b) { return a->name < b->name; });

    for (const PackageRecord* r : order) {
        nlohmann::ordered_json j;
        j["name"] = r->name;
        j["registry"] = to_string(r->registry);
        j["created"] = format_timestamp(r->created_at);
        j["versions"] = r->version_count;
        j["status"] = to_string(r->status);
        j["tea_registered"] = r->tea_registered;
        auto deps = r->dependencies;
        std::sort(deps.begin(), deps.end());
        j["deps"] = deps;
        if (r->observed_display_score) j["observed_score"] = *r->observed_display_score;
        out << j.dump() << '\n';
    }
}

void SyntheticSpec::validate() const {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(edge_param >= 0.0)) throw std::invalid_argument("edge_param must be >= 0");
    if (date_to < date_from) throw std::invalid_argument("date range inverted");
    if (tea_fraction < 0.0 || tea_fraction > 1.0)
        throw std::invalid_argument("tea_fraction must be in [0,1]");
    if (name_prefix.empty()) throw std::invalid_argument("name_prefix must be non-empty");
}

Snapshot generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    spec.validate();
    std::mt19937_64 rng(seed);
    std::poisson_distribution<std::size_t> deg_dist(spec.edge_param);
    std::uniform_int_distribution<Timestamp> date_dist(spec.date_from, spec.date_to);
    std::uniform_int_distribution<std::uint32_t> version_dist(1, 25);
    std::bernoulli_distribution tea_dist(spec.tea_fraction);

    int digits = 1;
    for (std::size_t v = spec.n; v >= 10; v /= 10) ++digits;

    Snapshot s;
    s.source = "synthetic";
    s.records.resize(spec.n);
    // Preferential attachment draws targets from this pool, where each node
    // appears once per incoming edge plus once as a base weight.
    std::vector<std::uint32_t> pa_pool;

    for (std::size_t i = 0; i < spec.n; ++i) {
        PackageRecord& r = s.records[i];
        std::string num = std::to_string(i);
        r.name = spec.name_prefix + std::string(digits - num.size(), '0') + num;
        r.created_at = date_dist(rng);
        r.version_count = version_dist(rng);
        r.tea_registered = tea_dist(rng);

        // edges only toward lower indices, so the graph is a DAG
        if (i > 0 && spec.edge_param > 0.0) {
            std::size_t want = std::min(i, deg_dist(rng));
            std::unordered_set<std::uint32_t> targets;
            if (spec.model == SyntheticSpec::Model::random_dag) {
                std::uniform_int_distribution<std::uint32_t> pick(
                    0, static_cast<std::uint32_t>(i - 1));
                while (targets.size() < want) targets.insert(pick(rng));
            } else {
                std::uniform_int_distribution<std::size_t> pick(0, pa_pool.size() - 1);
                std::size_t attempts = 0;
                while (targets.size() < want && attempts < 50 * want + 50) {
                    targets.insert(pa_pool[pick(rng)]);
                    ++attempts;
                }
            }
            r.dependencies.reserve(targets.size());
            std::vector<std::uint32_t> sorted(targets.begin(), targets.end());
            std::sort(sorted.begin(), sorted.end());
            for (std::uint32_t t : sorted) {
                r.dependencies.push_back(s.records[t].name);
                pa_pool.push_back(t);
            }
        }
        pa_pool.push_back(static_cast<std::uint32_t>(i));
    }
    return s;
}

}  // namespace depscope

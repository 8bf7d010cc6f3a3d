#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "depscope/record.hpp"

namespace depscope {

struct Snapshot {
    int schema_version = 1;
    std::string captured_at = "1970-01-01T00:00:00Z";
    std::string source = "unknown";
    std::vector<PackageRecord> records;
};

struct LoadReport {
    struct Issue {
        std::size_t line;
        std::string message;
    };
    std::vector<Issue> issues;
};

/// Newline-delimited records, one JSON object per line, preceded by a header
/// object carrying schema_version/captured_at/source. Malformed record lines
/// are collected into the report (and rejected wholesale in strict mode).
Snapshot load_snapshot(std::istream& in, bool strict = false, LoadReport* report = nullptr);

/// Canonical serialization: records sorted by name, fixed field order,
/// timestamps ISO-8601 UTC. write(load(write(s))) == write(s).
void write_snapshot(const Snapshot& s, std::ostream& out);

struct SyntheticSpec {
    std::size_t n = 100;
    enum class Model { random_dag, preferential_attachment };
    Model model = Model::random_dag;
    double edge_param = 2.0;  // mean dependency count per package
    Timestamp date_from = 1577836800;  // 2020-01-01
    Timestamp date_to = 1703980800;    // 2023-12-31
    double tea_fraction = 1.0;
    std::string name_prefix = "pkg-";

    void validate() const;
};

/// Deterministic synthetic snapshot; edges always point from higher to lower
/// index, so the result is acyclic in both models.
Snapshot generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace depscope

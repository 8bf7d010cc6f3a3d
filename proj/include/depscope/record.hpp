#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace depscope {

enum class Registry { crates, npm, pkgx, homebrew, pypi, apt_get, rubygems, other };

enum class PackageStatus { active, unpublished, security_holding };

const char* to_string(Registry r);
const char* to_string(PackageStatus s);
Registry registry_from_string(const std::string& s);
PackageStatus status_from_string(const std::string& s);

/// Unix timestamp, seconds, UTC.
using Timestamp = std::int64_t;

// "YYYY-MM-DDThh:mm:ssZ" <-> seconds since epoch. Throws std::invalid_argument
// on malformed input.
Timestamp parse_timestamp(const std::string& iso);
std::string format_timestamp(Timestamp t);

struct PackageRecord {
    std::string name;
    Registry registry = Registry::npm;
    Timestamp created_at = 0;
    std::uint32_t version_count = 0;
    PackageStatus status = PackageStatus::active;
    bool tea_registered = false;
    std::vector<std::string> dependencies;
    std::optional<double> observed_display_score;
};

}  // namespace depscope

#include "depscope/record.hpp"

#include <cstdio>
#include <stdexcept>

namespace depscope {

const char* to_string(Registry r) {
    switch (r) {
        case Registry::crates: return "crates";
        case Registry::npm: return "npm";
        case Registry::pkgx: return "pkgx";
        case Registry::homebrew: return "homebrew";
        case Registry::pypi: return "pypi";
        case Registry::apt_get: return "apt-get";
        case Registry::rubygems: return "rubygems";
        case Registry::other: return "other";
    }
    return "other";
}

const char* to_string(PackageStatus s) {
    switch (s) {
        case PackageStatus::active: return "active";
        case PackageStatus::unpublished: return "unpublished";
        case PackageStatus::security_holding: return "security_holding";
    }
    return "active";
}

Registry registry_from_string(const std::string& s) {
    if (s == "crates") return Registry::crates;
    if (s == "npm") return Registry::npm;
    if (s == "pkgx") return Registry::pkgx;
    if (s == "homebrew") return Registry::homebrew;
    if (s == "pypi") return Registry::pypi;
    if (s == "apt-get") return Registry::apt_get;
    if (s == "rubygems") return Registry::rubygems;
    if (s == "other") return Registry::other;
    throw std::invalid_argument("unknown registry: " + s);
}

PackageStatus status_from_string(const std::string& s) {
    if (s == "active") return PackageStatus::active;
    if (s == "unpublished") return PackageStatus::unpublished;
    if (s == "security_holding") return PackageStatus::security_holding;
    throw std::invalid_argument("unknown status: " + s);
}

namespace {

// Hinnant's civil-date algorithms; avoids timezone-dependent mktime.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

}  // namespace

Timestamp parse_timestamp(const std::string& iso) {
    int y, mo, d, h, mi, s;
    char z;
    if (std::sscanf(iso.c_str(), "%d-%d-%dT%d:%d:%d%c", &y, &mo, &d, &h, &mi, &s, &z) != 7 ||
        z != 'Z' || mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 ||
        mi > 59 || s < 0 || s > 60) {
        throw std::invalid_argument("malformed timestamp: " + iso);
    }
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_timestamp(Timestamp t) {
    std::int64_t days = t / 86400;
    std::int64_t rem = t % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                  static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

}  // namespace depscope

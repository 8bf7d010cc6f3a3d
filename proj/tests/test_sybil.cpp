#include <doctest.h>

#include <set>
#include <sstream>

#include "depscope/sybil.hpp"
#include "helpers.hpp"

using namespace depscope;
using namespace depscope::testing;

namespace {

constexpr Timestamp kJan2024 = 1704067200;
constexpr Timestamp kMar2024 = 1709251200;  // 2024-03-01
constexpr Timestamp kDay = 86400;

std::set<std::string> seed_names(const DepGraph& g, const std::vector<SybilVerdict>& vs) {
    std::set<std::string> out;
    for (const auto& v : vs)
        if (v.label == SybilLabel::seed_sybil) out.insert(g.record(v.package).name);
    return out;
}

}  // namespace

TEST_CASE("date gate: pre-2024 packages are never seeds") {
    // otherwise extreme: unpublished, 1 version, tea registered
    auto g = graph_from({make_record("old", {}, parse_timestamp("2023-06-01T00:00:00Z"), 1,
                                     PackageStatus::unpublished)});
    auto seeds = classify_seeds(g, {});
    CHECK(seeds.empty());
}

TEST_CASE("status criterion") {
    auto g = graph_from({make_record("s", {}, kMar2024, 3, PackageStatus::unpublished)});
    auto seeds = classify_seeds(g, {});
    REQUIRE(seeds.size() == 1);
    CHECK(seeds[0].trigger == SeedTrigger::status);

    auto g2 = graph_from({make_record("s", {}, kMar2024, 3, PackageStatus::security_holding)});
    CHECK(classify_seeds(g2, {}).size() == 1);

    // active status alone is not enough
    auto g3 = graph_from({make_record("s", {}, kMar2024, 3, PackageStatus::active)});
    CHECK(classify_seeds(g3, {}).empty());
}

TEST_CASE("version gate is strict: 10 versions blocks, 9 passes") {
    auto mk = [](std::uint32_t versions) {
        return graph_from(
            {make_record("s", {}, kMar2024, versions, PackageStatus::unpublished)});
    };
    CHECK(classify_seeds(mk(9), {}).size() == 1);
    CHECK(classify_seeds(mk(10), {}).empty());
}

TEST_CASE("dep_window criterion: 20 of 21 fresh transitive dependencies") {
    std::vector<PackageRecord> recs;
    std::vector<std::string> deps;
    for (int i = 0; i < 20; ++i) {
        std::string name = "fresh" + std::to_string(i);
        recs.push_back(make_record(name, {}, kMar2024 + (i % 7) * kDay, 15));
        deps.push_back(name);
    }
    recs.push_back(make_record("stale", {}, parse_timestamp("2020-01-01T00:00:00Z"), 15));
    deps.push_back("stale");
    recs.push_back(make_record("pkg", deps, kMar2024, 2));
    auto g = graph_from(std::move(recs));

    auto seeds = classify_seeds(g, {});
    REQUIRE(seeds.size() == 1);
    CHECK(g.record(seeds[0].package).name == "pkg");
    CHECK(seeds[0].trigger == SeedTrigger::dep_window);  // 20/21 > 95%
}

TEST_CASE("dep_window comparison is strict at exactly 95%") {
    std::vector<PackageRecord> recs;
    std::vector<std::string> deps;
    for (int i = 0; i < 19; ++i) {
        std::string name = "fresh" + std::to_string(i);
        recs.push_back(make_record(name, {}, kMar2024 + kDay, 15));
        deps.push_back(name);
    }
    recs.push_back(make_record("stale", {}, parse_timestamp("2020-01-01T00:00:00Z"), 15));
    deps.push_back("stale");  // 19/20 = 95% exactly, not "more than"
    recs.push_back(make_record("pkg", deps, kMar2024, 2));
    auto g = graph_from(std::move(recs));
    CHECK(classify_seeds(g, {}).empty());
}

TEST_CASE("zero transitive dependencies fails criterion 1") {
    auto g = graph_from({make_record("lonely", {}, kMar2024, 2)});
    CHECK(classify_seeds(g, {}).empty());
}

TEST_CASE("heavy dependents criterion") {
    // pkg has 5 dependents; 5/5 with 101 dependencies > 80%
    std::vector<PackageRecord> recs{make_record("pkg", {}, kMar2024, 2)};
    std::vector<std::string> filler_names;
    for (int i = 0; i < 101; ++i) {
        std::string name = "filler" + std::to_string(i);
        recs.push_back(make_record(name));
        filler_names.push_back(name);
    }
    for (int i = 0; i < 5; ++i) {
        std::vector<std::string> deps = filler_names;  // 101 deps
        deps.push_back("pkg");                         // 102 total, > 100
        recs.push_back(make_record("heavy" + std::to_string(i), deps));
    }
    auto g = graph_from(std::move(recs));
    auto seeds = classify_seeds(g, {});
    CHECK(seed_names(g, seeds) == std::set<std::string>{"pkg"});
    REQUIRE(seeds.size() == 1);
    CHECK(seeds[0].trigger == SeedTrigger::heavy_dependents);
}

TEST_CASE("scope: tea_registered_only skips unregistered packages") {
    auto r = make_record("s", {}, kMar2024, 1, PackageStatus::unpublished, false);
    auto g = graph_from({r});
    CHECK(classify_seeds(g, {}).empty());
    SybilCriteria all;
    all.scope = SybilCriteria::Scope::all_packages;
    CHECK(classify_seeds(g, all).size() == 1);
}

TEST_CASE("propagation") {
    SUBCASE("no seeds means all benign") {
        auto g = random_graph(10, 0.2, 1);
        auto verdicts = propagate(g, {});
        CHECK(verdicts.size() == 10);
        for (const auto& v : verdicts) CHECK(v.label == SybilLabel::benign);
    }
    SUBCASE("chain: seed at the end taints all dependents") {
        auto g = graph_from({make_record("a", {"b"}), make_record("b", {"c"}),
                             make_record("c", {}, kMar2024, 1, PackageStatus::unpublished)});
        auto verdicts = propagate(g, classify_seeds(g, {}));
        CHECK(verdicts[0].label == SybilLabel::propagated_sybil);
        CHECK(verdicts[1].label == SybilLabel::propagated_sybil);
        CHECK(verdicts[2].label == SybilLabel::seed_sybil);
        CHECK(*verdicts[0].origin == 2);
        CHECK(*verdicts[1].origin == 2);
    }
    SUBCASE("diamond marks each dependent exactly once") {
        auto g = graph_from({make_record("a", {"b", "c"}), make_record("b", {"d"}),
                             make_record("c", {"d"}),
                             make_record("d", {}, kMar2024, 1, PackageStatus::unpublished)});
        auto verdicts = propagate(g, classify_seeds(g, {}));
        REQUIRE(verdicts.size() == 4);
        int propagated = 0;
        for (const auto& v : verdicts)
            if (v.label == SybilLabel::propagated_sybil) ++propagated;
        CHECK(propagated == 3);
    }
}

TEST_CASE("propagation closure invariant on random sybil mixes") {
    std::vector<PackageRecord> recs;
    for (int i = 0; i < 40; ++i) {
        bool sybil = i % 7 == 0;
        recs.push_back(make_record("p" + std::to_string(i), {},
                                   sybil ? kMar2024 : kJan2024 - 500 * kDay, sybil ? 1 : 15,
                                   sybil ? PackageStatus::unpublished
                                         : PackageStatus::active));
    }
    std::mt19937_64 rng(3);
    for (int i = 1; i < 40; ++i)
        for (int j = 0; j < i; ++j)
            if (rng() % 8 == 0) recs[i].dependencies.push_back("p" + std::to_string(j));
    auto g = graph_from(std::move(recs));
    auto verdicts = propagate(g, classify_seeds(g, {}));
    for (const auto& v : verdicts) {
        if (v.label == SybilLabel::benign) continue;
        for (std::uint32_t dep : g.transitive_closure(v.package, Direction::dependents))
            CHECK(verdicts[dep].label != SybilLabel::benign);
    }
}

TEST_CASE("loosening the window never shrinks the seed set") {
    auto base = SybilCriteria{};
    std::vector<PackageRecord> recs;
    for (int i = 0; i < 12; ++i)
        recs.push_back(make_record("dep" + std::to_string(i), {},
                                   kMar2024 + (i * 5 - 20) * kDay, 15));
    std::vector<std::string> deps;
    for (int i = 0; i < 12; ++i) deps.push_back("dep" + std::to_string(i));
    recs.push_back(make_record("pkg", deps, kMar2024, 2));
    auto g = graph_from(std::move(recs));

    SybilCriteria tight = base, loose = base;
    tight.dep_window = 10 * kDay;
    loose.dep_window = 60 * kDay;
    auto tight_seeds = seed_names(g, classify_seeds(g, tight));
    auto loose_seeds = seed_names(g, classify_seeds(g, loose));
    for (const auto& name : tight_seeds) CHECK(loose_seeds.count(name) == 1);

    SybilCriteria lower_frac = base;
    lower_frac.dep_window_fraction = 0.50;
    auto frac_seeds = seed_names(g, classify_seeds(g, lower_frac));
    auto base_seeds = seed_names(g, classify_seeds(g, base));
    for (const auto& name : base_seeds) CHECK(frac_seeds.count(name) == 1);
}

TEST_CASE("clean pre-2024 background yields zero sybil labels") {
    auto snap_graph = random_graph(50, 0.08, 21);  // defaults: 2020 creation, 15 versions
    auto verdicts = propagate(snap_graph, classify_seeds(snap_graph, {}));
    for (const auto& v : verdicts) CHECK(v.label == SybilLabel::benign);
}

TEST_CASE("audit sampling") {
    std::vector<PackageRecord> recs;
    for (int i = 0; i < 30; ++i)
        recs.push_back(make_record("s" + std::to_string(i), {}, kMar2024, 1,
                                   PackageStatus::unpublished));
    auto g = graph_from(std::move(recs));
    auto verdicts = propagate(g, classify_seeds(g, {}));

    SUBCASE("full-set sample and empty sample") {
        CHECK(sample_for_audit(g, verdicts, 30, 1).size() == 30);
        CHECK(sample_for_audit(g, verdicts, 0, 1).empty());
        CHECK_THROWS_AS(sample_for_audit(g, verdicts, 31, 1), std::invalid_argument);
    }
    SUBCASE("reproducible from seed, sorted by name") {
        auto a = sample_for_audit(g, verdicts, 10, 42);
        auto b = sample_for_audit(g, verdicts, 10, 42);
        CHECK(a == b);
        auto c = sample_for_audit(g, verdicts, 10, 43);
        CHECK(a != c);
        for (std::size_t i = 1; i < a.size(); ++i)
            CHECK(g.record(a[i - 1]).name < g.record(a[i]).name);
    }
}

TEST_CASE("Clopper-Pearson upper bound") {
    CHECK(upper_confidence_bound(100, 0, 0.05) == doctest::Approx(0.029513).epsilon(1e-3));
    CHECK(std::abs(upper_confidence_bound(100, 0, 0.05) - 0.029513) < 1e-5);
    CHECK(upper_confidence_bound(1, 0, 0.05) == doctest::Approx(0.95).epsilon(1e-10));
    CHECK(upper_confidence_bound(10, 10, 0.05) == 1.0);
    // closed form 1 - alpha^(1/n) for k=0
    for (std::uint64_t n : {2u, 7u, 50u, 333u})
        CHECK(upper_confidence_bound(n, 0, 0.05) ==
              doctest::Approx(1.0 - std::pow(0.05, 1.0 / n)).epsilon(1e-9));
    CHECK_THROWS_AS(upper_confidence_bound(10, 11, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(upper_confidence_bound(10, 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(upper_confidence_bound(10, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(upper_confidence_bound(0, 0, 0.05), std::invalid_argument);
}

TEST_CASE("upper bound monotone in n and k") {
    for (std::uint64_t n = 5; n <= 40; n += 5) {
        for (std::uint64_t k = 0; k + 1 <= n && k < 5; ++k) {
            CHECK(upper_confidence_bound(n, k + 1, 0.05) >=
                  upper_confidence_bound(n, k, 0.05));
            CHECK(upper_confidence_bound(n + 5, k, 0.05) <=
                  upper_confidence_bound(n, k, 0.05) + 1e-12);
        }
    }
}

TEST_CASE("overlap with top") {
    SUBCASE("all benign gives zero overlap") {
        auto g = random_graph(12, 0.2, 4);
        auto verdicts = propagate(g, {});
        CHECK(overlap_with_top(g, verdicts, 5, DepGraph::TopMode::direct) == 0);
        CHECK(overlap_with_top(g, verdicts, 5, DepGraph::TopMode::transitive) == 0);
    }
    SUBCASE("single sybil node counts in both modes") {
        auto g = graph_from({make_record("s", {}, kMar2024, 1, PackageStatus::unpublished)});
        auto verdicts = propagate(g, classify_seeds(g, {}));
        CHECK(overlap_with_top(g, verdicts, 1, DepGraph::TopMode::direct) == 1);
        CHECK(overlap_with_top(g, verdicts, 1, DepGraph::TopMode::transitive) == 1);
    }
    SUBCASE("width-attack shape: benign target not counted, bogus dependents are") {
        std::vector<PackageRecord> recs{make_record("target")};
        for (int i = 0; i < 20; ++i)
            recs.push_back(make_record("bogus" + std::to_string(i), {"target"}, kMar2024, 1,
                                       PackageStatus::unpublished));
        auto g = graph_from(std::move(recs));
        auto verdicts = propagate(g, classify_seeds(g, {}));
        // target tops the direct ranking but keeps its benign label
        CHECK(overlap_with_top(g, verdicts, 1, DepGraph::TopMode::direct) == 0);
        CHECK(overlap_with_top(g, verdicts, 21, DepGraph::TopMode::direct) == 20);
    }
}

TEST_CASE("verdict csv round trip with annotations") {
    auto g = graph_from({make_record("a", {"b"}),
                         make_record("b", {}, kMar2024, 1, PackageStatus::unpublished)});
    auto verdicts = propagate(g, classify_seeds(g, {}));
    std::istringstream ann("name,class_annotation\nb,create_next_app\n");
    import_annotations_csv(g, verdicts, ann);
    std::ostringstream out;
    write_verdicts_csv(g, verdicts, out);
    CHECK(out.str() ==
          "name,label,trigger,origin,class_annotation\n"
          "a,propagated_sybil,,b,\n"
          "b,seed_sybil,status,,create_next_app\n");

    std::istringstream bad("ghost,no_code\n");
    CHECK_THROWS_AS(import_annotations_csv(g, verdicts, bad), std::invalid_argument);
}

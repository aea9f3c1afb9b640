#include <doctest.h>

#include "footprint/config.hpp"
#include "footprint/errors.hpp"
#include "support/helpers.hpp"

using namespace footprint;
using testsupport::TempDir;

namespace {

const char* kEvents =
    R"({"platform":"midjourney","author_id":"s1","content":"/imagine x"})" "\n";

std::string full_config() {
    return R"({
      "inputs": [{"path": "events.jsonl", "format": "generic_events"}],
      "actors": {
        "teacher_ids": ["t1"],
        "student_ids": ["s1", "s2"],
        "default_role": "student",
        "workshop_window": {"start": "2024-03-01T09:00:00Z", "end": "2024-03-02T18:00:00Z"}
      },
      "rules": {"variation_images": 4},
      "factors": {"entries": [
        {"platform": "chatgpt", "kind": "dalle_mention", "kwh_per_image": "0.003",
         "provenance": "local measurement"}
      ]},
      "session": {"duration_hours": "12", "n_students": 49, "label": "workshop"},
      "manifest": {"teacher_preparation": 41, "student": 512},
      "baselines": [{"name": "desktop-hour", "kwh": "0.2", "per": "hour", "source_note": "psu"}],
      "conversions": {"grid_carbon_intensity": {"value": "400", "provenance": "grid mix 2024"}},
      "budget": {"scope": "per_author", "max_trials": 50, "mode": "report"},
      "csv": {"delimiter": ";"},
      "strict": false,
      "dedupe": true
    })";
}

}  // namespace

TEST_CASE("full config loads") {
    TempDir dir;
    dir.write("events.jsonl", kEvents);
    auto path = dir.write("run.json", full_config());
    RunConfig cfg = load_config(path.string());

    REQUIRE(cfg.inputs.size() == 1);
    CHECK(cfg.inputs[0].format == InputFormat::GenericEvents);
    CHECK(cfg.actors.teacher_ids.count("t1") == 1);
    CHECK(cfg.actors.default_role == ActorRole::Student);
    REQUIRE(cfg.actors.workshop_window);
    for (const Rule& r : cfg.rules.rules)
        if (r.kind == GenerationKind::Variation) CHECK(r.images == 4);
    CHECK(cfg.factors.lookup("chatgpt", "dalle_mention", "image")->kwh_per_image.str() == "0.003");
    REQUIRE(cfg.session);
    CHECK(cfg.session->n_students == 49);
    CHECK(cfg.manifest.used_counts.at(ActorRole::Student) == 512);
    CHECK(cfg.baselines.all().size() == 5);
    CHECK(cfg.conversions.grid_carbon_intensity->value.str() == "400");
    REQUIRE(cfg.budget);
    CHECK(cfg.budget->scope == BudgetScope::PerAuthor);
    CHECK(cfg.csv.delimiter == ';');
    CHECK(cfg.dedupe);
    CHECK_FALSE(cfg.digest.empty());
}

TEST_CASE("config digest is canonical") {
    TempDir dir;
    dir.write("events.jsonl", kEvents);
    auto a = dir.write("a.json", R"({"strict": true, "dedupe": false})");
    // same content, different key order and whitespace
    auto b = dir.write("b.json", "{\n  \"dedupe\": false,\n\n  \"strict\": true\n}");
    CHECK(load_config(a.string()).digest == load_config(b.string()).digest);
}

TEST_CASE("unknown keys: warning lenient, error strict") {
    TempDir dir;
    auto path = dir.write("run.json", R"({"strict": false, "typo_key": 1})");
    RunConfig lenient = load_config(path.string());
    REQUIRE(lenient.warnings.size() == 1);
    CHECK(lenient.warnings[0].find("typo_key") != std::string::npos);
    CHECK_THROWS_AS(load_config(path.string(), true), AuditError);
}

TEST_CASE("missing input path is an error at load time") {
    TempDir dir;
    auto path = dir.write(
        "run.json", R"({"inputs": [{"path": "nope.jsonl", "format": "generic_events"}]})");
    CHECK_THROWS_AS(load_config(path.string()), AuditError);
}

TEST_CASE("teacher and student ids must be disjoint") {
    TempDir dir;
    auto path = dir.write("run.json",
                          R"({"actors": {"teacher_ids": ["x"], "student_ids": ["x"]}})");
    CHECK_THROWS_AS(load_config(path.string()), AuditError);
}

TEST_CASE("factor entries demand provenance and non-negative values") {
    TempDir dir;
    auto no_prov = dir.write("a.json", R"({"factors": {"entries": [
        {"platform": "*", "kind": "*", "kwh_per_image": "0.1"}]}})");
    CHECK_THROWS_AS(load_config(no_prov.string()), AuditError);
    auto negative = dir.write("b.json", R"({"factors": {"entries": [
        {"platform": "*", "kind": "*", "kwh_per_image": "-0.1", "provenance": "x"}]}})");
    CHECK_THROWS_AS(load_config(negative.string()), AuditError);
}

TEST_CASE("custom rules must end with a catch-all") {
    TempDir dir;
    auto path = dir.write("run.json", R"({"rules": {"custom": [
        {"match": "contains", "needle": "x", "kind": "variation", "images": 1}]}})");
    CHECK_THROWS_AS(load_config(path.string()), AuditError);
}

TEST_CASE("baseline collisions are rejected") {
    TempDir dir;
    auto path = dir.write("run.json", R"({"baselines": [
        {"name": "laptop-hour", "kwh": "1", "per": "hour"}]})");
    CHECK_THROWS_AS(load_config(path.string()), AuditError);
}

TEST_CASE("standalone factor table validation") {
    EnergyFactorTable t = parse_factor_table(R"({"entries": [
        {"platform": "*", "kind": "*", "kwh_per_image": "0.0029", "provenance": "cited"}]})");
    CHECK(t.entries().size() == 1);
    CHECK_THROWS_AS(parse_factor_table("{}"), AuditError);
    CHECK_THROWS_AS(parse_factor_table(R"({"entries": [
        {"platform": "*", "kind": "*", "kwh_per_image": "0.1"}]})"),
                    AuditError);
}

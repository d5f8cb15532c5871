#include <doctest.h>

#include <cstdio>

#include "cspda/equiv.hpp"
#include "cspda/groupspec.hpp"
#include "cspda/validate.hpp"
#include "fixtures.hpp"

using namespace cspda;
using fixtures::gw;

static std::string spec_path(const char* file) {
    return std::string(SPEC_DIR) + "/" + file;
}

TEST_CASE("loading the free group spec pairs the machine with its oracle") {
    LoadedGroup g = load_group_spec(spec_path("free_rank2.json"));
    CHECK(g.name == "F2");
    CHECK(validate_spec(g.machine).ok());
    CHECK(g.oracle->is_trivial(gw({"a", "A"})));
    CHECK_FALSE(g.oracle->is_trivial(gw({"a", "b"})));
    CHECK(g.init_bound_for(8) == 10);
    CHECK(accepts(g.machine, g.machine.parse_word("ab"), 10).accepted);
}

TEST_CASE("loading the grigorchuk spec builds and validates") {
    LoadedGroup g = load_group_spec(spec_path("grigorchuk.json"));
    CHECK(validate_spec(g.machine).ok());
    CHECK(g.oracle->is_trivial(gw({"b", "c", "d"})));
    std::size_t bound = g.init_bound_for(4);
    CHECK(bound >= 2);
    CHECK(bound <= 10);
    CHECK(accepts(g.machine, g.machine.parse_word("ab"), bound).accepted);
}

TEST_CASE("malformed specs raise schema errors") {
    CHECK_THROWS_AS(load_group_spec_text("{\"kind\": \"imaginary\"}"), SchemaError);
    CHECK_THROWS_AS(load_group_spec_text("{\"name\": \"missing kind\"}"), SchemaError);
    CHECK_THROWS_AS(load_group_spec_text("not json at all"), SchemaError);
    CHECK_THROWS_AS(load_group_spec_text("{\"kind\": \"free\"}"), SchemaError);
}

TEST_CASE("machine files round-trip through disk with their metadata") {
    LoadedGroup g = load_group_spec(spec_path("dinfinity_vfree.json"));
    std::string path = "/tmp/cspda_test_machine.json";
    save_machine(g.machine, path);
    CspdaSpec back = load_machine(path);
    CHECK(back.name == "Dinf");
    CHECK(validate_spec(back).ok());
    CHECK(!back.state_roles.empty());
    // behaviour on a sample of words matches the freshly built machine
    for (const auto& w : enumerate_input_words(back, 4)) {
        CHECK(accepts(back, w, 8).accepted == accepts(g.machine, w, 8).accepted);
    }
    std::remove(path.c_str());
    std::remove((path + ".meta.json").c_str());
}

TEST_CASE("equivalence reports are deterministic and fan-out independent") {
    LoadedGroup g = load_group_spec(spec_path("dinfinity_vfree.json"));
    EquivReport one = equiv_check(g.machine, *g.oracle, 5, 7, 1);
    EquivReport two = equiv_check(g.machine, *g.oracle, 5, 7, 1);
    EquivReport jobs = equiv_check(g.machine, *g.oracle, 5, 7, 4);
    CHECK(equiv_report_json(g.machine, one) == equiv_report_json(g.machine, two));
    CHECK(equiv_report_json(g.machine, one) == equiv_report_json(g.machine, jobs));
    CHECK(one.agree == jobs.agree);
    CHECK(one.machine_only == jobs.machine_only);
    CHECK(one.oracle_only == jobs.oracle_only);
}

TEST_CASE("csv and json reports carry identical tallies") {
    LoadedGroup g = load_group_spec(spec_path("free_rank2.json"));
    EquivReport r = equiv_check(g.machine, *g.oracle, 3, 2);  // starve the bound: mismatches
    std::string csv = equiv_report_csv(g.machine, r);
    std::string json_text = equiv_report_json(g.machine, r);
    std::string tally = std::to_string(r.agree) + "," + std::to_string(r.machine_only) + "," +
                        std::to_string(r.oracle_only);
    CHECK(csv.find(tally) != std::string::npos);
    CHECK(json_text.find("\"agree\": " + std::to_string(r.agree)) != std::string::npos);
    CHECK(json_text.find("\"machine_only\": " + std::to_string(r.machine_only)) !=
          std::string::npos);
    CHECK(r.machine_only == 0);  // starving the bound must never break soundness
    CHECK(r.oracle_only > 0);
    bool note_found = json_text.find("initBound possibly insufficient") != std::string::npos;
    CHECK(note_found);
}

TEST_CASE("audit_all certifies the dihedral machine") {
    LoadedGroup g = load_group_spec(spec_path("dinfinity_vfree.json"));
    AuditConfig config;
    config.samples = 300;
    config.max_len = 4;
    config.init_bound = 8;
    config.scan_len = 3;
    config.sweep_len = 3;
    config.sweep_radius = 3;
    AuditAllReport report = audit_all(g.machine, *g.oracle, config);
    CHECK(report.validator_ok);
    CHECK(report.property3_ok);
    CHECK(report.divergence_ok);
    CHECK(report.sweep_ok);
    CHECK(report.certified());
    std::string json_text = audit_report_json(g.machine, report);
    CHECK(json_text.find("\"certified_special_at_tested_sizes\": true") != std::string::npos);
}

TEST_CASE("audit flags a machine with a mislabelled entry state") {
    LoadedGroup g = load_group_spec(spec_path("free_rank2.json"));
    CspdaSpec broken = g.machine;
    for (auto& st : broken.states)
        if (st.kind == StateKind::Entry)
            st.kind = StateKind::AcceptingReading;
    auto report = validate_spec(broken);
    CHECK_FALSE(report.ok());  // entry labels now point at non-entry states
}

TEST_CASE("find_robust_entry returns initialisations that never fail nearby") {
    LoadedGroup g = load_group_spec(spec_path("free_rank2.json"));
    Word w = g.machine.parse_word("ab");
    auto init = find_robust_entry(g.machine, *g.oracle, w, 2, 8);
    REQUIRE(init.has_value());
    // every word of length <= 2 survives from that entry
    Configuration entry = entry_configuration(g.machine, init->word, init->entry);
    for (const auto& v : enumerate_input_words(g.machine, 2))
        CHECK_FALSE(run_word(g.machine, entry, v).failed());
    // 'ab' itself needs room for both letters, so two cells are the minimum
    CHECK(init->word.size() == 2);
    // a taller radius forces a taller stack
    auto wide = find_robust_entry(g.machine, *g.oracle, w, 4, 8);
    REQUIRE(wide.has_value());
    CHECK(wide->word.size() == 4);
    CHECK_THROWS_AS(find_robust_entry(g.machine, *g.oracle, g.machine.parse_word("aA"), 2, 8),
                    SpecError);
}

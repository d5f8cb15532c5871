// Acceptance suite: one line per criterion.  Every machine is compared with
// its independent oracle by exhaustive short-word enumeration; the special
// properties are audited on top.  Exit code is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <vector>

#include "cspda/equiv.hpp"
#include "cspda/groupspec.hpp"
#include "cspda/validate.hpp"

using namespace cspda;

namespace {

int failures = 0;
std::size_t machine_only_total = 0;  // AC9 aggregates over every equiv run

void report(const std::string& id, bool ok, const std::string& detail) {
    std::cout << id << (ok ? " PASS  " : " FAIL  ") << detail << std::endl;
    if (!ok)
        ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string spec_path(const char* file) {
    return std::string(SPEC_DIR) + "/" + file;
}

EquivReport run_equiv(const LoadedGroup& g, std::size_t n, std::size_t bound) {
    EquivReport r = equiv_check(g.machine, *g.oracle, n, bound);
    machine_only_total += r.machine_only;
    return r;
}

void ac1(LoadedGroup& f2) {
    auto start = std::chrono::steady_clock::now();
    std::size_t bound = f2.init_bound_for(8);
    EquivReport r = run_equiv(f2, 8, bound);
    double elapsed = seconds_since(start);
    std::size_t total = r.agree + r.machine_only + r.oracle_only;
    bool ok = r.machine_only == 0 && r.oracle_only == 0 && total >= 87380 && elapsed < 60.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "free group F2, n=8, initBound=%zu: %zu words, machineOnly=%zu, "
                  "oracleOnly=%zu, %.2fs",
                  bound, total, r.machine_only, r.oracle_only, elapsed);
    report("AC1", ok, buf);
}

void ac2(LoadedGroup& vfree, LoadedGroup& ext, LoadedGroup& fp) {
    auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    std::vector<LoadedGroup*> builds{&vfree, &ext, &fp};
    std::vector<std::size_t> bounds;
    for (LoadedGroup* g : builds)
        bounds.push_back(g->init_bound_for(8));

    // identical accept sets on words up to length 8, all matching the oracle
    std::vector<Word> words = enumerate_input_words(vfree.machine, 8);
    std::vector<std::vector<InitWord>> inits;
    for (std::size_t i = 0; i < builds.size(); ++i)
        inits.push_back(enumerate_init_words(builds[i]->machine, bounds[i]));
    std::size_t disagreements = 0, oracle_mismatches = 0;
    for (const auto& w : words) {
        GWord letters = to_oracle_word(vfree.machine, w);
        bool expected = !vfree.oracle->is_trivial(letters);
        std::vector<bool> verdicts;
        for (std::size_t i = 0; i < builds.size(); ++i) {
            Word local = to_machine_word(builds[i]->machine, letters);
            bool accepted = accepts(builds[i]->machine, local, inits[i]).accepted;
            verdicts.push_back(accepted);
            if (accepted && !expected)
                ++machine_only_total;
        }
        if (verdicts[0] != verdicts[1] || verdicts[1] != verdicts[2])
            ++disagreements;
        if (verdicts[0] != expected)
            ++oracle_mismatches;
    }
    ok = disagreements == 0 && oracle_mismatches == 0;
    double elapsed = seconds_since(start);
    ok = ok && elapsed < 300.0;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "dihedral three ways (bounds %zu/%zu/%zu): %zu words, construction "
                  "disagreements=%zu, oracle mismatches=%zu, %.2fs",
                  bounds[0], bounds[1], bounds[2], words.size(), disagreements,
                  oracle_mismatches, elapsed);
    report("AC2", ok, buf);
}

void ac3(LoadedGroup& grig) {
    auto start = std::chrono::steady_clock::now();
    std::size_t bound = grig.init_bound_for(6);  // oracle pre-pass: witness depth + padding
    EquivReport r = run_equiv(grig, 6, bound);
    bool relations_rejected = true;
    for (const char* rel : {"aa", "bb", "cc", "dd", "bcd"})
        if (accepts(grig.machine, grig.machine.parse_word(rel), bound).accepted)
            relations_rejected = false;
    double elapsed = seconds_since(start);
    bool ok = r.machine_only == 0 && r.oracle_only == 0 && relations_rejected && elapsed < 600.0;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "grigorchuk, n=6, calibrated initBound=%zu: machineOnly=%zu, oracleOnly=%zu, "
                  "relations rejected=%s, %.2fs",
                  bound, r.machine_only, r.oracle_only, relations_rejected ? "yes" : "no",
                  elapsed);
    report("AC3", ok, buf);
}

void ac4(LoadedGroup& v) {
    auto start = std::chrono::steady_clock::now();
    std::size_t bound = v.init_bound_for(6);
    EquivReport r = run_equiv(v, 6, bound);

    // the worked antichain example and its broken variant
    bool antichain_ok = is_complete_antichain(2, 1, {{0, 0}, {0, 1, 0}, {0, 1, 1}});
    bool broken_rejected =
        !is_complete_antichain(2, 1, {{0, 0}, {0, 0, 0}, {0, 1, 0}, {0, 1, 1}});
    bool validator_rejects = false;
    try {
        HTElement bad;
        bad.n = 2;
        bad.r = 1;
        bad.pairs = {{{0, 0}, {0, 0}}, {{0, 0, 0}, {0, 1, 0}}, {{0, 1, 0}, {0, 0, 0}},
                     {{0, 1, 1}, {0, 1, 1}}};
        bad.validate();
    } catch (const InvalidAntichainError&) {
        validator_rejects = true;
    }
    double elapsed = seconds_since(start);
    bool ok = r.machine_only == 0 && r.oracle_only == 0 && antichain_ok && broken_rejected &&
              validator_rejects;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "G_{2,1}, n=6, calibrated initBound=%zu: machineOnly=%zu, oracleOnly=%zu, "
                  "antichain checks=%s, %.2fs",
                  bound, r.machine_only, r.oracle_only,
                  (antichain_ok && broken_rejected && validator_rejects) ? "ok" : "bad", elapsed);
    report("AC4", ok, buf);
}

void ac5(LoadedGroup& lamp) {
    auto start = std::chrono::steady_clock::now();
    std::size_t bound = lamp.init_bound_for(6);
    EquivReport r = run_equiv(lamp, 6, bound);
    bool spot = accepts(lamp.machine, lamp.machine.parse_word("h t h T"), bound).accepted &&
                !accepts(lamp.machine, lamp.machine.parse_word("hh"), bound).accepted &&
                !accepts(lamp.machine, lamp.machine.parse_word("tT"), bound).accepted;
    double elapsed = seconds_since(start);
    bool ok = r.machine_only == 0 && r.oracle_only == 0 && spot;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "lamplighter, n=6, initBound=%zu: machineOnly=%zu, oracleOnly=%zu, spot "
                  "checks=%s, %.2fs",
                  bound, r.machine_only, r.oracle_only, spot ? "ok" : "bad", elapsed);
    report("AC5", ok, buf);
}

void ac6(LoadedGroup& prod, LoadedGroup& rewritten) {
    auto start = std::chrono::steady_clock::now();
    EquivReport rp = run_equiv(prod, 6, prod.init_bound_for(6));
    EquivReport rr = run_equiv(rewritten, 6, rewritten.init_bound_for(6));
    double elapsed = seconds_since(start);
    bool ok = rp.machine_only == 0 && rp.oracle_only == 0 && rr.machine_only == 0 &&
              rr.oracle_only == 0;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "F2 x Z2 (mo=%zu oo=%zu) and F2 with c=ab (mo=%zu oo=%zu), n=6, %.2fs",
                  rp.machine_only, rp.oracle_only, rr.machine_only, rr.oracle_only, elapsed);
    report("AC6", ok, buf);
}

void ac7(std::vector<LoadedGroup*>& everyone) {
    auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string bad;
    for (LoadedGroup* g : everyone) {
        ValidationReport vr = validate_spec(g->machine);
        if (!vr.ok()) {
            ok = false;
            bad += " " + g->name + ":validator";
            continue;
        }
        Property3Config config;
        config.samples = 1000;
        config.max_len = 6;
        config.init_bound = g->init_bound_for(6);
        config.seed = 20260808;
        try {
            Property3Report pr = audit_property3(g->machine, *g->oracle, config);
            if (!pr.ok()) {
                ok = false;
                bad += " " + g->name + ":property3";
            }
        } catch (const DivergenceError&) {
            ok = false;
            bad += " " + g->name + ":diverged";
        }
    }
    double elapsed = seconds_since(start);
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "special-property audits on %zu machines, 1000 samples each, seed fixed: "
                  "%s%s, %.2fs",
                  everyone.size(), ok ? "all clean" : "failures:", bad.c_str(), elapsed);
    report("AC7", ok, buf);
}

void ac8(LoadedGroup& fp) {
    auto start = std::chrono::steady_clock::now();
    std::size_t bound = fp.init_bound_for(8);  // room for the probe words and w
    std::size_t checked = 0, found = 0;
    for (const auto& w : enumerate_input_words(fp.machine, 4)) {
        if (fp.oracle->is_trivial(to_oracle_word(fp.machine, w)))
            continue;
        ++checked;
        if (find_robust_entry(fp.machine, *fp.oracle, w, 4, bound))
            ++found;
    }
    double elapsed = seconds_since(start);
    bool ok = checked > 0 && found == checked;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "robust entries on the free product: %zu/%zu words over length <= 4 with "
                  "radius 4 within initBound=%zu, %.2fs",
                  found, checked, bound, elapsed);
    report("AC8", ok, buf);
}

void ac9() {
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "absolute soundness: %zu oracle-trivial words accepted across all runs",
                  machine_only_total);
    report("AC9", machine_only_total == 0, buf);
}

}  // namespace

int main() {
    try {
        LoadedGroup f2 = load_group_spec(spec_path("free_rank2.json"));
        LoadedGroup dinf_vfree = load_group_spec(spec_path("dinfinity_vfree.json"));
        LoadedGroup dinf_ext = load_group_spec(spec_path("dinfinity_extension.json"));
        LoadedGroup dinf_fp = load_group_spec(spec_path("dinfinity_freeproduct.json"));
        LoadedGroup grig = load_group_spec(spec_path("grigorchuk.json"));
        LoadedGroup v = load_group_spec(spec_path("thompson_v.json"));
        LoadedGroup lamp = load_group_spec(spec_path("lamplighter.json"));
        LoadedGroup prod = load_group_spec(spec_path("f2_x_z2.json"));
        LoadedGroup rewritten = load_group_spec(spec_path("f2_redundant.json"));

        ac1(f2);
        ac2(dinf_vfree, dinf_ext, dinf_fp);
        ac3(grig);
        ac4(v);
        ac5(lamp);
        ac6(prod, rewritten);
        std::vector<LoadedGroup*> everyone{&f2,   &dinf_vfree, &dinf_ext, &dinf_fp, &grig,
                                           &v,    &lamp,       &prod,     &rewritten};
        ac7(everyone);
        ac8(dinf_fp);
        ac9();
    } catch (const std::exception& e) {
        std::cout << "acceptance suite aborted: " << e.what() << std::endl;
        return 99;
    }
    std::cout << (failures == 0 ? "all criteria passed" : "some criteria failed") << std::endl;
    return failures;
}

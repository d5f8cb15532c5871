#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cspda/audit.hpp"

namespace cspda {

struct EquivReport {
    std::string group_name;
    std::size_t word_length = 0;
    std::size_t init_bound = 0;
    std::size_t agree = 0;
    std::size_t machine_only = 0;  // accepted but oracle-trivial: soundness breach
    std::size_t oracle_only = 0;   // oracle-nontrivial but rejected: init bound suspect
    struct Mismatch {
        Word word;
        bool machine_verdict;
        bool oracle_verdict;
        std::optional<Word> witness_init;
    };
    std::vector<Mismatch> mismatches;
    double duration_seconds = 0;  // console note; kept out of persisted reports

    bool clean() const { return machine_only == 0 && oracle_only == 0; }
};

// Compares the machine's language with the oracle's co-word problem on every
// input word of length <= n.  jobs > 1 fans the word loop out over threads;
// verdicts and report contents are independent of the fan-out.
EquivReport equiv_check(const CspdaSpec& spec, const GroupOracle& oracle, std::size_t n,
                        std::size_t init_bound, unsigned jobs = 1);

// Canonical JSON ("report_version": 1) and CSV renderings.  Identical inputs
// yield byte-identical output; volatile fields like wall-clock time are
// excluded.
std::string equiv_report_json(const CspdaSpec& spec, const EquivReport& report);
std::string equiv_report_csv(const CspdaSpec& spec, const EquivReport& report);

struct AuditConfig {
    std::size_t samples = 1000;
    std::size_t max_len = 6;       // u/v length bound for the property-3 audit
    std::size_t init_bound = 8;
    std::uint64_t seed = 1;
    std::size_t scan_len = 4;      // divergence scan word length
    std::size_t sweep_len = 4;     // sweep every coWP word up to this length
    std::size_t sweep_radius = 4;  // non-failure radius n
};

struct AuditAllReport {
    bool validator_ok = false;
    std::string validator_summary;
    bool property3_ok = false;
    std::size_t property3_samples = 0;
    std::size_t property3_counterexamples = 0;
    bool divergence_ok = false;
    std::size_t runs_scanned = 0;
    bool sweep_ok = false;
    std::size_t sweep_words = 0;
    std::size_t sweep_unresolved = 0;
    AuditConfig config;

    bool certified() const {
        return validator_ok && property3_ok && divergence_ok && sweep_ok;
    }
};

// validate_spec + the property-3 audit + an exhaustive divergence scan + the
// robust-entry sweep, bundled into one certification pass.
AuditAllReport audit_all(const CspdaSpec& spec, const GroupOracle& oracle,
                         const AuditConfig& config);

std::string audit_report_json(const CspdaSpec& spec, const AuditAllReport& report);

}  // namespace cspda

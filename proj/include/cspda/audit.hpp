#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cspda/exec.hpp"
#include "cspda/machine.hpp"
#include "cspda/oracle.hpp"

namespace cspda {

// The machine's input letters and the oracle's alphabet are matched by name.
GWord to_oracle_word(const CspdaSpec& spec, const Word& w);
Word to_machine_word(const CspdaSpec& spec, const GWord& w);
void check_alphabets_match(const CspdaSpec& spec, const GroupOracle& oracle);

struct Property3Config {
    std::size_t samples = 1000;
    std::size_t max_len = 6;      // length bound for u and v
    std::size_t init_bound = 8;   // stage-1 words up to this length are drawn
    std::uint64_t seed = 1;
};

struct Property3Report {
    std::size_t samples_run = 0;
    std::size_t failures_allowed = 0;  // C^{uv} failed: permitted by the property
    struct Counterexample {
        Word init;
        Word u, v;
        std::string what;
    };
    std::vector<Counterexample> counterexamples;
    bool ok() const { return counterexamples.empty(); }
};

// Samples (init, u, v) with v oracle-trivial and checks C^{uv} = C^u or
// C^{uv} fails, plus the corollary: a reached C^u different from C forces u
// to be oracle-nontrivial.  Diverged runs raise DivergenceError.
Property3Report audit_property3(const CspdaSpec& spec, const GroupOracle& oracle,
                                const Property3Config& config);

// For w accepted by the machine and a radius n, finds an entry
// configuration that accepts w and fails on no word of length <= n.
std::optional<InitWord> find_robust_entry(const CspdaSpec& spec, const GroupOracle& oracle,
                                          const Word& w, std::size_t n, std::size_t init_bound);

}  // namespace cspda

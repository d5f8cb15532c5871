#pragma once

#include <string>
#include <vector>

#include "cspda/machine.hpp"

namespace cspda {

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

// Structural checks: unique initial/fail states, the reading/non-reading
// partition, alphabet inclusions, the involution on the input alphabet,
// well-formed transitions and determinism upon input, and a well-formed
// init automaton whose entry labels name entry states.
ValidationReport validate_spec(const CspdaSpec& spec);

}  // namespace cspda

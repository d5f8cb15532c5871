#pragma once

#include <functional>
#include <string>

#include "cspda/constructions.hpp"
#include "cspda/machine_io.hpp"

namespace cspda {

// A group description loaded from a spec file: the constructed machine, the
// independent oracle it is tested against, and a policy mapping a word-length
// bound to an adequate stage-1 initialisation bound.  Families with no closed
// form (bounded automata, Higman-Thompson) calibrate the bound by asking the
// oracle for minimal witness depths.
struct LoadedGroup {
    std::string name;
    CspdaSpec machine;
    OraclePtr oracle;
    std::function<std::size_t(std::size_t)> init_bound_for;
};

LoadedGroup load_group_spec(const std::string& path);
LoadedGroup load_group_spec_text(const std::string& json_text);

}  // namespace cspda

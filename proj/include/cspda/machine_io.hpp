#pragma once

#include <string>

#include "cspda/machine.hpp"

namespace cspda {

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Machine files are JSON with string symbols; "BOT" encodes the bottom
// marker.  A sidecar <path>.meta.json carries the machine name and builder
// role annotations, which the executor ignores.
std::string machine_to_json(const CspdaSpec& spec);
CspdaSpec machine_from_json(const std::string& text);

void save_machine(const CspdaSpec& spec, const std::string& path);
CspdaSpec load_machine(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace cspda

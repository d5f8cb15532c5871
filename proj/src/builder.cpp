#include "cspda/builder.hpp"

#include <deque>
#include <unordered_map>

namespace cspda {

CspdaSpec compile_machine(const ProgramMachine& program) {
    CspdaSpec spec;
    spec.name = program.name;
    spec.symbols = program.symbols;
    spec.input_alphabet = program.input_alphabet;
    spec.inverse_of = program.inverse_of;
    spec.check_alphabet = program.check_alphabet;
    spec.push_alphabet = program.push_alphabet;
    spec.pad = program.pad;
    spec.init_automaton = program.init_automaton;

    spec.states.push_back({"start", StateKind::Initial});
    spec.states.push_back({"reject", StateKind::Fail});
    spec.initial_state = 0;
    spec.fail_state = 1;

    std::unordered_map<std::string, StateId> ids;
    std::deque<std::string> work;
    auto intern = [&](const std::string& name) -> StateId {
        auto it = ids.find(name);
        if (it != ids.end())
            return it->second;
        StateId id = static_cast<StateId>(spec.states.size());
        spec.states.push_back({name, program.kind_of(name)});
        ids.emplace(name, id);
        work.push_back(name);
        if (program.role_of) {
            std::string role = program.role_of(name);
            if (!role.empty())
                spec.state_roles[name] = role;
        }
        return id;
    };

    spec.init_automaton.accepting.clear();
    for (const auto& [nfa_state, entry_name] : program.entry_labels)
        spec.init_automaton.accepting.push_back({nfa_state, intern(entry_name)});

    std::vector<Observation> domain;
    domain.push_back({kBottom, kBottom});
    for (Symbol g : program.push_alphabet)
        for (Symbol d : program.check_alphabet)
            domain.push_back({g, d});

    while (!work.empty()) {
        std::string name = std::move(work.front());
        work.pop_front();
        StateId id = ids.at(name);
        StateKind kind = spec.kind(id);
        if (kind == StateKind::Fail || kind == StateKind::Initial)
            continue;
        for (const Observation& obs : domain) {
            if (is_reading(kind)) {
                for (Symbol a : program.input_alphabet) {
                    auto mv = program.read_move(name, a, obs);
                    if (!mv)
                        continue;
                    spec.transitions.add({id, a, obs, {intern(mv->next), mv->op}});
                }
            } else {
                auto mv = program.silent_move(name, obs);
                if (!mv)
                    continue;
                spec.transitions.add({id, std::nullopt, obs, {intern(mv->next), mv->op}});
            }
        }
    }
    return spec;
}

}  // namespace cspda

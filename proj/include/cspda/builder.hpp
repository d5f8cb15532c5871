// Machine construction support.  Builders describe stage 2 as a pair of rule
// functions over structured state names; the compiler explores the reachable
// state space, querying each state against every observation (and input
// letter, for reading states), and emits a flat deterministic table.
// Observations a rule declines are simply absent, and the executor
// canonicalises a missing move to failure.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cspda/machine.hpp"

namespace cspda {

struct Move {
    StackOp op;
    std::string next;
};

struct ProgramMachine {
    std::string name;
    SymbolTable symbols;
    std::vector<Symbol> input_alphabet;
    std::unordered_map<Symbol, Symbol> inverse_of;
    std::vector<Symbol> check_alphabet;
    std::vector<Symbol> push_alphabet;
    Symbol pad = kBottom;

    InitAutomaton init_automaton;  // accepting entries filled from entry_labels
    std::vector<std::pair<std::uint32_t, std::string>> entry_labels;  // nfa state -> entry name

    std::function<StateKind(const std::string&)> kind_of;
    std::function<std::optional<Move>(const std::string&, Symbol, Observation)> read_move;
    std::function<std::optional<Move>(const std::string&, Observation)> silent_move;
    std::function<std::string(const std::string&)> role_of;  // may be null
};

CspdaSpec compile_machine(const ProgramMachine& program);

struct InitBuilder {
    InitAutomaton nfa;
    std::vector<std::pair<std::uint32_t, std::string>> labels;

    std::uint32_t add_state() { return nfa.num_states++; }
    void edge(std::uint32_t from, Symbol s, std::uint32_t to) { nfa.edges.push_back({from, s, to}); }
    void accept(std::uint32_t state, const std::string& entry_name) {
        labels.push_back({state, entry_name});
    }
};

}  // namespace cspda

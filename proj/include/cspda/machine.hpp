// Check-stack pushdown automata: machine descriptions and configurations.
//
// A cspda is a finite-state machine with two stacks whose heads are tied:
// a check stack, written once during initialisation and read-only afterwards,
// and an ordinary pushdown.  The head sits at the height of the pushdown and
// observes the pair (pushdown top, check cell at the same height).  Stage 1
// (the initialisation) is a regular language over the check alphabet, realised
// here by a small NFA whose accepting states name entry states of stage 2.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace cspda {

// Interned symbol.  Id 0 is reserved for the bottom-of-stack marker, which
// is not a member of any alphabet.
using Symbol = std::uint32_t;
inline constexpr Symbol kBottom = 0;

using Word = std::vector<Symbol>;

struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AmbiguousEntryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class SymbolTable {
  public:
    SymbolTable() { names_.push_back("BOT"); }

    Symbol intern(const std::string& name) {
        if (name == "BOT")
            throw SpecError("symbol name 'BOT' is reserved");
        auto it = ids_.find(name);
        if (it != ids_.end())
            return it->second;
        Symbol id = static_cast<Symbol>(names_.size());
        names_.push_back(name);
        ids_.emplace(name, id);
        return id;
    }

    std::optional<Symbol> find(const std::string& name) const {
        auto it = ids_.find(name);
        if (it == ids_.end())
            return std::nullopt;
        return it->second;
    }

    const std::string& name(Symbol s) const { return names_.at(s); }
    std::size_t size() const { return names_.size(); }

  private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Symbol> ids_;
};

enum class StateKind : std::uint8_t {
    Initial,
    Fail,
    Entry,             // reading, non-accepting
    AcceptingReading,  // reading, accepting
    NonReading,
};

bool is_reading(StateKind k);
std::string to_string(StateKind k);

using StateId = std::uint32_t;

struct StateDescriptor {
    std::string name;
    StateKind kind;
};

enum class OpKind : std::uint8_t { Push, Pop, Stay };

struct StackOp {
    OpKind kind = OpKind::Stay;
    Symbol symbol = kBottom;  // payload for Push

    static StackOp push(Symbol s) { return {OpKind::Push, s}; }
    static StackOp pop() { return {OpKind::Pop, kBottom}; }
    static StackOp stay() { return {OpKind::Stay, kBottom}; }
};

struct StepAction {
    StateId next;
    StackOp op;
};

// Observation seen by the head: pushdown top and check cell at the head
// height, both kBottom when the pushdown is empty.
struct Observation {
    Symbol push_top;
    Symbol check_cell;
};

// Transition key: (state, input letter or none, observation).  Reading moves
// carry an input letter; non-reading moves do not.
inline std::uint64_t pack_key(StateId from, std::optional<Symbol> input, Observation obs) {
    std::uint64_t in = input ? (static_cast<std::uint64_t>(*input) + 1) : 0;
    return (static_cast<std::uint64_t>(from) << 44) | (in << 30) |
           (static_cast<std::uint64_t>(obs.push_top) << 15) |
           static_cast<std::uint64_t>(obs.check_cell);
}

struct TransitionEntry {
    StateId from;
    std::optional<Symbol> input;
    Observation obs;
    StepAction action;
};

class TransitionTable {
  public:
    void add(const TransitionEntry& e) {
        auto key = pack_key(e.from, e.input, e.obs);
        if (!map_.emplace(key, e.action).second)
            throw SpecError("duplicate transition for state " + std::to_string(e.from));
        entries_.push_back(e);
    }

    const StepAction* lookup(StateId from, std::optional<Symbol> input, Observation obs) const {
        auto it = map_.find(pack_key(from, input, obs));
        return it == map_.end() ? nullptr : &it->second;
    }

    const std::vector<TransitionEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

  private:
    std::unordered_map<std::uint64_t, StepAction> map_;
    std::vector<TransitionEntry> entries_;
};

// Stage-1 controller: an NFA over the check alphabet.  Accepting states are
// labelled with the entry state that the written check stack leads to.
struct InitAutomaton {
    struct Edge {
        std::uint32_t from;
        Symbol symbol;
        std::uint32_t to;
    };
    std::uint32_t num_states = 0;
    std::uint32_t start = 0;
    std::vector<Edge> edges;
    std::vector<std::pair<std::uint32_t, StateId>> accepting;  // (nfa state, entry state)
};

struct CspdaSpec {
    std::string name;

    SymbolTable symbols;
    std::vector<Symbol> input_alphabet;  // declaration order fixes enumeration order
    std::unordered_map<Symbol, Symbol> inverse_of;
    std::vector<Symbol> check_alphabet;
    std::vector<Symbol> push_alphabet;
    Symbol pad = kBottom;

    std::vector<StateDescriptor> states;
    StateId initial_state = 0;
    StateId fail_state = 0;
    TransitionTable transitions;
    InitAutomaton init_automaton;

    // Builder-supplied role notes per state; ignored by the executor and
    // persisted only to the sidecar metadata file.
    std::unordered_map<std::string, std::string> state_roles;

    const StateDescriptor& state(StateId id) const { return states.at(id); }
    StateKind kind(StateId id) const { return states.at(id).kind; }

    bool in_input_alphabet(Symbol s) const;
    bool in_check_alphabet(Symbol s) const;
    bool in_push_alphabet(Symbol s) const;

    std::optional<StateId> find_state(const std::string& name) const;

    std::string render_word(const Word& w) const;
    Word parse_word(const std::string& text) const;
};

// The two-stack configuration.  The check stack is fixed after stage 1 and
// shared; the head height is the pushdown height.
struct Configuration {
    StateId state = 0;
    std::shared_ptr<const Word> check;
    Word push;

    std::size_t height() const { return push.size(); }

    Observation observe() const {
        if (push.empty())
            return {kBottom, kBottom};
        return {push.back(), (*check)[push.size() - 1]};
    }

    // Configuration equality ignores the (per-run constant) check stack.
    bool same_as(const Configuration& other) const {
        return state == other.state && push == other.push;
    }
};

}  // namespace cspda

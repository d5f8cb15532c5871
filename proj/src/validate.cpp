#include "cspda/validate.hpp"

#include <set>
#include <sstream>
#include <unordered_set>

namespace cspda {

std::string ValidationReport::summary() const {
    if (violations.empty())
        return "ok";
    std::ostringstream out;
    out << violations.size() << " violation(s):";
    for (const auto& v : violations)
        out << "\n  - " << v;
    return out.str();
}

ValidationReport validate_spec(const CspdaSpec& spec) {
    ValidationReport report;
    auto flag = [&](const std::string& msg) { report.violations.push_back(msg); };

    std::size_t initials = 0, fails = 0;
    for (const auto& st : spec.states) {
        if (st.kind == StateKind::Initial)
            ++initials;
        if (st.kind == StateKind::Fail)
            ++fails;
    }
    if (initials != 1)
        flag(initials == 0 ? "no initial state" : "multiple initial states");
    if (fails != 1)
        flag(fails == 0 ? "no fail state" : "multiple fail states");
    if (spec.initial_state >= spec.states.size() ||
        spec.kind(spec.initial_state) != StateKind::Initial)
        flag("initial_state does not reference a state of kind initial");
    if (spec.fail_state >= spec.states.size() || spec.kind(spec.fail_state) != StateKind::Fail)
        flag("fail_state does not reference a state of kind fail");

    // Alphabet inclusions: A subset of Delta and Gamma, pad in both, and the
    // bottom marker reserved.
    for (Symbol a : spec.input_alphabet) {
        if (!spec.in_check_alphabet(a))
            flag("input letter '" + spec.symbols.name(a) + "' missing from check alphabet");
        if (!spec.in_push_alphabet(a))
            flag("input letter '" + spec.symbols.name(a) + "' missing from push alphabet");
    }
    if (spec.pad == kBottom || !spec.in_check_alphabet(spec.pad) ||
        !spec.in_push_alphabet(spec.pad))
        flag("pad symbol must belong to both stack alphabets");

    // inverse_of must be an involution of the input alphabet.
    for (Symbol a : spec.input_alphabet) {
        auto it = spec.inverse_of.find(a);
        if (it == spec.inverse_of.end()) {
            flag("input letter '" + spec.symbols.name(a) + "' has no inverse");
            continue;
        }
        if (!spec.in_input_alphabet(it->second))
            flag("inverse of '" + spec.symbols.name(a) + "' is not an input letter");
        auto back = spec.inverse_of.find(it->second);
        if (back == spec.inverse_of.end() || back->second != a)
            flag("inverse_of is not an involution at '" + spec.symbols.name(a) + "'");
    }

    // Transition shape and determinism upon input.
    std::unordered_set<StateId> has_outgoing;
    for (const auto& e : spec.transitions.entries()) {
        if (e.from >= spec.states.size() || e.action.next >= spec.states.size()) {
            flag("transition references unknown state");
            continue;
        }
        has_outgoing.insert(e.from);
        StateKind from_kind = spec.kind(e.from);
        if (from_kind == StateKind::Fail)
            flag("fail state has an outgoing transition");
        if (from_kind == StateKind::Initial)
            flag("initial state has a stage-2 transition");
        if (is_reading(from_kind)) {
            if (!e.input)
                flag("reading state '" + spec.state(e.from).name + "' has a non-reading move");
            else if (!spec.in_input_alphabet(*e.input))
                flag("reading move consumes a symbol outside the input alphabet");
        } else if (from_kind == StateKind::NonReading) {
            if (e.input)
                flag("non-reading state '" + spec.state(e.from).name + "' has a reading move");
        }
        if (e.obs.push_top != kBottom && !spec.in_push_alphabet(e.obs.push_top))
            flag("transition observes a pushdown symbol outside the push alphabet");
        if (e.obs.check_cell != kBottom && !spec.in_check_alphabet(e.obs.check_cell))
            flag("transition observes a check symbol outside the check alphabet");
        if ((e.obs.push_top == kBottom) != (e.obs.check_cell == kBottom))
            flag("observation pairs BOT with a stack symbol");
        if (e.action.op.kind == OpKind::Push && !spec.in_push_alphabet(e.action.op.symbol))
            flag("push of a symbol outside the push alphabet");
        if (e.action.op.kind == OpKind::Pop && e.obs.push_top == kBottom)
            flag("pop on an empty pushdown");
        if (spec.kind(e.action.next) == StateKind::Initial)
            flag("transition enters the initial state");
    }
    // Determinism is enforced structurally by the keyed table; a duplicate key
    // would have been rejected at insertion.  Validate again defensively in
    // case a table was assembled by hand.
    {
        std::set<std::uint64_t> seen;
        for (const auto& e : spec.transitions.entries()) {
            auto key = pack_key(e.from, e.input, e.obs);
            if (!seen.insert(key).second)
                flag("nondeterministic stage 2 at state '" + spec.state(e.from).name + "'");
        }
    }

    // Init automaton sanity: edges over the check alphabet, labels naming
    // entry states.
    const auto& ia = spec.init_automaton;
    if (ia.start >= ia.num_states && ia.num_states > 0)
        flag("init automaton start state out of range");
    for (const auto& edge : ia.edges) {
        if (edge.from >= ia.num_states || edge.to >= ia.num_states)
            flag("init automaton edge references unknown state");
        if (!spec.in_check_alphabet(edge.symbol))
            flag("init automaton edge labelled outside the check alphabet");
    }
    if (ia.accepting.empty())
        flag("init automaton accepts nothing");
    for (const auto& [nfa_state, entry] : ia.accepting) {
        if (nfa_state >= ia.num_states)
            flag("init automaton accepting state out of range");
        if (entry >= spec.states.size() || spec.kind(entry) != StateKind::Entry)
            flag("init automaton entry label does not name an entry state");
    }

    return report;
}

}  // namespace cspda

// Direct product machine.  Stage 1 writes one factor's initialisation and a
// factor tag symbol on top, so the two init languages stay disjoint and every
// init word names its entry state unambiguously.  Stage 2 runs the chosen
// factor's own table; letters of the other factor are absorbed by stay moves
// at reading states.

#include <memory>
#include <unordered_map>

#include "cspda/constructions.hpp"

namespace cspda {

namespace {

// Symbol-id translation between a factor machine and the merged table.
struct FactorView {
    const CspdaSpec* machine = nullptr;
    std::string tag;  // "H" or "K"
    std::vector<Symbol> to_merged;    // factor id -> merged id
    std::unordered_map<Symbol, Symbol> from_merged;

    void build(SymbolTable& merged) {
        to_merged.resize(machine->symbols.size(), kBottom);
        for (Symbol s = 1; s < machine->symbols.size(); ++s) {
            Symbol m = merged.intern(machine->symbols.name(s));
            to_merged[s] = m;
            from_merged[m] = s;
        }
    }

    std::optional<Observation> translate(Observation obs) const {
        Observation out{kBottom, kBottom};
        if (obs.push_top != kBottom) {
            auto it = from_merged.find(obs.push_top);
            if (it == from_merged.end())
                return std::nullopt;
            out.push_top = it->second;
        }
        if (obs.check_cell != kBottom) {
            auto it = from_merged.find(obs.check_cell);
            if (it == from_merged.end())
                return std::nullopt;
            out.check_cell = it->second;
        }
        return out;
    }

    StackOp translate_op(const StackOp& op) const {
        if (op.kind == OpKind::Push)
            return StackOp::push(to_merged[op.symbol]);
        return op;
    }

    std::string state_name(StateId id) const { return tag + ":" + machine->state(id).name; }
};

void merge_symbols(std::vector<Symbol>& into, const std::vector<Symbol>& from) {
    for (Symbol s : from)
        if (std::find(into.begin(), into.end(), s) == into.end())
            into.push_back(s);
}

}  // namespace

CspdaSpec product_direct(const CspdaSpec& h, const CspdaSpec& k, const std::string& name) {
    for (Symbol a : h.input_alphabet)
        for (Symbol b : k.input_alphabet)
            if (h.symbols.name(a) == k.symbols.name(b))
                throw AlphabetCollisionError("input letter '" + h.symbols.name(a) +
                                             "' appears in both factors");

    auto hv = std::make_shared<FactorView>();
    auto kv = std::make_shared<FactorView>();
    auto h_copy = std::make_shared<CspdaSpec>(h);
    auto k_copy = std::make_shared<CspdaSpec>(k);
    hv->machine = h_copy.get();
    hv->tag = "H";
    kv->machine = k_copy.get();
    kv->tag = "K";

    ProgramMachine p;
    p.name = name;
    hv->build(p.symbols);
    kv->build(p.symbols);
    Symbol tag_h = p.symbols.intern("$H");
    Symbol tag_k = p.symbols.intern("$K");
    if (h.symbols.name(h.pad) != k.symbols.name(k.pad))
        throw SpecError("factor machines disagree on the pad symbol");
    p.pad = hv->to_merged[h.pad];

    for (Symbol a : h.input_alphabet)
        p.input_alphabet.push_back(hv->to_merged[a]);
    for (Symbol a : k.input_alphabet)
        p.input_alphabet.push_back(kv->to_merged[a]);
    for (Symbol a : h.input_alphabet)
        p.inverse_of[hv->to_merged[a]] = hv->to_merged[h.inverse_of.at(a)];
    for (Symbol a : k.input_alphabet)
        p.inverse_of[kv->to_merged[a]] = kv->to_merged[k.inverse_of.at(a)];

    for (Symbol s : h.check_alphabet)
        p.check_alphabet.push_back(hv->to_merged[s]);
    {
        std::vector<Symbol> extra;
        for (Symbol s : k.check_alphabet)
            extra.push_back(kv->to_merged[s]);
        merge_symbols(p.check_alphabet, extra);
    }
    p.check_alphabet.push_back(tag_h);
    p.check_alphabet.push_back(tag_k);
    merge_symbols(p.check_alphabet, p.input_alphabet);

    for (Symbol s : h.push_alphabet)
        p.push_alphabet.push_back(hv->to_merged[s]);
    {
        std::vector<Symbol> extra;
        for (Symbol s : k.push_alphabet)
            extra.push_back(kv->to_merged[s]);
        merge_symbols(p.push_alphabet, extra);
    }
    merge_symbols(p.push_alphabet, p.input_alphabet);

    // init automaton: disjoint union with a fresh start state mirroring both
    // factor start states, and factor-tagged accept paths
    InitBuilder init;
    auto start = init.add_state();
    std::uint32_t h_base = init.nfa.num_states;
    init.nfa.num_states += h.init_automaton.num_states;
    std::uint32_t k_base = init.nfa.num_states;
    init.nfa.num_states += k.init_automaton.num_states;

    auto wire_factor = [&](const CspdaSpec& m, const FactorView& view, std::uint32_t base,
                           Symbol tag) {
        for (const auto& e : m.init_automaton.edges) {
            init.edge(base + e.from, view.to_merged[e.symbol], base + e.to);
            if (e.from == m.init_automaton.start)
                init.edge(start, view.to_merged[e.symbol], base + e.to);
        }
        std::unordered_map<std::string, std::uint32_t> per_entry;
        for (const auto& [nfa_state, entry] : m.init_automaton.accepting) {
            std::string entry_name = view.tag + ":" + m.state(entry).name;
            auto it = per_entry.find(entry_name);
            if (it == per_entry.end()) {
                std::uint32_t acc = init.add_state();
                init.accept(acc, entry_name);
                it = per_entry.emplace(entry_name, acc).first;
            }
            init.edge(base + nfa_state, tag, it->second);
            if (nfa_state == m.init_automaton.start)
                init.edge(start, tag, it->second);
        }
    };
    wire_factor(h, *hv, h_base, tag_h);
    wire_factor(k, *kv, k_base, tag_k);
    init.nfa.start = start;
    p.init_automaton = init.nfa;
    p.entry_labels = init.labels;

    auto factor_of = [hv, kv](const std::string& st) -> const FactorView* {
        if (st.rfind("H:", 0) == 0)
            return hv.get();
        if (st.rfind("K:", 0) == 0)
            return kv.get();
        return nullptr;
    };

    p.kind_of = [factor_of](const std::string& st) {
        const FactorView* v = factor_of(st);
        if (!v)
            return StateKind::NonReading;
        auto id = v->machine->find_state(st.substr(2));
        return id ? v->machine->kind(*id) : StateKind::NonReading;
    };

    auto h_inputs = std::make_shared<std::vector<std::string>>();
    for (Symbol a : h.input_alphabet)
        h_inputs->push_back(h.symbols.name(a));

    p.read_move = [factor_of, hv, kv, h_inputs, p_symbols = p.symbols](
                      const std::string& st, Symbol letter,
                      Observation obs) -> std::optional<Move> {
        const FactorView* v = factor_of(st);
        if (!v)
            return std::nullopt;
        auto id = v->machine->find_state(st.substr(2));
        if (!id || !is_reading(v->machine->kind(*id)))
            return std::nullopt;
        const std::string& letter_name = p_symbols.name(letter);
        bool is_h_letter =
            std::find(h_inputs->begin(), h_inputs->end(), letter_name) != h_inputs->end();
        bool mine = (v->tag == "H") == is_h_letter;
        if (!mine)
            return Move{StackOp::stay(), st};  // other factor's letters are ignored
        auto local = v->translate(obs);
        if (!local)
            return std::nullopt;
        auto sym = v->machine->symbols.find(letter_name);
        if (!sym)
            return std::nullopt;
        const StepAction* act = v->machine->transitions.lookup(*id, *sym, *local);
        if (!act || v->machine->kind(act->next) == StateKind::Fail)
            return std::nullopt;
        return Move{v->translate_op(act->op), v->state_name(act->next)};
    };

    p.silent_move = [factor_of](const std::string& st, Observation obs) -> std::optional<Move> {
        const FactorView* v = factor_of(st);
        if (!v)
            return std::nullopt;
        auto id = v->machine->find_state(st.substr(2));
        if (!id)
            return std::nullopt;
        auto local = v->translate(obs);
        if (!local)
            return std::nullopt;
        const StepAction* act = v->machine->transitions.lookup(*id, std::nullopt, *local);
        if (!act || v->machine->kind(act->next) == StateKind::Fail)
            return std::nullopt;
        return Move{v->translate_op(act->op), v->state_name(act->next)};
    };

    p.role_of = [](const std::string& st) -> std::string {
        if (st.rfind("H:", 0) == 0)
            return "first factor running; other letters ignored";
        if (st.rfind("K:", 0) == 0)
            return "second factor running; other letters ignored";
        return "";
    };

    return compile_machine(p);
}

}  // namespace cspda

// Restricted wreath product machine: the base machine below, the top group's
// normal form above.  The check stack is a base initialisation, a boundary
// symbol, a guessed normal form word wt over the top group's basis and
// transversal (transversal cell on top), then padding.  The pushdown mirrors
// it: the base stack, a marker cell, pads up to the boundary height, and the
// normal form of wt times the top-group projection read so far.  Base letters
// are processed exactly while that region is empty; after every letter the
// machine probes whether the region equals wt again with the base machine at
// its entry, and if so descends to the canonical entry configuration.

#include <algorithm>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "cspda/constructions.hpp"

namespace cspda {

namespace {

enum class Phase {
    HDescend,     // popping pads to reach the base machine's stack
    HRead,        // feed the pending base letter to the base machine
    HSub,         // base machine non-reading run
    HUp,          // push the marker over the base stack
    HUpPad,       // pads up to the boundary height
    KUp,          // entry ascent: marker first
    KUpPad,       // pads up to the boundary height
    KCopy,        // copy wt from the check stack: climb one cell
    KCopyPeek,    // inspect the climbed cell
    KCopyPush,    // write the copied wt cell
    KRead,        // feed the pending top-group letter to the region
    KEmit,        // push a rewrite word with free cancellation, then a coset
    Probe,        // entry probe: base at entry and region equal to wt?
    ProbePeek,
    Compare,
    Restore,      // mismatch: re-push the matched cells that were popped
    RestorePeek,
    RestoreCopy,
    Descend,      // all matched: pop down to the entry configuration
};

struct Node {
    Phase phase;
    StateId base_state = 0;
    Letter pending;        // input letter riding along
    GWord emit;            // rewrite word still to push
    Letter coset;          // coset to push after the word
    Symbol sym = kBottom;  // copied cell
    bool wt_empty = false; // probe/compare/descend: the region was empty
};

struct WreathBuilder {
    const CspdaSpec* base = nullptr;
    VirtuallyFreeData top;
    SymbolTable symbols;
    Symbol pad = kBottom;
    Symbol boundary = kBottom;
    Symbol marker = kBottom;
    std::unordered_map<Letter, Symbol> top_syms;
    std::unordered_map<Symbol, Letter> top_names;
    StateId base_entry = 0;

    std::unordered_map<std::string, Node> nodes;

    std::string up_name(StateId q) const { return "up[" + base->state(q).name + "]"; }
    static std::string entry_name(bool wt_empty) { return wt_empty ? "entry[wt0]" : "entry[wt]"; }

    std::string intern(Node node) {
        std::ostringstream name;
        auto bn = [&] { return base->state(node.base_state).name; };
        switch (node.phase) {
            case Phase::HDescend: name << "h.descend[" << bn() << "|x=" << node.pending << "]"; break;
            case Phase::HRead: name << "h.read[" << bn() << "|x=" << node.pending << "]"; break;
            case Phase::HSub: name << "h.sub[" << bn() << "]"; break;
            case Phase::HUp: name << "h.up[" << bn() << "]"; break;
            case Phase::HUpPad: name << "h.up.pad[" << bn() << "]"; break;
            case Phase::KUp: name << "k.up[" << bn() << "|x=" << node.pending << "]"; break;
            case Phase::KUpPad: name << "k.up.pad[" << bn() << "|x=" << node.pending << "]"; break;
            case Phase::KCopy: name << "k.copy[" << bn() << "|x=" << node.pending << "]"; break;
            case Phase::KCopyPeek:
                name << "k.copy.at[" << bn() << "|x=" << node.pending << "]";
                break;
            case Phase::KCopyPush:
                name << "k.copy.push[" << bn() << "|x=" << node.pending << ","
                     << symbols.name(node.sym) << "]";
                break;
            case Phase::KRead: name << "k.read[" << bn() << "|x=" << node.pending << "]"; break;
            case Phase::KEmit: {
                name << "k.emit[" << bn() << "|";
                for (std::size_t i = 0; i < node.emit.size(); ++i) {
                    if (i)
                        name << '.';
                    name << node.emit[i];
                }
                name << "|t=" << node.coset << "]";
                break;
            }
            case Phase::Probe: name << "probe[" << bn() << "]"; break;
            case Phase::ProbePeek:
                name << "probe.at[" << bn() << (node.wt_empty ? "|empty" : "") << "]";
                break;
            case Phase::Compare:
                name << "wt.compare[" << bn() << (node.wt_empty ? "|empty" : "") << "]";
                break;
            case Phase::Restore: name << "wt.restore[" << bn() << "]"; break;
            case Phase::RestorePeek: name << "wt.restore.at[" << bn() << "]"; break;
            case Phase::RestoreCopy:
                name << "wt.restore.push[" << bn() << "," << symbols.name(node.sym) << "]";
                break;
            case Phase::Descend: name << "descend[" << (node.wt_empty ? "wt0" : "wt") << "]"; break;
        }
        std::string out = name.str();
        nodes.emplace(out, std::move(node));
        return out;
    }

    bool is_top_sym(Symbol s) const { return top_names.count(s) != 0; }
    bool is_base_check(Symbol s) const {
        return s != kBottom && s < base->symbols.size() && base->in_check_alphabet(s);
    }

    // the normal form region is empty: its base cell holds a pad or the marker
    bool region_empty(Observation obs) const {
        return obs.check_cell == boundary && (obs.push_top == pad || obs.push_top == marker);
    }

    std::optional<Move> route_base(const StepAction& act) {
        StateKind k = base->kind(act.next);
        if (k == StateKind::Fail)
            return std::nullopt;
        Node next{k == StateKind::NonReading ? Phase::HSub : Phase::HUp};
        next.base_state = act.next;
        return Move{act.op, intern(std::move(next))};
    }

    std::optional<Move> step(const std::string& name, Observation obs) {
        auto it = nodes.find(name);
        if (it == nodes.end())
            return std::nullopt;
        const Node node = it->second;
        switch (node.phase) {
            case Phase::HDescend: {
                if (obs.push_top == pad) {
                    Node keep = node;
                    return Move{StackOp::pop(), intern(std::move(keep))};
                }
                if (obs.push_top == marker) {
                    Node read = node;
                    read.phase = Phase::HRead;
                    return Move{StackOp::pop(), intern(std::move(read))};
                }
                return std::nullopt;
            }
            case Phase::HRead: {
                auto letter = base->symbols.find(node.pending);
                if (!letter)
                    return std::nullopt;
                const StepAction* act = base->transitions.lookup(node.base_state, *letter, obs);
                if (!act)
                    return std::nullopt;
                return route_base(*act);
            }
            case Phase::HSub: {
                const StepAction* act =
                    base->transitions.lookup(node.base_state, std::nullopt, obs);
                if (!act)
                    return std::nullopt;
                return route_base(*act);
            }
            case Phase::HUp: {
                Node up = node;
                up.phase = Phase::HUpPad;
                return Move{StackOp::push(marker), intern(std::move(up))};
            }
            case Phase::HUpPad: {
                if (obs.check_cell == boundary) {  // the boundary cell is filled
                    Node probe{Phase::Probe};
                    probe.base_state = node.base_state;
                    return Move{StackOp::stay(), intern(std::move(probe))};
                }
                if (is_base_check(obs.check_cell)) {
                    Node keep = node;
                    return Move{StackOp::push(pad), intern(std::move(keep))};
                }
                return std::nullopt;
            }
            case Phase::KUp: {
                Node up = node;
                up.phase = Phase::KUpPad;
                return Move{StackOp::push(marker), intern(std::move(up))};
            }
            case Phase::KUpPad: {
                if (obs.check_cell == boundary) {
                    Node copy = node;
                    copy.phase = Phase::KCopy;
                    return Move{StackOp::stay(), intern(std::move(copy))};
                }
                if (is_base_check(obs.check_cell)) {
                    Node keep = node;
                    return Move{StackOp::push(pad), intern(std::move(keep))};
                }
                return std::nullopt;
            }
            case Phase::KCopy: {
                Node peek = node;
                peek.phase = Phase::KCopyPeek;
                return Move{StackOp::push(pad), intern(std::move(peek))};
            }
            case Phase::KCopyPeek: {
                if (obs.push_top != pad)
                    return std::nullopt;
                if (is_top_sym(obs.check_cell)) {
                    Node copy = node;
                    copy.phase = Phase::KCopyPush;
                    copy.sym = obs.check_cell;
                    return Move{StackOp::pop(), intern(std::move(copy))};
                }
                if (obs.check_cell == pad) {  // the whole of wt is copied
                    Node read = node;
                    read.phase = Phase::KRead;
                    return Move{StackOp::pop(), intern(std::move(read))};
                }
                return std::nullopt;
            }
            case Phase::KCopyPush: {
                Node copy = node;
                copy.phase = Phase::KCopy;
                copy.sym = kBottom;
                return Move{StackOp::push(node.sym), intern(std::move(copy))};
            }
            case Phase::KRead: {
                Letter t;
                StackOp op = StackOp::stay();
                if (is_top_sym(obs.push_top)) {
                    const Letter& top_letter = top_names.at(obs.push_top);
                    if (std::find(top.transversal.begin(), top.transversal.end(), top_letter) !=
                        top.transversal.end()) {
                        t = top_letter;
                        op = StackOp::pop();
                    }
                } else if (!region_empty(obs)) {
                    return std::nullopt;
                }
                const auto& rule = top.rule(t, node.pending);
                Node emit{Phase::KEmit};
                emit.base_state = node.base_state;
                emit.emit = rule.word;
                emit.coset = rule.coset;
                return Move{op, intern(std::move(emit))};
            }
            case Phase::KEmit: {
                if (!node.emit.empty()) {
                    const Letter& next_letter = node.emit.front();
                    Symbol next_sym = top_syms.at(next_letter);
                    Symbol inv_sym = top_syms.at(top.basis.inverse_of(next_letter));
                    Node rest = node;
                    rest.emit.erase(rest.emit.begin());
                    if (obs.push_top == inv_sym)
                        return Move{StackOp::pop(), intern(std::move(rest))};
                    return Move{StackOp::push(next_sym), intern(std::move(rest))};
                }
                if (!node.coset.empty()) {
                    Node done = node;
                    done.coset.clear();
                    return Move{StackOp::push(top_syms.at(node.coset)), intern(std::move(done))};
                }
                Node probe{Phase::Probe};
                probe.base_state = node.base_state;
                return Move{StackOp::stay(), intern(std::move(probe))};
            }
            case Phase::Probe: {
                if (node.base_state != base_entry)
                    return Move{StackOp::stay(), up_name(node.base_state)};
                if (obs.check_cell == pad)  // region longer than wt
                    return Move{StackOp::stay(), up_name(node.base_state)};
                Node peek = node;
                peek.phase = Phase::ProbePeek;
                peek.wt_empty = region_empty(obs);
                return Move{StackOp::push(pad), intern(std::move(peek))};
            }
            case Phase::ProbePeek: {
                if (obs.push_top != pad)
                    return std::nullopt;
                if (is_top_sym(obs.check_cell))  // region shorter than wt
                    return Move{StackOp::pop(), up_name(node.base_state)};
                if (obs.check_cell == pad) {  // aligned with the top of wt
                    Node cmp = node;
                    cmp.phase = Phase::Compare;
                    return Move{StackOp::pop(), intern(std::move(cmp))};
                }
                return std::nullopt;
            }
            case Phase::Compare: {
                if (region_empty(obs)) {  // every wt cell matched
                    Node desc{Phase::Descend};
                    desc.wt_empty = node.wt_empty;
                    return Move{StackOp::stay(), intern(std::move(desc))};
                }
                if (is_top_sym(obs.push_top) && is_top_sym(obs.check_cell)) {
                    if (obs.push_top == obs.check_cell) {
                        Node keep = node;
                        return Move{StackOp::pop(), intern(std::move(keep))};
                    }
                    Node rest = node;
                    rest.phase = Phase::Restore;
                    rest.wt_empty = false;
                    return Move{StackOp::stay(), intern(std::move(rest))};
                }
                return std::nullopt;
            }
            case Phase::Restore: {
                Node peek = node;
                peek.phase = Phase::RestorePeek;
                return Move{StackOp::push(pad), intern(std::move(peek))};
            }
            case Phase::RestorePeek: {
                if (obs.push_top != pad)
                    return std::nullopt;
                if (is_top_sym(obs.check_cell)) {
                    Node copy = node;
                    copy.phase = Phase::RestoreCopy;
                    copy.sym = obs.check_cell;
                    return Move{StackOp::pop(), intern(std::move(copy))};
                }
                if (obs.check_cell == pad)  // the region is whole again
                    return Move{StackOp::pop(), up_name(node.base_state)};
                return std::nullopt;
            }
            case Phase::RestoreCopy: {
                Node rest = node;
                rest.phase = Phase::Restore;
                rest.sym = kBottom;
                return Move{StackOp::push(node.sym), intern(std::move(rest))};
            }
            case Phase::Descend: {
                if (obs.push_top == pad || obs.push_top == marker) {
                    Node keep = node;
                    return Move{StackOp::pop(), intern(std::move(keep))};
                }
                if (obs.push_top == kBottom)
                    return Move{StackOp::stay(), entry_name(node.wt_empty)};
                return std::nullopt;
            }
        }
        return std::nullopt;
    }
};

}  // namespace

CspdaSpec product_wreath(const CspdaSpec& h, const VirtuallyFreeData& k_data,
                         const std::string& name) {
    k_data.validate();
    for (const auto& a : k_data.alphabet.letters)
        for (Symbol s : h.input_alphabet)
            if (h.symbols.name(s) == a)
                throw AlphabetCollisionError("letter '" + a + "' appears in both groups");
    std::vector<Letter> top_letters = k_data.basis.letters;
    for (const auto& t : k_data.transversal)
        if (std::find(top_letters.begin(), top_letters.end(), t) == top_letters.end())
            top_letters.push_back(t);
    for (const auto& l : top_letters)
        if (h.symbols.find(l))
            throw AlphabetCollisionError("top-group symbol '" + l +
                                         "' collides with a base machine symbol");

    auto wb = std::make_shared<WreathBuilder>();
    auto base_copy = std::make_shared<CspdaSpec>(h);
    wb->base = base_copy.get();
    wb->top = k_data;

    // the base machine must have a single labelled entry state
    {
        std::optional<StateId> entry;
        for (const auto& [nfa_state, e] : h.init_automaton.accepting) {
            if (entry && *entry != e)
                throw SpecError("wreath base machines need a single entry state");
            entry = e;
        }
        if (!entry)
            throw SpecError("base machine accepts no initialisation");
        wb->base_entry = *entry;
    }

    ProgramMachine p;
    p.name = name;
    p.symbols = h.symbols;  // base ids preserved for direct table lookups
    wb->pad = h.pad;
    wb->boundary = p.symbols.intern("@K");
    wb->marker = p.symbols.intern("^H");
    for (const auto& l : top_letters) {
        Symbol s = p.symbols.intern(l);
        wb->top_syms[l] = s;
        wb->top_names[s] = l;
    }
    for (Symbol a : h.input_alphabet)
        p.input_alphabet.push_back(a);
    for (const auto& a : k_data.alphabet.letters)
        p.input_alphabet.push_back(p.symbols.intern(a));
    for (Symbol a : h.input_alphabet)
        p.inverse_of[a] = h.inverse_of.at(a);
    for (const auto& a : k_data.alphabet.letters)
        p.inverse_of[*p.symbols.find(a)] = *p.symbols.find(k_data.alphabet.inverse_of(a));
    p.pad = h.pad;

    p.check_alphabet = h.check_alphabet;
    p.check_alphabet.push_back(wb->boundary);
    for (const auto& l : top_letters)
        p.check_alphabet.push_back(wb->top_syms[l]);
    for (Symbol a : p.input_alphabet)
        if (std::find(p.check_alphabet.begin(), p.check_alphabet.end(), a) ==
            p.check_alphabet.end())
            p.check_alphabet.push_back(a);

    p.push_alphabet = h.push_alphabet;
    p.push_alphabet.push_back(wb->marker);
    for (const auto& l : top_letters)
        p.push_alphabet.push_back(wb->top_syms[l]);
    for (Symbol a : p.input_alphabet)
        if (std::find(p.push_alphabet.begin(), p.push_alphabet.end(), a) ==
            p.push_alphabet.end())
            p.push_alphabet.push_back(a);

    wb->symbols = p.symbols;

    // init automaton: base initialisation, boundary, a freely reduced word
    // over the basis, an optional transversal cell, padding
    InitBuilder init;
    init.nfa = h.init_automaton;
    init.nfa.num_states = h.init_automaton.num_states;
    auto nf0 = init.add_state();
    auto nfT = init.add_state();
    auto nfP0 = init.add_state();
    auto nfP1 = init.add_state();
    std::unordered_map<Letter, std::uint32_t> nfB;
    for (const auto& b : k_data.basis.letters)
        nfB[b] = init.add_state();
    for (const auto& [nfa_state, e] : h.init_automaton.accepting)
        init.edge(nfa_state, wb->boundary, nf0);
    for (const auto& b : k_data.basis.letters) {
        init.edge(nf0, wb->top_syms[b], nfB[b]);
        for (const auto& b2 : k_data.basis.letters)
            if (b2 != k_data.basis.inverse_of(b))
                init.edge(nfB[b], wb->top_syms[b2], nfB[b2]);
        for (const auto& t : k_data.transversal)
            init.edge(nfB[b], wb->top_syms[t], nfT);
        init.edge(nfB[b], wb->pad, nfP1);
    }
    for (const auto& t : k_data.transversal)
        init.edge(nf0, wb->top_syms[t], nfT);
    init.edge(nf0, wb->pad, nfP0);
    init.edge(nfT, wb->pad, nfP1);
    init.edge(nfP0, wb->pad, nfP0);
    init.edge(nfP1, wb->pad, nfP1);
    init.accept(nf0, WreathBuilder::entry_name(true));
    init.accept(nfP0, WreathBuilder::entry_name(true));
    init.accept(nfT, WreathBuilder::entry_name(false));
    init.accept(nfP1, WreathBuilder::entry_name(false));
    for (const auto& [b, state] : nfB)
        init.accept(state, WreathBuilder::entry_name(false));
    p.init_automaton = init.nfa;
    p.entry_labels = init.labels;

    p.kind_of = [](const std::string& st) {
        if (st.rfind("entry[", 0) == 0)
            return StateKind::Entry;
        if (st.rfind("up[", 0) == 0)
            return StateKind::AcceptingReading;
        return StateKind::NonReading;
    };

    auto k_letters = std::make_shared<std::vector<Letter>>(k_data.alphabet.letters);
    p.read_move = [wb, base_copy, k_letters, table = p.symbols](
                      const std::string& st, Symbol letter,
                      Observation obs) -> std::optional<Move> {
        const Letter letter_name = table.name(letter);
        bool is_k = std::find(k_letters->begin(), k_letters->end(), letter_name) !=
                    k_letters->end();
        if (st == "entry[wt0]" || st == "entry[wt]") {
            if (obs.push_top != kBottom)
                return std::nullopt;
            if (is_k) {
                Node up{Phase::KUp};
                up.base_state = wb->base_entry;
                up.pending = letter_name;
                return Move{StackOp::stay(), wb->intern(std::move(up))};
            }
            if (st == "entry[wt]")  // the guessed position is elsewhere
                return Move{StackOp::stay(), st};
            auto sym = base_copy->symbols.find(letter_name);
            if (!sym)
                return std::nullopt;
            const StepAction* act = base_copy->transitions.lookup(wb->base_entry, *sym, obs);
            if (!act)
                return std::nullopt;
            return wb->route_base(*act);
        }
        if (st.rfind("up[", 0) != 0)
            return std::nullopt;
        auto q = base_copy->find_state(st.substr(3, st.size() - 4));
        if (!q)
            return std::nullopt;
        if (is_k) {
            Node read{Phase::KRead};
            read.base_state = *q;
            read.pending = letter_name;
            return Move{StackOp::stay(), wb->intern(std::move(read))};
        }
        // a base letter: process it only when the region is empty
        if (wb->is_top_sym(obs.push_top))
            return Move{StackOp::stay(), st};
        if (wb->region_empty(obs)) {
            Node desc{obs.push_top == wb->marker ? Phase::HRead : Phase::HDescend};
            desc.base_state = *q;
            desc.pending = letter_name;
            return Move{StackOp::pop(), wb->intern(std::move(desc))};
        }
        return std::nullopt;
    };

    p.silent_move = [wb](const std::string& st, Observation obs) { return wb->step(st, obs); };

    p.role_of = [](const std::string& st) -> std::string {
        if (st.rfind("entry[", 0) == 0)
            return "entry: base at entry, normal form region equal to wt";
        if (st.rfind("up[", 0) == 0)
            return "accepting: position or checked component nontrivial";
        if (st.rfind("h.", 0) == 0)
            return "processing a base letter at the guessed position";
        if (st.rfind("k.", 0) == 0)
            return "updating the top-group normal form";
        if (st.rfind("probe", 0) == 0 || st.rfind("wt.", 0) == 0)
            return "entry probe: comparing the region against wt";
        if (st.rfind("descend", 0) == 0)
            return "returning to the entry configuration";
        return "";
    };

    return compile_machine(p);
}

}  // namespace cspda

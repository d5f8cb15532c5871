// Free product machine.  The check stack is a sequence of check substacks,
// each a valid initialisation of one factor followed by a symbol naming the
// entry state it leads to, factors strictly alternating.  The running factor
// works inside its current substack; its bottom boundary shows the pair
// (recorded state of the interrupted computation below, that computation's
// entry symbol), which is exactly what the descent needs to resume it.  On a
// foreign letter the head climbs to the top of its substack pushing pads,
// records the current state there, reads the entry symbol at the top of the
// next substack, and starts that factor from its entry configuration.

#include <memory>
#include <sstream>
#include <unordered_map>

#include "cspda/constructions.hpp"

namespace cspda {

namespace {

struct FactorSide {
    const CspdaSpec* machine = nullptr;
    std::string tag;  // "H" or "K"
    std::vector<Symbol> to_merged;
    std::unordered_map<Symbol, Symbol> from_merged;
    std::vector<StateId> entry_states;                  // labelled by the init automaton
    std::unordered_map<StateId, Symbol> entry_symbol;   // check symbol per entry state
    std::unordered_map<StateId, Symbol> state_symbol;   // pushdown symbol per reading state
    std::unordered_map<Symbol, StateId> entry_of;       // merged symbol -> entry state
    std::unordered_map<Symbol, StateId> recorded_of;    // merged symbol -> reading state

    void map_symbols(SymbolTable& merged) {
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
        if ((out.push_top == kBottom) != (out.check_cell == kBottom))
            return std::nullopt;
        return out;
    }

    StackOp translate_op(const StackOp& op) const {
        if (op.kind == OpKind::Push)
            return StackOp::push(to_merged[op.symbol]);
        return op;
    }
};

enum class Phase {
    Sub,       // factor non-reading state running
    Settle,    // factor reached a reading state: entry/descend/rest
    DescPad,   // popping pads to resume the interrupted computation
    Ascend,    // pushing pads to the top of the current substack
    AscPeek,   // inspecting the cell just climbed into
    AscMark,   // push the recorded-state symbol at the entry-symbol cell
    Ascend2,   // pushing pads through the next substack
    Asc2Peek,  // looking for the next substack's entry symbol
    Return,    // popping pads back to the next substack's base
};

struct Node {
    Phase phase;
    char factor = 'H';     // the factor the embedded state belongs to
    StateId state = 0;     // factor state (Sub/Settle/Ascend*/...)
    StateId entry = 0;     // current sub-computation's entry state
    Letter pending;        // foreign letter riding through an ascent
    StateId next_entry = 0;  // Return: entry state of the substack being entered
};

struct FpBuilder {
    FactorSide h, k;
    SymbolTable symbols;
    Symbol pad = kBottom;
    std::unordered_map<std::string, Node> nodes;

    FactorSide& side(char f) { return f == 'H' ? h : k; }
    const FactorSide& cside(char f) const { return f == 'H' ? h : k; }
    static char other(char f) { return f == 'H' ? 'K' : 'H'; }

    std::string reading_name(char f, StateId q, StateId e) const {
        const FactorSide& s = cside(f);
        if (q == e)
            return "entry[" + s.tag + ":" + s.machine->state(e).name + "]";
        return "run[" + s.tag + ":" + s.machine->state(q).name + "|e=" +
               s.machine->state(e).name + "]";
    }

    std::string intern(Node node) {
        const FactorSide& s = cside(node.factor);
        std::ostringstream name;
        switch (node.phase) {
            case Phase::Sub:
                name << "sub[" << s.tag << ":" << s.machine->state(node.state).name
                     << "|e=" << s.machine->state(node.entry).name << "]";
                break;
            case Phase::Settle:
                name << "settle[" << s.tag << ":" << s.machine->state(node.state).name
                     << "|e=" << s.machine->state(node.entry).name << "]";
                break;
            case Phase::DescPad:
                name << "descend[" << s.tag << ":" << s.machine->state(node.state).name
                     << "|e=" << s.machine->state(node.entry).name << "]";
                break;
            case Phase::Ascend:
                name << "ascend[" << s.tag << ":" << s.machine->state(node.state).name
                     << "|e=" << s.machine->state(node.entry).name << "|x=" << node.pending
                     << "]";
                break;
            case Phase::AscPeek:
                name << "ascend.at[" << s.tag << ":" << s.machine->state(node.state).name
                     << "|e=" << s.machine->state(node.entry).name << "|x=" << node.pending
                     << "]";
                break;
            case Phase::AscMark:
                name << "record[" << s.tag << ":" << s.machine->state(node.state).name
                     << "|x=" << node.pending << "]";
                break;
            case Phase::Ascend2:
                name << "enter[" << s.tag << "|x=" << node.pending << "]";
                break;
            case Phase::Asc2Peek:
                name << "enter.at[" << s.tag << "|x=" << node.pending << "]";
                break;
            case Phase::Return:
                name << "start[" << s.tag << ":"
                     << s.machine->state(node.next_entry).name << "|x=" << node.pending << "]";
                break;
        }
        std::string out = name.str();
        nodes.emplace(out, std::move(node));
        return out;
    }

    // Routing after the running factor lands in a reading state q: descend if
    // this sub-computation is back at its entry configuration, rest otherwise.
    std::optional<Move> settle(char f, StateId q, StateId e, Observation obs) {
        const FactorSide& s = cside(f);
        if (q != e)
            return Move{StackOp::stay(), reading_name(f, q, e)};
        if (obs.push_top == kBottom && obs.check_cell == kBottom)
            return Move{StackOp::stay(), reading_name(f, e, e)};  // the machine's entry
        // at the base of a non-bottom substack the boundary pair is visible
        const FactorSide& o = cside(other(f));
        auto rec = o.recorded_of.find(obs.push_top);
        auto ent = o.entry_of.find(obs.check_cell);
        if (rec != o.recorded_of.end() && ent != o.entry_of.end()) {
            Node desc{Phase::DescPad, other(f)};
            desc.state = rec->second;
            desc.entry = ent->second;
            return Move{StackOp::pop(), intern(std::move(desc))};
        }
        return std::nullopt;  // malformed boundary
    }

    // A sub-computation's base boundary (the recorded state and entry symbol
    // of the interrupted computation below) reads as an empty stack.
    std::optional<Observation> local_view(char f, Observation obs) const {
        if (obs.push_top == kBottom && obs.check_cell == kBottom)
            return obs;
        const FactorSide& o = cside(other(f));
        if (o.recorded_of.count(obs.push_top) && o.entry_of.count(obs.check_cell))
            return Observation{kBottom, kBottom};
        return cside(f).translate(obs);
    }

    // The factor's own transition, translated; reading moves feed `input`.
    std::optional<Move> factor_step(char f, StateId state, StateId e,
                                    std::optional<Symbol> local_input, Observation obs) {
        const FactorSide& s = cside(f);
        auto local = local_view(f, obs);
        if (!local)
            return std::nullopt;
        const StepAction* act = s.machine->transitions.lookup(state, local_input, *local);
        if (!act || s.machine->kind(act->next) == StateKind::Fail)
            return std::nullopt;
        StackOp op = s.translate_op(act->op);
        StateKind nk = s.machine->kind(act->next);
        if (nk == StateKind::NonReading) {
            Node sub{Phase::Sub, f};
            sub.state = act->next;
            sub.entry = e;
            return Move{op, intern(std::move(sub))};
        }
        Node st{Phase::Settle, f};
        st.state = act->next;
        st.entry = e;
        return Move{op, intern(std::move(st))};
    }

    std::optional<Move> step(const std::string& name, Observation obs) {
        auto it = nodes.find(name);
        if (it == nodes.end())
            return std::nullopt;
        const Node node = it->second;
        const FactorSide& s = cside(node.factor);
        const FactorSide& o = cside(other(node.factor));
        switch (node.phase) {
            case Phase::Sub:
                return factor_step(node.factor, node.state, node.entry, std::nullopt, obs);
            case Phase::Settle:
                return settle(node.factor, node.state, node.entry, obs);
            case Phase::DescPad: {
                if (obs.push_top == pad) {
                    Node keep = node;
                    return Move{StackOp::pop(), intern(std::move(keep))};
                }
                // the interrupted stack top (or the boundary below it)
                return settle(node.factor, node.state, node.entry, obs);
            }
            case Phase::Ascend: {
                // climb one cell, then inspect where the pad landed
                Node peek = node;
                peek.phase = Phase::AscPeek;
                return Move{StackOp::push(pad), intern(std::move(peek))};
            }
            case Phase::AscPeek: {
                if (obs.push_top != pad)
                    return std::nullopt;
                if (s.from_merged.count(obs.check_cell)) {  // still inside our substack
                    Node up = node;
                    up.phase = Phase::Ascend;
                    return Move{StackOp::stay(), intern(std::move(up))};
                }
                if (s.entry_of.count(obs.check_cell)) {
                    // the pad landed on the entry-symbol cell: swap it for the
                    // recorded-state symbol
                    Node mark = node;
                    mark.phase = Phase::AscMark;
                    return Move{StackOp::pop(), intern(std::move(mark))};
                }
                return std::nullopt;
            }
            case Phase::AscMark: {
                Node enter{Phase::Ascend2, other(node.factor)};
                enter.pending = node.pending;
                return Move{StackOp::push(s.state_symbol.at(node.state)),
                            intern(std::move(enter))};
            }
            case Phase::Ascend2: {
                Node peek = node;
                peek.phase = Phase::Asc2Peek;
                return Move{StackOp::push(pad), intern(std::move(peek))};
            }
            case Phase::Asc2Peek: {
                if (obs.push_top != pad)
                    return std::nullopt;
                if (s.from_merged.count(obs.check_cell)) {  // next substack's init cells
                    Node up = node;
                    up.phase = Phase::Ascend2;
                    return Move{StackOp::stay(), intern(std::move(up))};
                }
                auto ent = s.entry_of.find(obs.check_cell);
                if (ent != s.entry_of.end()) {
                    Node ret{Phase::Return, node.factor};
                    ret.next_entry = ent->second;
                    ret.pending = node.pending;
                    return Move{StackOp::pop(), intern(std::move(ret))};
                }
                return std::nullopt;
            }
            case Phase::Return: {
                if (obs.push_top == pad) {
                    Node keep = node;
                    return Move{StackOp::pop(), intern(std::move(keep))};
                }
                // at the recorded-state symbol: the new substack's base
                auto sym = s.machine->symbols.find(node.pending);
                if (!sym)
                    return std::nullopt;
                return factor_step(node.factor, node.next_entry, node.next_entry, *sym, obs);
            }
        }
        return std::nullopt;
    }
};

}  // namespace

CspdaSpec product_free(const CspdaSpec& h, const CspdaSpec& k, const std::string& name) {
    for (Symbol a : h.input_alphabet)
        for (Symbol b : k.input_alphabet)
            if (h.symbols.name(a) == k.symbols.name(b))
                throw AlphabetCollisionError("input letter '" + h.symbols.name(a) +
                                             "' appears in both factors");
    if (h.symbols.name(h.pad) != k.symbols.name(k.pad))
        throw SpecError("factor machines disagree on the pad symbol");

    auto fb = std::make_shared<FpBuilder>();
    auto h_copy = std::make_shared<CspdaSpec>(h);
    auto k_copy = std::make_shared<CspdaSpec>(k);
    fb->h.machine = h_copy.get();
    fb->h.tag = "H";
    fb->k.machine = k_copy.get();
    fb->k.tag = "K";

    ProgramMachine p;
    p.name = name;
    fb->h.map_symbols(p.symbols);
    fb->k.map_symbols(p.symbols);
    fb->symbols = p.symbols;  // refreshed below after the marker symbols
    fb->pad = fb->h.to_merged[h.pad];
    p.pad = fb->pad;

    // entry symbols for labelled entry states; recorded-state symbols for
    // every reading state
    auto wire_side = [&p](FactorSide& side) {
        const CspdaSpec& m = *side.machine;
        for (const auto& [nfa_state, entry] : m.init_automaton.accepting) {
            if (side.entry_symbol.count(entry))
                continue;
            Symbol sym = p.symbols.intern("e" + side.tag + ":" + m.state(entry).name);
            side.entry_symbol[entry] = sym;
            side.entry_of[sym] = entry;
            side.entry_states.push_back(entry);
        }
        for (StateId q = 0; q < m.states.size(); ++q) {
            if (!is_reading(m.kind(q)))
                continue;
            Symbol sym = p.symbols.intern("s" + side.tag + ":" + m.state(q).name);
            side.state_symbol[q] = sym;
            side.recorded_of[sym] = q;
        }
    };
    wire_side(fb->h);
    wire_side(fb->k);
    fb->symbols = p.symbols;

    for (Symbol a : h.input_alphabet)
        p.input_alphabet.push_back(fb->h.to_merged[a]);
    for (Symbol a : k.input_alphabet)
        p.input_alphabet.push_back(fb->k.to_merged[a]);
    for (Symbol a : h.input_alphabet)
        p.inverse_of[fb->h.to_merged[a]] = fb->h.to_merged[h.inverse_of.at(a)];
    for (Symbol a : k.input_alphabet)
        p.inverse_of[fb->k.to_merged[a]] = fb->k.to_merged[k.inverse_of.at(a)];

    for (Symbol s : h.check_alphabet)
        p.check_alphabet.push_back(fb->h.to_merged[s]);
    for (Symbol s : k.check_alphabet) {
        Symbol m = fb->k.to_merged[s];
        if (std::find(p.check_alphabet.begin(), p.check_alphabet.end(), m) ==
            p.check_alphabet.end())
            p.check_alphabet.push_back(m);
    }
    for (const auto& [e, sym] : fb->h.entry_symbol)
        p.check_alphabet.push_back(sym);
    for (const auto& [e, sym] : fb->k.entry_symbol)
        p.check_alphabet.push_back(sym);
    for (Symbol a : p.input_alphabet)
        if (std::find(p.check_alphabet.begin(), p.check_alphabet.end(), a) ==
            p.check_alphabet.end())
            p.check_alphabet.push_back(a);

    for (Symbol s : h.push_alphabet)
        p.push_alphabet.push_back(fb->h.to_merged[s]);
    for (Symbol s : k.push_alphabet) {
        Symbol m = fb->k.to_merged[s];
        if (std::find(p.push_alphabet.begin(), p.push_alphabet.end(), m) ==
            p.push_alphabet.end())
            p.push_alphabet.push_back(m);
    }
    for (const auto& [q, sym] : fb->h.state_symbol)
        p.push_alphabet.push_back(sym);
    for (const auto& [q, sym] : fb->k.state_symbol)
        p.push_alphabet.push_back(sym);
    for (Symbol a : p.input_alphabet)
        if (std::find(p.push_alphabet.begin(), p.push_alphabet.end(), a) ==
            p.push_alphabet.end())
            p.push_alphabet.push_back(a);

    // init automaton: alternating substacks, every substack a factor init
    // word plus its entry symbol, the first substack's entry labelling the
    // whole word
    InitBuilder init;
    auto start = init.add_state();
    struct Block {
        std::uint32_t base;
    };
    auto embed = [&](const FactorSide& side, bool mirror_start) -> Block {
        const auto& ia = side.machine->init_automaton;
        Block b{init.nfa.num_states};
        init.nfa.num_states += ia.num_states;
        for (const auto& e : ia.edges) {
            init.edge(b.base + e.from, side.to_merged[e.symbol], b.base + e.to);
            if (mirror_start && e.from == ia.start)
                init.edge(start, side.to_merged[e.symbol], b.base + e.to);
        }
        return b;
    };

    // first substack blocks
    Block first_h = embed(fb->h, true);
    Block first_k = embed(fb->k, true);

    struct LabelChain {
        std::uint32_t after_h;  // just finished an H substack (next must be K)
        std::uint32_t after_k;
    };
    std::vector<std::pair<std::string, LabelChain>> chains;
    auto make_chain = [&](const std::string& label) -> LabelChain {
        LabelChain chain{init.add_state(), init.add_state()};
        init.accept(chain.after_h, label);
        init.accept(chain.after_k, label);
        Block next_k = embed(fb->k, false);
        Block next_h = embed(fb->h, false);
        // mirror the factor start edges out of the after-nodes
        for (const auto& e : fb->k.machine->init_automaton.edges)
            if (e.from == fb->k.machine->init_automaton.start)
                init.edge(chain.after_h, fb->k.to_merged[e.symbol], next_k.base + e.to);
        for (const auto& e : fb->h.machine->init_automaton.edges)
            if (e.from == fb->h.machine->init_automaton.start)
                init.edge(chain.after_k, fb->h.to_merged[e.symbol], next_h.base + e.to);
        for (const auto& [nfa_state, entry] : fb->k.machine->init_automaton.accepting) {
            Symbol sym = fb->k.entry_symbol.at(entry);
            init.edge(next_k.base + nfa_state, sym, chain.after_k);
            if (nfa_state == fb->k.machine->init_automaton.start)
                init.edge(chain.after_h, sym, chain.after_k);
        }
        for (const auto& [nfa_state, entry] : fb->h.machine->init_automaton.accepting) {
            Symbol sym = fb->h.entry_symbol.at(entry);
            init.edge(next_h.base + nfa_state, sym, chain.after_h);
            if (nfa_state == fb->h.machine->init_automaton.start)
                init.edge(chain.after_k, sym, chain.after_h);
        }
        return chain;
    };

    for (char f : {'H', 'K'}) {
        const FactorSide& side = fb->cside(f);
        const Block& block = f == 'H' ? first_h : first_k;
        for (const auto& [nfa_state, entry] : side.machine->init_automaton.accepting) {
            std::string label = fb->reading_name(f, entry, entry);
            LabelChain* chain = nullptr;
            for (auto& [l, c] : chains)
                if (l == label)
                    chain = &c;
            if (!chain) {
                chains.push_back({label, make_chain(label)});
                chain = &chains.back().second;
            }
            Symbol sym = side.entry_symbol.at(entry);
            std::uint32_t after = f == 'H' ? chain->after_h : chain->after_k;
            init.edge(block.base + nfa_state, sym, after);
            if (nfa_state == side.machine->init_automaton.start)
                init.edge(start, sym, after);
        }
    }
    init.nfa.start = start;
    p.init_automaton = init.nfa;
    p.entry_labels = init.labels;

    p.kind_of = [fb](const std::string& st) {
        if (st.rfind("entry[", 0) == 0)
            return StateKind::Entry;
        if (st.rfind("run[", 0) == 0)
            return StateKind::AcceptingReading;
        return StateKind::NonReading;
    };

    // parse "entry[H:q]" / "run[H:q|e=e1]" back into ids
    auto parse_reading = [fb](const std::string& st) -> std::optional<Node> {
        Node out{Phase::Settle, 'H'};
        std::string body;
        if (st.rfind("entry[", 0) == 0)
            body = st.substr(6, st.size() - 7);
        else if (st.rfind("run[", 0) == 0)
            body = st.substr(4, st.size() - 5);
        else
            return std::nullopt;
        out.factor = body[0] == 'H' ? 'H' : 'K';
        const FactorSide& side = fb->cside(out.factor);
        std::string rest = body.substr(2);
        auto bar = rest.find("|e=");
        std::string qname = bar == std::string::npos ? rest : rest.substr(0, bar);
        std::string ename = bar == std::string::npos ? qname : rest.substr(bar + 3);
        auto q = side.machine->find_state(qname);
        auto e = side.machine->find_state(ename);
        if (!q || !e)
            return std::nullopt;
        out.state = *q;
        out.entry = *e;
        return out;
    };

    p.read_move = [fb, parse_reading, table = p.symbols](
                      const std::string& st, Symbol letter,
                      Observation obs) -> std::optional<Move> {
        auto node = parse_reading(st);
        if (!node)
            return std::nullopt;
        const FactorSide& mine = fb->cside(node->factor);
        const std::string& letter_name = table.name(letter);
        auto own = mine.machine->symbols.find(letter_name);
        if (own && mine.machine->in_input_alphabet(*own))
            return fb->factor_step(node->factor, node->state, node->entry, *own, obs);
        // foreign letter: interrupt and climb into the next substack
        Node asc{Phase::Ascend, node->factor};
        asc.state = node->state;
        asc.entry = node->entry;
        asc.pending = letter_name;
        return Move{StackOp::stay(), fb->intern(std::move(asc))};
    };

    p.silent_move = [fb](const std::string& st, Observation obs) { return fb->step(st, obs); };

    p.role_of = [](const std::string& st) -> std::string {
        if (st.rfind("entry[", 0) == 0)
            return "entry: every sub-computation back at its entry configuration";
        if (st.rfind("run[", 0) == 0)
            return "accepting: some sub-computation is away from its entry";
        if (st.rfind("ascend", 0) == 0 || st.rfind("record", 0) == 0 ||
            st.rfind("enter", 0) == 0 || st.rfind("start", 0) == 0)
            return "interrupting: climbing into the next check substack";
        if (st.rfind("descend", 0) == 0)
            return "resuming the interrupted computation below";
        if (st.rfind("settle", 0) == 0)
            return "routing after a factor reading state";
        if (st.rfind("sub[", 0) == 0)
            return "factor machine running in its substack";
        return "";
    };

    return compile_machine(p);
}

}  // namespace cspda

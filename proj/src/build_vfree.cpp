#include <algorithm>
#include <sstream>

#include "cspda/constructions.hpp"

namespace cspda {

namespace {

std::string emit_name(const GWord& pending, const Letter& coset) {
    std::ostringstream out;
    out << "emit[";
    for (std::size_t i = 0; i < pending.size(); ++i) {
        if (i)
            out << ',';
        out << pending[i];
    }
    out << '|' << coset << ']';
    return out.str();
}

// name -> (pending basis word, coset to push)
std::pair<GWord, Letter> parse_emit(const std::string& name) {
    auto body = name.substr(5, name.size() - 6);
    auto bar = body.rfind('|');
    GWord word;
    std::string head = body.substr(0, bar);
    std::string tok;
    std::istringstream in(head);
    while (std::getline(in, tok, ','))
        if (!tok.empty())
            word.push_back(tok);
    return {word, body.substr(bar + 1)};
}

}  // namespace

CspdaSpec build_virtually_free(const VirtuallyFreeData& data, const std::string& name) {
    data.validate();

    ProgramMachine p;
    p.name = name;

    for (const auto& a : data.alphabet.letters)
        p.input_alphabet.push_back(p.symbols.intern(a));
    for (const auto& a : data.alphabet.letters)
        p.inverse_of[*p.symbols.find(a)] = *p.symbols.find(data.alphabet.inverse_of(a));
    p.pad = p.symbols.intern("*");

    p.check_alphabet = p.input_alphabet;
    p.check_alphabet.push_back(p.pad);

    p.push_alphabet = p.input_alphabet;
    for (const auto& b : data.basis.letters) {
        Symbol s = p.symbols.intern(b);
        if (std::find(p.push_alphabet.begin(), p.push_alphabet.end(), s) == p.push_alphabet.end())
            p.push_alphabet.push_back(s);
    }
    for (const auto& t : data.transversal) {
        Symbol s = p.symbols.intern(t);
        if (std::find(p.push_alphabet.begin(), p.push_alphabet.end(), s) == p.push_alphabet.end())
            p.push_alphabet.push_back(s);
    }
    p.push_alphabet.push_back(p.pad);

    // init language: pad^k for arbitrary k >= 0
    InitBuilder init;
    auto n0 = init.add_state();
    init.edge(n0, p.pad, n0);
    init.accept(n0, "q1");
    p.init_automaton = init.nfa;
    p.entry_labels = init.labels;

    auto is_transversal = [&, symbols = p.symbols](Symbol s) -> std::optional<Letter> {
        if (s == kBottom)
            return std::nullopt;
        const std::string& nm = symbols.name(s);
        if (std::find(data.transversal.begin(), data.transversal.end(), nm) !=
            data.transversal.end())
            return nm;
        return std::nullopt;
    };

    p.kind_of = [](const std::string& st) {
        if (st == "q1")
            return StateKind::Entry;
        if (st == "q2")
            return StateKind::AcceptingReading;
        return StateKind::NonReading;
    };

    p.read_move = [&data, is_transversal, symbols = p.symbols](
                      const std::string& st, Symbol letter,
                      Observation obs) -> std::optional<Move> {
        if (st != "q1" && st != "q2")
            return std::nullopt;
        // q1 holds exactly the empty pushdown, q2 a nonempty one
        if (st == "q1" && obs.push_top != kBottom)
            return std::nullopt;
        if (st == "q2" && obs.push_top == kBottom)
            return std::nullopt;
        Letter coset;
        StackOp op = StackOp::stay();
        if (auto t = is_transversal(obs.push_top)) {
            coset = *t;
            op = StackOp::pop();
        }
        const auto& rule = data.rule(coset, symbols.name(letter));
        return Move{op, emit_name(rule.word, rule.coset)};
    };

    p.silent_move = [&data, symbols = p.symbols](const std::string& st,
                                                 Observation obs) -> std::optional<Move> {
        if (st == "settle")
            return Move{StackOp::stay(), obs.push_top == kBottom ? "q1" : "q2"};
        if (st.rfind("emit[", 0) != 0)
            return std::nullopt;
        auto [pending, coset] = parse_emit(st);
        if (pending.empty()) {
            if (coset.empty())
                return Move{StackOp::stay(), "settle"};
            return Move{StackOp::push(*symbols.find(coset)), "settle"};
        }
        const Letter& next = pending.front();
        GWord rest(pending.begin() + 1, pending.end());
        Symbol next_sym = *symbols.find(next);
        Symbol inv_sym = *symbols.find(data.basis.inverse_of(next));
        if (obs.push_top == inv_sym)
            return Move{StackOp::pop(), emit_name(rest, coset)};
        return Move{StackOp::push(next_sym), emit_name(rest, coset)};
    };

    p.role_of = [](const std::string& st) -> std::string {
        if (st == "q1")
            return "entry: reduced word empty, element in the subgroup coset";
        if (st == "q2")
            return "accepting: pushdown holds a nonempty normal form";
        if (st == "settle")
            return "route to q1/q2 by pushdown emptiness";
        if (st.rfind("emit[", 0) == 0)
            return "pushing a rewrite word with free cancellation";
        return "";
    };

    return compile_machine(p);
}

}  // namespace cspda

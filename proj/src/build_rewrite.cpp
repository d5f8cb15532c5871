// Replay-based combinators.  Both constructions run the base machine's own
// transition table from inside new non-reading states: reading one new letter
// feeds a whole base word through the base machine, one base letter per
// reading configuration reached.  The finite-extension variant additionally
// threads a transversal coset through the state and accepts whenever the
// coset is nontrivial.

#include <memory>
#include <sstream>
#include <unordered_map>

#include "cspda/constructions.hpp"

namespace cspda {

namespace {

struct ReplayNode {
    StateId base_state = 0;
    GWord suffix;    // base letters still to feed
    Letter coset;    // finite extension only
};

struct ReplayBuilder {
    const CspdaSpec* base = nullptr;
    std::unordered_map<std::string, ReplayNode> nodes;

    std::string reading_name(StateId q, const Letter& coset) const {
        std::string out = base->state(q).name;
        if (!coset.empty())
            out += "|t=" + coset;
        return out;
    }

    std::string intern(ReplayNode node) {
        std::ostringstream name;
        name << "feed[" << base->state(node.base_state).name << "|";
        for (std::size_t i = 0; i < node.suffix.size(); ++i) {
            if (i)
                name << '.';
            name << node.suffix[i];
        }
        if (!node.coset.empty())
            name << "|t=" << node.coset;
        name << "]";
        std::string out = name.str();
        nodes.emplace(out, std::move(node));
        return out;
    }

    // One silent step of a replay state: run the base machine, feeding the
    // next pending letter whenever it sits in a reading state.
    std::optional<Move> step(const std::string& name, Observation obs) {
        auto it = nodes.find(name);
        if (it == nodes.end())
            return std::nullopt;
        const ReplayNode node = it->second;
        StateKind kind = base->kind(node.base_state);
        if (kind == StateKind::NonReading) {
            const StepAction* act = base->transitions.lookup(node.base_state, std::nullopt, obs);
            if (!act)
                return std::nullopt;
            ReplayNode next = node;
            next.base_state = act->next;
            return Move{act->op, intern(std::move(next))};
        }
        if (!is_reading(kind))
            return std::nullopt;  // base fail state: stay stuck
        if (node.suffix.empty())
            return Move{StackOp::stay(), reading_name(node.base_state, node.coset)};
        auto letter = base->symbols.find(node.suffix.front());
        if (!letter)
            return std::nullopt;
        const StepAction* act = base->transitions.lookup(node.base_state, *letter, obs);
        if (!act)
            return std::nullopt;
        ReplayNode next = node;
        next.base_state = act->next;
        next.suffix.erase(next.suffix.begin());
        return Move{act->op, intern(std::move(next))};
    }

    // Start feeding `word` from base reading state q; empty words settle
    // directly into the target reading state.
    std::optional<Move> start(StateId q, const GWord& word, const Letter& next_coset,
                              Observation obs) {
        if (word.empty())
            return Move{StackOp::stay(), reading_name(q, next_coset)};
        auto letter = base->symbols.find(word.front());
        if (!letter)
            return std::nullopt;
        const StepAction* act = base->transitions.lookup(q, *letter, obs);
        if (!act)
            return std::nullopt;
        ReplayNode node;
        node.base_state = act->next;
        node.suffix = GWord(word.begin() + 1, word.end());
        node.coset = next_coset;
        return Move{act->op, intern(std::move(node))};
    }
};

void copy_alphabets(ProgramMachine& p, const CspdaSpec& base, const GroupAlphabet& alphabet) {
    p.symbols = base.symbols;
    p.check_alphabet = base.check_alphabet;
    p.push_alphabet = base.push_alphabet;
    p.pad = base.pad;
    for (const auto& a : alphabet.letters) {
        Symbol s = p.symbols.intern(a);
        p.input_alphabet.push_back(s);
        if (std::find(p.check_alphabet.begin(), p.check_alphabet.end(), s) ==
            p.check_alphabet.end())
            p.check_alphabet.push_back(s);
        if (std::find(p.push_alphabet.begin(), p.push_alphabet.end(), s) ==
            p.push_alphabet.end())
            p.push_alphabet.push_back(s);
    }
    for (const auto& a : alphabet.letters)
        p.inverse_of[*p.symbols.find(a)] = *p.symbols.find(alphabet.inverse_of(a));
}

}  // namespace

CspdaSpec rewrite_generators(const CspdaSpec& base, const GroupAlphabet& new_alphabet,
                             const std::map<Letter, GWord>& words, const std::string& name) {
    new_alphabet.check_involution();
    for (const auto& a : new_alphabet.letters) {
        auto it = words.find(a);
        if (it == words.end() || it->second.empty())
            throw EmptyReplacementError("letter '" + a + "' needs a nonempty replacement word");
        for (const auto& b : it->second) {
            auto s = base.symbols.find(b);
            if (!s || !base.in_input_alphabet(*s))
                throw UnknownSymbolError("replacement letter '" + b +
                                         "' is not a base input letter");
        }
        // the map must respect inverses formally
        GWord expect;
        for (auto rit = it->second.rbegin(); rit != it->second.rend(); ++rit) {
            Symbol s = *base.symbols.find(*rit);
            expect.push_back(base.symbols.name(base.inverse_of.at(s)));
        }
        if (words.at(new_alphabet.inverse_of(a)) != expect)
            throw SpecError("replacement words do not respect inverses at '" + a + "'");
    }

    auto rb = std::make_shared<ReplayBuilder>();
    auto base_copy = std::make_shared<CspdaSpec>(base);
    rb->base = base_copy.get();

    ProgramMachine p;
    p.name = name;
    copy_alphabets(p, base, new_alphabet);
    p.init_automaton = base.init_automaton;
    for (const auto& [nfa_state, entry] : base.init_automaton.accepting)
        p.entry_labels.push_back({nfa_state, base.state(entry).name});
    p.init_automaton.accepting.clear();

    p.kind_of = [base_copy, rb](const std::string& st) {
        if (auto id = base_copy->find_state(st))
            return base_copy->kind(*id);
        return StateKind::NonReading;
    };

    auto words_copy = std::make_shared<std::map<Letter, GWord>>(words);
    p.read_move = [base_copy, rb, words_copy, table = p.symbols](
                      const std::string& st, Symbol letter,
                      Observation obs) -> std::optional<Move> {
        auto id = base_copy->find_state(st);
        if (!id || !is_reading(base_copy->kind(*id)))
            return std::nullopt;
        const GWord& w = words_copy->at(table.name(letter));
        return rb->start(*id, w, "", obs);
    };

    p.silent_move = [rb](const std::string& st, Observation obs) { return rb->step(st, obs); };

    p.role_of = [](const std::string& st) -> std::string {
        if (st.rfind("feed[", 0) == 0)
            return "replaying a base word for one new letter";
        return "";
    };

    return compile_machine(p);
}

CspdaSpec extend_finite(const CspdaSpec& base, const FiniteExtensionData& data,
                        const std::string& name) {
    GroupAlphabet base_alphabet;  // reconstruct from the machine for validation
    for (Symbol s : base.input_alphabet) {
        base_alphabet.letters.push_back(base.symbols.name(s));
        base_alphabet.inverse[base.symbols.name(s)] =
            base.symbols.name(base.inverse_of.at(s));
    }
    data.validate(base_alphabet);

    auto rb = std::make_shared<ReplayBuilder>();
    auto base_copy = std::make_shared<CspdaSpec>(base);
    rb->base = base_copy.get();
    auto data_copy = std::make_shared<FiniteExtensionData>(data);

    ProgramMachine p;
    p.name = name;
    copy_alphabets(p, base, data.alphabet);
    p.init_automaton = base.init_automaton;
    for (const auto& [nfa_state, entry] : base.init_automaton.accepting)
        p.entry_labels.push_back({nfa_state, base.state(entry).name});
    p.init_automaton.accepting.clear();

    // state "<q>" is (q, 1); state "<q>|t=x" is (q, x)
    p.kind_of = [base_copy](const std::string& st) {
        auto bar = st.find("|t=");
        std::string q = bar == std::string::npos ? st : st.substr(0, bar);
        if (auto id = base_copy->find_state(q)) {
            StateKind k = base_copy->kind(*id);
            if (is_reading(k))
                return bar == std::string::npos ? k : StateKind::AcceptingReading;
            return k;
        }
        return StateKind::NonReading;
    };

    p.read_move = [base_copy, rb, data_copy, table = p.symbols](
                      const std::string& st, Symbol letter,
                      Observation obs) -> std::optional<Move> {
        auto bar = st.find("|t=");
        std::string q = bar == std::string::npos ? st : st.substr(0, bar);
        Letter coset = bar == std::string::npos ? "" : st.substr(bar + 3);
        auto id = base_copy->find_state(q);
        if (!id || !is_reading(base_copy->kind(*id)))
            return std::nullopt;
        const auto& entry = data_copy->rule(coset, table.name(letter));
        return rb->start(*id, entry.h_word, entry.coset, obs);
    };

    p.silent_move = [rb](const std::string& st, Observation obs) { return rb->step(st, obs); };

    p.role_of = [](const std::string& st) -> std::string {
        if (st.rfind("feed[", 0) == 0)
            return "replaying a transversal word through the base machine";
        if (st.find("|t=") != std::string::npos)
            return "base state with a nontrivial coset: accepting";
        return "";
    };

    return compile_machine(p);
}

}  // namespace cspda

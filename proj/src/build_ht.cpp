// Machine for a Higman-Thompson group G_{n,r}.  Stage 1 writes a word in
// Q Sigma* with its root symbol on top, then padding.  Stage 2 keeps the
// image y of that word on the pushdown.  Per input letter: reconstitute the
// cells the previous comparison consumed (stopping when the copied cell is a
// root symbol), pop the prefix of y until it matches the generator's domain
// antichain, push the image word, and compare the stacks.  Replacements that
// outgrow the check stack fail, as do witness words too short to contain a
// domain prefix.

#include <memory>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "cspda/constructions.hpp"

namespace cspda {

namespace {

enum class Phase {
    Recon,
    ReconPeek,
    ReconCopy,
    FindPrefix,
    PushList,
    Compare,
};

struct Node {
    Phase phase;
    Letter letter;
    HTWord buf;        // popped prefix of y
    Word list;         // symbols still to push
    Symbol sym = kBottom;
    bool last = false;  // ReconCopy: the copied cell is the root symbol
};

struct Builder {
    std::size_t n = 2, r = 1;
    std::map<Letter, HTElement> generators;
    std::map<Letter, std::size_t> max_domain;
    SymbolTable symbols;
    Symbol pad = kBottom;
    std::vector<Symbol> roots;
    std::vector<Symbol> sigma;

    std::unordered_map<std::string, Node> nodes;

    static std::string word_text(const HTWord& w) {
        std::string out;
        for (std::uint8_t x : w) {
            out += static_cast<char>('0' + x);
            out += '_';
        }
        return out;
    }

    std::string list_text(const Word& w) const {
        std::string out;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i)
                out += '.';
            out += symbols.name(w[i]);
        }
        return out;
    }

    std::string intern(Node node) {
        std::ostringstream name;
        switch (node.phase) {
            case Phase::Recon: name << "recon[" << node.letter << "]"; break;
            case Phase::ReconPeek: name << "recon.peek[" << node.letter << "]"; break;
            case Phase::ReconCopy:
                name << "recon.copy[" << node.letter << "," << symbols.name(node.sym)
                     << (node.last ? ",top" : "") << "]";
                break;
            case Phase::FindPrefix:
                name << "prefix[" << node.letter << "," << word_text(node.buf) << "]";
                break;
            case Phase::PushList:
                name << "replace[" << node.letter << "," << list_text(node.list) << "]";
                break;
            case Phase::Compare: name << "compare"; break;
        }
        std::string out = name.str();
        nodes.emplace(out, std::move(node));
        return out;
    }

    bool is_root(Symbol s, std::uint8_t* out = nullptr) const {
        for (std::size_t i = 0; i < roots.size(); ++i)
            if (roots[i] == s) {
                if (out)
                    *out = static_cast<std::uint8_t>(i);
                return true;
            }
        return false;
    }

    bool is_sigma(Symbol s, std::uint8_t* out = nullptr) const {
        for (std::size_t i = 0; i < sigma.size(); ++i)
            if (sigma[i] == s) {
                if (out)
                    *out = static_cast<std::uint8_t>(i);
                return true;
            }
        return false;
    }

    // first position is a root index, the rest are tree letters
    Word reversed_syms(const HTWord& w) const {
        Word out;
        for (std::size_t i = w.size(); i > 0; --i)
            out.push_back(i == 1 ? roots[w[0]] : sigma[w[i - 1]]);
        return out;
    }

    std::string push_or_compare(Node list_node) {
        if (list_node.list.empty())
            return intern({Phase::Compare});
        return intern(std::move(list_node));
    }

    std::optional<Move> step(const std::string& name, Observation obs) {
        auto it = nodes.find(name);
        if (it == nodes.end())
            return std::nullopt;
        const Node node = it->second;
        switch (node.phase) {
            case Phase::Recon:
                return Move{StackOp::push(pad), intern({Phase::ReconPeek, node.letter})};
            case Phase::ReconPeek: {
                if (obs.push_top != pad)
                    return std::nullopt;
                if (is_sigma(obs.check_cell) || is_root(obs.check_cell)) {
                    Node copy{Phase::ReconCopy, node.letter};
                    copy.sym = obs.check_cell;
                    copy.last = is_root(obs.check_cell);
                    return Move{StackOp::pop(), intern(std::move(copy))};
                }
                return std::nullopt;
            }
            case Phase::ReconCopy: {
                std::string next = node.last
                                       ? intern({Phase::FindPrefix, node.letter})
                                       : intern({Phase::Recon, node.letter});
                return Move{StackOp::push(node.sym), next};
            }
            case Phase::FindPrefix: {
                const HTElement& g = generators.at(node.letter);
                for (const auto& [b, c] : g.pairs) {
                    if (b == node.buf) {
                        Node push{Phase::PushList, node.letter};
                        push.list = reversed_syms(c);
                        return Move{StackOp::stay(), push_or_compare(std::move(push))};
                    }
                }
                if (node.buf.size() >= max_domain.at(node.letter))
                    return std::nullopt;  // no domain prefix: witness too short
                std::uint8_t x;
                Node pop = node;
                if (node.buf.empty()) {
                    if (!is_root(obs.push_top, &x))
                        return std::nullopt;
                } else {
                    if (!is_sigma(obs.push_top, &x))
                        return std::nullopt;
                }
                pop.buf.push_back(x);
                return Move{StackOp::pop(), intern(std::move(pop))};
            }
            case Phase::PushList: {
                Node rest = node;
                Symbol next = rest.list.front();
                rest.list.erase(rest.list.begin());
                return Move{StackOp::push(next), push_or_compare(std::move(rest))};
            }
            case Phase::Compare: {
                if (obs.push_top == kBottom)
                    return Move{StackOp::stay(), "q1"};
                if (obs.push_top == pad || obs.check_cell == kBottom)
                    return std::nullopt;
                if (obs.push_top == obs.check_cell)
                    return Move{StackOp::pop(), intern({Phase::Compare})};
                return Move{StackOp::stay(), "q2"};  // includes length mismatches
            }
        }
        return std::nullopt;
    }
};

}  // namespace

CspdaSpec build_higman_thompson(std::size_t n, std::size_t r, const GroupAlphabet& alphabet,
                                const std::map<Letter, HTElement>& generators,
                                const std::string& name) {
    if (n < 2 || n > 10 || r < 1 || r > 10)
        throw SpecError("supported ranges: 2 <= n <= 10, 1 <= r <= 10");
    alphabet.check_involution();
    for (const auto& a : alphabet.letters) {
        auto it = generators.find(a);
        if (it == generators.end())
            throw SpecError("no tree-pair data for letter '" + a + "'");
        if (it->second.n != n || it->second.r != r)
            throw IncompatibleParametersError("generator '" + a + "' lives in a different group");
        it->second.validate();
    }

    auto builder = std::make_shared<Builder>();
    builder->n = n;
    builder->r = r;
    builder->generators = generators;
    for (const auto& [letter, g] : generators) {
        std::size_t k = 0;
        for (const auto& [b, c] : g.pairs)
            k = std::max(k, b.size());
        builder->max_domain[letter] = k;
    }

    ProgramMachine p;
    p.name = name;
    for (std::size_t i = 0; i < r; ++i)
        builder->roots.push_back(builder->symbols.intern("r" + std::to_string(i)));
    for (std::size_t i = 0; i < n; ++i)
        builder->sigma.push_back(builder->symbols.intern(std::to_string(i)));
    builder->pad = builder->symbols.intern("*");
    for (const auto& a : alphabet.letters)
        p.input_alphabet.push_back(builder->symbols.intern(a));
    for (const auto& a : alphabet.letters)
        p.inverse_of[*builder->symbols.find(a)] = *builder->symbols.find(alphabet.inverse_of(a));

    p.pad = builder->pad;
    p.check_alphabet = builder->sigma;
    for (Symbol s : builder->roots)
        p.check_alphabet.push_back(s);
    p.check_alphabet.push_back(builder->pad);
    for (Symbol a : p.input_alphabet)
        p.check_alphabet.push_back(a);
    p.push_alphabet = p.check_alphabet;
    p.symbols = builder->symbols;

    // init language: tree letters, then one root symbol, then padding; the
    // root symbol ends up on top of the witness word
    InitBuilder init;
    auto n0 = init.add_state();
    auto n1 = init.add_state();
    for (Symbol s : builder->sigma)
        init.edge(n0, s, n0);
    for (Symbol s : builder->roots)
        init.edge(n0, s, n1);
    init.edge(n1, builder->pad, n1);
    init.accept(n1, "q1");
    p.init_automaton = init.nfa;
    p.entry_labels = init.labels;

    p.kind_of = [](const std::string& st) {
        if (st == "q1")
            return StateKind::Entry;
        if (st == "q2")
            return StateKind::AcceptingReading;
        return StateKind::NonReading;
    };

    p.read_move = [builder](const std::string& st, Symbol letter,
                            Observation obs) -> std::optional<Move> {
        if (st != "q1" && st != "q2")
            return std::nullopt;
        Letter l = builder->symbols.name(letter);
        if (st == "q1") {
            if (obs.push_top != kBottom)
                return std::nullopt;
            return Move{StackOp::stay(), builder->intern({Phase::Recon, l})};
        }
        // q2 holds either the full image (root symbol on top, possibly of a
        // different length than the witness) or a partial image ending at the
        // first mismatch
        if (builder->is_root(obs.push_top))
            return Move{StackOp::stay(), builder->intern({Phase::FindPrefix, l})};
        if (builder->is_sigma(obs.push_top))
            return Move{StackOp::stay(), builder->intern({Phase::Recon, l})};
        return std::nullopt;
    };

    p.silent_move = [builder](const std::string& st, Observation obs) -> std::optional<Move> {
        return builder->step(st, obs);
    };

    p.role_of = [](const std::string& st) -> std::string {
        if (st == "q1")
            return "entry: image equals the witness word";
        if (st == "q2")
            return "accepting: image differs from the witness word";
        if (st.rfind("recon", 0) == 0)
            return "recopying the witness word from the check stack";
        if (st.rfind("prefix", 0) == 0)
            return "popping the image prefix to match a domain antichain";
        if (st.rfind("replace", 0) == 0)
            return "pushing the replacement word";
        if (st.rfind("compare", 0) == 0)
            return "matching the image against the witness word";
        return "";
    };

    return compile_machine(p);
}

}  // namespace cspda

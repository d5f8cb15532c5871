// Machine for a group of bounded tree automorphisms.  Stage 1 writes a tree
// string x bottom-up (first letter on top) followed by padding.  Stage 2
// keeps y = x^beta on the pushdown, top-aligned with x.  Per input letter:
// restore the cells the previous comparison consumed, pop the affected prefix
// of y while tracking the spine class in finite control, push the image, and
// compare the stacks top-down.  The periodic part of a spine image is pushed
// block by block; the distance to the top of x is measured by pushing pad
// symbols and watching for the first pad cell on the check stack.

#include <memory>
#include <sstream>
#include <unordered_map>

#include "cspda/constructions.hpp"

namespace cspda {

namespace {

enum class Phase {
    Restore,
    RestorePeek,
    RestoreCopy,
    ApplyStart,
    FinPop,
    PushList,
    SpineDown,
    TailPop,
    SpineUp,
    Probe,
    ProbeCheck,
    ProbeUnwind,
    Compare,
    CompareRepush,
};

struct Node {
    Phase phase;
    Letter letter;        // generator being processed
    std::size_t cls = 0;  // spine class
    TreeLetter dep = 0;   // letter leaving the spine
    TreeWord buf;         // popped prefix collected in finite control
    Word list;            // symbols still to push
    std::string cont;     // continuation after PushList
    std::size_t count = 0;
    bool more = false;
    Symbol sym = kBottom;
};

struct Builder {
    GroupAlphabet alphabet;
    std::map<Letter, GeneratorData> generators;
    std::size_t degree;
    SymbolTable symbols;
    Symbol pad = kBottom;
    std::vector<Symbol> sigma;  // tree letters as machine symbols

    std::unordered_map<std::string, Node> nodes;

    static std::string word_text(const TreeWord& w) {
        std::string out;
        for (TreeLetter x : w)
            out += static_cast<char>('0' + x);
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
            case Phase::Restore: name << "restore[" << node.letter << "]"; break;
            case Phase::RestorePeek: name << "restore.peek[" << node.letter << "]"; break;
            case Phase::RestoreCopy:
                name << "restore.copy[" << node.letter << "," << symbols.name(node.sym) << "]";
                break;
            case Phase::ApplyStart: name << "apply[" << node.letter << "]"; break;
            case Phase::FinPop:
                name << "fin.pop[" << node.letter << "," << word_text(node.buf) << "]";
                break;
            case Phase::PushList:
                name << "push[" << node.letter << "," << list_text(node.list) << ";" << node.cont
                     << "]";
                break;
            case Phase::SpineDown:
                name << "spine.down[" << node.letter << "," << node.cls << "]";
                break;
            case Phase::TailPop:
                name << "tail.pop[" << node.letter << "," << node.cls << "," << unsigned(node.dep)
                     << "," << word_text(node.buf) << "]";
                break;
            case Phase::SpineUp: name << "spine.up[" << node.letter << "," << node.cls << "]"; break;
            case Phase::Probe: name << "probe[" << node.letter << "," << node.count << "]"; break;
            case Phase::ProbeCheck:
                name << "probe.at[" << node.letter << "," << node.count << "]";
                break;
            case Phase::ProbeUnwind:
                name << "probe.pop[" << node.letter << "," << node.count << ","
                     << (node.more ? "block" : "done") << "]";
                break;
            case Phase::Compare: name << "compare"; break;
            case Phase::CompareRepush:
                name << "compare.repush[" << symbols.name(node.sym) << "]";
                break;
        }
        std::string out = name.str();
        nodes.emplace(out, std::move(node));
        return out;
    }

    bool is_sigma(Symbol s, TreeLetter* out = nullptr) const {
        for (std::size_t i = 0; i < sigma.size(); ++i)
            if (sigma[i] == s) {
                if (out)
                    *out = static_cast<TreeLetter>(i);
                return true;
            }
        return false;
    }

    Word reversed_syms(const TreeWord& w) const {
        Word out;
        for (auto it = w.rbegin(); it != w.rend(); ++it)
            out.push_back(sigma[*it]);
        return out;
    }

    std::string push_or_cont(Node list_node) {
        if (list_node.list.empty())
            return list_node.cont;
        return intern(std::move(list_node));
    }

    std::optional<Move> step(const std::string& name, Observation obs) {
        auto it = nodes.find(name);
        if (it == nodes.end())
            return std::nullopt;
        const Node node = it->second;  // interning below may rehash the map
        switch (node.phase) {
            case Phase::Restore:
                // climb one cell; the peek state inspects what is up there
                return Move{StackOp::push(pad), intern({Phase::RestorePeek, node.letter})};
            case Phase::RestorePeek: {
                if (obs.push_top != pad)
                    return std::nullopt;
                if (is_sigma(obs.check_cell)) {
                    Node copy{Phase::RestoreCopy, node.letter};
                    copy.sym = obs.check_cell;
                    return Move{StackOp::pop(), intern(std::move(copy))};
                }
                if (obs.check_cell == pad)
                    return Move{StackOp::pop(), intern({Phase::ApplyStart, node.letter})};
                return std::nullopt;
            }
            case Phase::RestoreCopy:
                return Move{StackOp::push(node.sym), intern({Phase::Restore, node.letter})};
            case Phase::ApplyStart: {
                const GeneratorData& g = generators.at(node.letter);
                if (std::holds_alternative<FinitaryAutomorphism>(g)) {
                    const auto& phi = std::get<FinitaryAutomorphism>(g);
                    TreeLetter z;
                    if (phi.depth > 0 && is_sigma(obs.push_top, &z)) {
                        Node pop{Phase::FinPop, node.letter};
                        pop.buf = {z};
                        return Move{StackOp::pop(), intern(std::move(pop))};
                    }
                    if (phi.depth == 0 || obs.push_top == kBottom)
                        return Move{StackOp::stay(), intern({Phase::Compare})};
                    return std::nullopt;
                }
                Node down{Phase::SpineDown, node.letter};
                down.cls = 0;
                return Move{StackOp::stay(), intern(std::move(down))};
            }
            case Phase::FinPop: {
                const auto& phi = std::get<FinitaryAutomorphism>(generators.at(node.letter));
                if (node.buf.size() < phi.depth && obs.push_top != kBottom) {
                    TreeLetter z;
                    if (!is_sigma(obs.push_top, &z))
                        return std::nullopt;
                    Node pop = node;
                    pop.buf.push_back(z);
                    return Move{StackOp::pop(), intern(std::move(pop))};
                }
                Node push{Phase::PushList, node.letter};
                push.list = reversed_syms(apply_finitary(phi, node.buf));
                push.cont = intern({Phase::Compare});
                return Move{StackOp::stay(), push_or_cont(std::move(push))};
            }
            case Phase::PushList: {
                Node rest = node;
                Symbol next = rest.list.front();
                rest.list.erase(rest.list.begin());
                return Move{StackOp::push(next), push_or_cont(std::move(rest))};
            }
            case Phase::SpineDown: {
                const auto& delta = std::get<DirectedAutomorphism>(generators.at(node.letter));
                if (obs.push_top == kBottom) {  // the whole word lay on the spine
                    Node up{Phase::SpineUp, node.letter};
                    up.cls = node.cls;
                    return Move{StackOp::stay(), intern(std::move(up))};
                }
                TreeLetter z;
                if (!is_sigma(obs.push_top, &z))
                    return std::nullopt;
                if (z == delta.spine_letter(node.cls)) {
                    Node down = node;
                    down.cls = node.cls + 1 < delta.p.size() + delta.q.size() ? node.cls + 1
                                                                              : delta.p.size();
                    return Move{StackOp::pop(), intern(std::move(down))};
                }
                Node tail{Phase::TailPop, node.letter};
                tail.cls = node.cls;
                tail.dep = z;
                return Move{StackOp::pop(), intern(std::move(tail))};
            }
            case Phase::TailPop: {
                const auto& delta = std::get<DirectedAutomorphism>(generators.at(node.letter));
                const auto& off = delta.off_spine(node.cls, node.dep);
                if (node.buf.size() < off.tail.depth && obs.push_top != kBottom) {
                    TreeLetter z;
                    if (!is_sigma(obs.push_top, &z))
                        return std::nullopt;
                    Node pop = node;
                    pop.buf.push_back(z);
                    return Move{StackOp::pop(), intern(std::move(pop))};
                }
                // tail image first (reversed), then the departing letter's
                // image, then the spine image above them
                Node up{Phase::SpineUp, node.letter};
                up.cls = node.cls;
                Node push{Phase::PushList, node.letter};
                push.list = reversed_syms(apply_finitary(off.tail, node.buf));
                push.list.push_back(sigma[off.image]);
                push.cont = intern(std::move(up));
                return Move{StackOp::stay(), push_or_cont(std::move(push))};
            }
            case Phase::SpineUp: {
                const auto& delta = std::get<DirectedAutomorphism>(generators.at(node.letter));
                std::size_t s = delta.p.size();
                if (node.cls == s) {  // periodic block count is not in finite control
                    Node probe{Phase::Probe, node.letter};
                    probe.count = 0;
                    return Move{StackOp::stay(), intern(std::move(probe))};
                }
                if (node.cls == 0)
                    return Move{StackOp::stay(), intern({Phase::Compare})};
                Node up = node;
                up.cls = node.cls - 1;
                return Move{StackOp::push(sigma[delta.image_letter(node.cls - 1)]),
                            intern(std::move(up))};
            }
            case Phase::Probe: {
                const auto& delta = std::get<DirectedAutomorphism>(generators.at(node.letter));
                if (node.count >= delta.p.size() + delta.q.size()) {
                    Node pop{Phase::ProbeUnwind, node.letter};  // a full block fits
                    pop.count = node.count;
                    pop.more = true;
                    return Move{StackOp::stay(), intern(std::move(pop))};
                }
                Node at{Phase::ProbeCheck, node.letter};
                at.count = node.count + 1;
                return Move{StackOp::push(pad), intern(std::move(at))};
            }
            case Phase::ProbeCheck: {
                if (obs.push_top != pad)
                    return std::nullopt;
                if (is_sigma(obs.check_cell)) {  // still inside x
                    Node probe{Phase::Probe, node.letter};
                    probe.count = node.count;
                    return Move{StackOp::stay(), intern(std::move(probe))};
                }
                if (obs.check_cell == pad) {  // above the top of x
                    Node pop{Phase::ProbeUnwind, node.letter};
                    pop.count = node.count;
                    pop.more = false;
                    return Move{StackOp::stay(), intern(std::move(pop))};
                }
                return std::nullopt;
            }
            case Phase::ProbeUnwind: {
                if (node.count > 0) {
                    if (obs.push_top != pad)
                        return std::nullopt;
                    Node pop = node;
                    pop.count = node.count - 1;
                    return Move{StackOp::pop(), intern(std::move(pop))};
                }
                const auto& delta = std::get<DirectedAutomorphism>(generators.at(node.letter));
                Node push{Phase::PushList, node.letter};
                if (node.more) {
                    for (std::size_t j = delta.q.size(); j > 0; --j)
                        push.list.push_back(sigma[delta.q_image[j - 1]]);
                    Node up{Phase::SpineUp, node.letter};
                    up.cls = delta.p.size();
                    push.cont = intern(std::move(up));
                } else {
                    for (std::size_t i = delta.p.size(); i > 0; --i)
                        push.list.push_back(sigma[delta.p_image[i - 1]]);
                    push.cont = intern({Phase::Compare});
                }
                return Move{StackOp::stay(), push_or_cont(std::move(push))};
            }
            case Phase::Compare: {
                if (obs.push_top == kBottom)
                    return Move{StackOp::stay(), "q1"};
                if (!is_sigma(obs.push_top) || !is_sigma(obs.check_cell))
                    return std::nullopt;
                if (obs.push_top == obs.check_cell)
                    return Move{StackOp::pop(), intern({Phase::Compare})};
                Node re{Phase::CompareRepush};
                re.sym = obs.push_top;
                return Move{StackOp::pop(), intern(std::move(re))};
            }
            case Phase::CompareRepush:
                return Move{StackOp::push(node.sym), "q2"};
        }
        return std::nullopt;
    }
};

}  // namespace

CspdaSpec build_bounded_automata(const GroupAlphabet& alphabet,
                                 const std::map<Letter, GeneratorData>& generators,
                                 std::size_t degree, const std::string& name) {
    if (degree < 2 || degree > 10)
        throw SpecError("tree degree must be between 2 and 10");
    alphabet.check_involution();
    for (const auto& a : alphabet.letters) {
        if (!generators.count(a))
            throw MissingInverseError("no generator data for letter '" + a + "'");
        if (!generators.count(alphabet.inverse_of(a)))
            throw MissingInverseError("no generator data for the inverse of '" + a + "'");
        if (generator_degree(generators.at(a)) != degree)
            throw SpecError("generator '" + a + "' works on the wrong tree");
    }

    auto builder = std::make_shared<Builder>();
    builder->alphabet = alphabet;
    builder->generators = generators;
    builder->degree = degree;

    ProgramMachine p;
    p.name = name;
    for (std::size_t i = 0; i < degree; ++i)
        builder->sigma.push_back(builder->symbols.intern(std::to_string(i)));
    builder->pad = builder->symbols.intern("*");
    for (const auto& a : alphabet.letters)
        p.input_alphabet.push_back(builder->symbols.intern(a));
    for (const auto& a : alphabet.letters)
        p.inverse_of[*builder->symbols.find(a)] = *builder->symbols.find(alphabet.inverse_of(a));

    p.pad = builder->pad;
    p.check_alphabet = builder->sigma;
    p.check_alphabet.push_back(builder->pad);
    for (Symbol a : p.input_alphabet)
        p.check_alphabet.push_back(a);
    p.push_alphabet = p.check_alphabet;
    p.symbols = builder->symbols;

    // init language: any tree string written with its first letter on top,
    // then padding
    InitBuilder init;
    auto n0 = init.add_state();
    auto n1 = init.add_state();
    for (Symbol s : builder->sigma)
        init.edge(n0, s, n0);
    init.edge(n0, builder->pad, n1);
    init.edge(n1, builder->pad, n1);
    init.accept(n0, "q1");
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
        if (st == "q1") {
            if (obs.push_top != kBottom)
                return std::nullopt;
        } else if (st == "q2") {
            if (!builder->is_sigma(obs.push_top) || !builder->is_sigma(obs.check_cell))
                return std::nullopt;
        } else {
            return std::nullopt;
        }
        Node restore{Phase::Restore, builder->symbols.name(letter)};
        return Move{StackOp::stay(), builder->intern(std::move(restore))};
    };

    p.silent_move = [builder](const std::string& st, Observation obs) -> std::optional<Move> {
        return builder->step(st, obs);
    };

    p.role_of = [](const std::string& st) -> std::string {
        if (st == "q1")
            return "entry: image equals the witness string";
        if (st == "q2")
            return "accepting: image differs from the witness string";
        if (st.rfind("restore", 0) == 0)
            return "refilling cells consumed by the last comparison";
        if (st.rfind("probe", 0) == 0)
            return "measuring the distance to the top of the witness string";
        if (st.rfind("compare", 0) == 0)
            return "matching the image against the witness string";
        if (st != "q1" && st != "q2")
            return "computing the image of the popped prefix";
        return "";
    };

    return compile_machine(p);
}

}  // namespace cspda

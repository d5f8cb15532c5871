#include "cspda/enumerate.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>

namespace cspda {

namespace {

using StateSet = std::vector<std::uint32_t>;  // sorted

StateSet step(const InitAutomaton& ia, const StateSet& from, Symbol s) {
    StateSet out;
    for (const auto& e : ia.edges)
        if (e.symbol == s &&
            std::binary_search(from.begin(), from.end(), e.from))
            out.push_back(e.to);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<StateId> entry_label(const CspdaSpec& spec, const StateSet& set, const Word& word) {
    std::optional<StateId> label;
    for (const auto& [nfa_state, entry] : spec.init_automaton.accepting) {
        if (!std::binary_search(set.begin(), set.end(), nfa_state))
            continue;
        if (label && *label != entry)
            throw AmbiguousEntryError("init word '" + spec.render_word(word) +
                                      "' carries two entry labels");
        label = entry;
    }
    return label;
}

}  // namespace

std::vector<InitWord> enumerate_init_words(const CspdaSpec& spec, std::size_t max_len) {
    return enumerate_init_words(spec, max_len, spec.check_alphabet);
}

std::vector<InitWord> enumerate_init_words(const CspdaSpec& spec, std::size_t max_len,
                                           const std::vector<Symbol>& symbol_order) {
    std::vector<InitWord> out;
    const auto& ia = spec.init_automaton;
    if (ia.num_states == 0)
        return out;

    struct Node {
        Word word;
        StateSet set;
    };
    std::deque<Node> frontier;
    frontier.push_back({{}, {ia.start}});
    while (!frontier.empty()) {
        Node node = std::move(frontier.front());
        frontier.pop_front();
        if (auto label = entry_label(spec, node.set, node.word))
            out.push_back({node.word, *label});
        if (node.word.size() == max_len)
            continue;
        for (Symbol s : symbol_order) {
            StateSet next = step(ia, node.set, s);
            if (next.empty())
                continue;
            Node child{node.word, std::move(next)};
            child.word.push_back(s);
            frontier.push_back(std::move(child));
        }
    }
    return out;
}

std::vector<Word> enumerate_input_words(const CspdaSpec& spec, std::size_t max_len) {
    std::vector<Word> out;
    out.push_back({});
    std::size_t level_begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::size_t level_end = out.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            for (Symbol a : spec.input_alphabet) {
                Word w = out[i];
                w.push_back(a);
                out.push_back(std::move(w));
            }
        }
        level_begin = level_end;
    }
    return out;
}

}  // namespace cspda

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cspda/machine.hpp"

namespace cspda {

struct InitWord {
    Word word;        // check stack content, bottom to top
    StateId entry;    // entry state named by the accepting run
};

// All words of length <= max_len in the init automaton's language, in
// length-lexicographic order of the given symbol order (defaults to the
// declaration order of the check alphabet).  Walks the lazily determinised
// automaton so only live prefixes are expanded.  Throws AmbiguousEntryError
// if one word admits accepting runs with different entry labels.
std::vector<InitWord> enumerate_init_words(const CspdaSpec& spec, std::size_t max_len);
std::vector<InitWord> enumerate_init_words(const CspdaSpec& spec, std::size_t max_len,
                                           const std::vector<Symbol>& symbol_order);

// All words over the input alphabet of length <= max_len, length-lex in
// declaration order.  The shared word order for equivalence runs.
std::vector<Word> enumerate_input_words(const CspdaSpec& spec, std::size_t max_len);

}  // namespace cspda

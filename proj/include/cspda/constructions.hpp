// Builders producing cspda machines whose languages are the co-word problems
// of the supported group families, plus the closure combinators.

#pragma once

#include <map>

#include "cspda/builder.hpp"
#include "cspda/combinators.hpp"
#include "cspda/ht.hpp"
#include "cspda/machine.hpp"
#include "cspda/mealy.hpp"
#include "cspda/oracle.hpp"

namespace cspda {

struct MissingInverseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyReplacementError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Normal-form pushdown simulation over a pad-only check stack; fails exactly
// when the reduced word outgrows the initialised height.
CspdaSpec build_virtually_free(const VirtuallyFreeData& data, const std::string& name = "vfree");

// Witness-string machine: stage 1 guesses a tree string x (top letter first)
// plus padding; stage 2 keeps the image of x under the element read so far on
// the pushdown and compares it against x after every letter.
CspdaSpec build_bounded_automata(const GroupAlphabet& alphabet,
                                 const std::map<Letter, GeneratorData>& generators,
                                 std::size_t degree, const std::string& name = "bounded");

// Prefix-replacement machine for G_{n,r}: stage 1 guesses a word in Q Sigma*
// (root symbol on top) plus padding; stage 2 maintains its image and compares.
CspdaSpec build_higman_thompson(std::size_t n, std::size_t r, const GroupAlphabet& alphabet,
                                const std::map<Letter, HTElement>& generators,
                                const std::string& name = "higman_thompson");

// New input alphabet: reading b replays the word w_b through the base machine.
CspdaSpec rewrite_generators(const CspdaSpec& base, const GroupAlphabet& new_alphabet,
                             const std::map<Letter, GWord>& words,
                             const std::string& name = "rewritten");

// Stage 1 picks a factor (disjoint tagged init languages); the chosen factor
// runs and letters of the other factor are ignored by stay moves.
CspdaSpec product_direct(const CspdaSpec& h, const CspdaSpec& k,
                         const std::string& name = "direct_product");

// Product states (q, t); reading a replays w_{t,a} through the base machine
// and accepting means t != 1 or the base accepts.
CspdaSpec extend_finite(const CspdaSpec& h, const FiniteExtensionData& data,
                        const std::string& name = "finite_extension");

// Layered machine for H wr K: the base machine's stacks below, the K normal
// form above, with descend/ascend moves and an entry probe after every letter.
CspdaSpec product_wreath(const CspdaSpec& h, const VirtuallyFreeData& k_data,
                         const std::string& name = "wreath");

// Check substacks, one sub-computation per component, with interrupted states
// recorded on the pushdown.
CspdaSpec product_free(const CspdaSpec& h, const CspdaSpec& k,
                       const std::string& name = "free_product");

}  // namespace cspda

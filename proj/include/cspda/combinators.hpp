// Oracles for groups assembled from other groups: direct products, finite
// extensions, free products, restricted wreath products with a virtually
// free top, and re-generation by new letters.

#pragma once

#include <map>

#include "cspda/oracle.hpp"

namespace cspda {

struct AlphabetCollisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// H x K: trivial iff both alphabet-projections are trivial.
OraclePtr oracle_direct_product(OraclePtr h, OraclePtr k);

// Transversal data for a finite extension G of H: reading a in state t emits
// the H-word w_{t,a} and moves to coset t_a.  The empty string names H's own
// coset.  The table must be total on (T ∪ {1}) × A.
struct FiniteExtensionData {
    GroupAlphabet alphabet;           // generating set A of G
    std::vector<Letter> transversal;  // T \ {1}
    struct Entry {
        GWord h_word;  // over H's alphabet
        Letter coset;  // "" or an element of T
    };
    std::map<std::pair<Letter, Letter>, Entry> table;

    const Entry& rule(const Letter& coset, const Letter& a) const;
    void validate(const GroupAlphabet& h_alphabet) const;
};

OraclePtr oracle_finite_extension(OraclePtr h, FiniteExtensionData data);

// H * K: split into maximal same-factor components, then repeatedly delete
// oracle-trivial components, merging the same-factor neighbours a deletion
// exposes.  Trivial iff everything cancels.
OraclePtr oracle_free_product(OraclePtr h, OraclePtr k);

// Restricted wreath product H wr K with K virtually free.  State: a finitely
// supported map from K-normal-forms to H-words plus the current K position;
// reading a in A_H appends to the component at the current position, reading
// x in A_K moves the position.
OraclePtr oracle_wreath(OraclePtr h, VirtuallyFreeData k_data);

// Subgroup/regeneration: each new letter b stands for a word w_b over the
// base alphabet; substitution then defers to the base oracle.  The map must
// respect inverses: w_{b^-1} = (w_b)^-1 formally.
OraclePtr oracle_rewritten(OraclePtr base, GroupAlphabet new_alphabet,
                           std::map<Letter, GWord> words);

}  // namespace cspda

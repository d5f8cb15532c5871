// Tree automorphisms given by finite transducers (Mealy machines), plus the
// finitary / directed generator data that bounded automata groups are built
// from.  A Mealy machine acts letter-by-letter on strings over the tree
// alphabet; products of machines realise products of group elements.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "cspda/oracle.hpp"

namespace cspda {

struct AlphabetMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tree letters are small indices 0..d-1.
using TreeLetter = std::uint8_t;
using TreeWord = std::vector<TreeLetter>;

struct MealyMachine {
    std::size_t degree = 2;  // |Sigma|
    // state -> letter -> (next state, output letter)
    std::vector<std::vector<std::pair<std::uint32_t, TreeLetter>>> table;
    std::uint32_t initial = 0;

    std::size_t num_states() const { return table.size(); }
    void check() const;  // outputs form a permutation at every state

    TreeWord apply(const TreeWord& w) const;
    MealyMachine inverse() const;
    static MealyMachine identity(std::size_t degree);
};

// Left-to-right product: the composite machine acts as m1 then m2 then ...
MealyMachine mealy_product(const std::vector<MealyMachine>& machines);

// True iff every state reachable from the initial state outputs identically.
bool mealy_is_identity(const MealyMachine& m);

// Finitary automorphism: a permutation tree of depth k; everything at depth
// >= k acts as the identity.
struct FinitaryAutomorphism {
    std::size_t degree = 2;
    std::size_t depth = 0;  // k_phi
    // permutation at each node x with |x| < depth, keyed by the node word
    std::map<TreeWord, std::vector<TreeLetter>> perms;

    void check() const;
    std::vector<TreeLetter> perm_at(const TreeWord& node) const;  // identity if absent
    static FinitaryAutomorphism identity(std::size_t degree);
};

TreeWord apply_finitary(const FinitaryAutomorphism& phi, const TreeWord& w);

// Directed automorphism with eventually periodic spine p q^omega.  The data
// records the spine, its image p' q'^omega, and for every spine class and
// every letter leaving the spine there the image letter together with the
// finitary tail acting below it.
struct DirectedAutomorphism {
    std::size_t degree = 2;
    TreeWord p, q;        // spine = p q^omega, q nonempty
    TreeWord p_image, q_image;  // same lengths as p, q

    struct OffSpine {
        TreeLetter image;            // image of the departing letter
        FinitaryAutomorphism tail;   // restriction below it
    };
    // off_p[l][y]: departure after the prefix of p of length l (0 <= l < |p|)
    // off_q[j][y]: departure after p q^k b_1..b_j, independent of k
    std::vector<std::map<TreeLetter, OffSpine>> off_p;
    std::vector<std::map<TreeLetter, OffSpine>> off_q;

    void check() const;
    TreeLetter spine_letter(std::size_t pos) const;   // letter at spine position pos (0-based)
    TreeLetter image_letter(std::size_t pos) const;   // aligned p' q'^omega letter
    const OffSpine& off_spine(std::size_t cls, TreeLetter y) const;
};

TreeWord apply_directed(const DirectedAutomorphism& delta, const TreeWord& w);

using GeneratorData = std::variant<FinitaryAutomorphism, DirectedAutomorphism>;

MealyMachine generator_to_mealy(const FinitaryAutomorphism& phi);
MealyMachine generator_to_mealy(const DirectedAutomorphism& delta);
MealyMachine generator_to_mealy(const GeneratorData& g);

TreeWord apply_generator(const GeneratorData& g, const TreeWord& w);
std::size_t generator_degree(const GeneratorData& g);

// Oracle for a subgroup of tree automorphisms: a word is trivial iff the
// product machine of its letters is the identity.
class AutomatonGroupOracle : public GroupOracle {
  public:
    AutomatonGroupOracle(GroupAlphabet alphabet, std::map<Letter, MealyMachine> generators);
    bool is_trivial(const GWord& w) const override;
    const MealyMachine& machine_for(const Letter& a) const;

  private:
    std::map<Letter, MealyMachine> generators_;
};

}  // namespace cspda

// Higman-Thompson group elements as prefix-replacement maps: a bijection
// between two finite complete antichains over Q Sigma*.  Words are stored as
// index sequences: position 0 is a root index (< r), later positions are tree
// letters (< n).

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cspda/oracle.hpp"

namespace cspda {

struct IncompatibleParametersError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidAntichainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using HTWord = std::vector<std::uint8_t>;

struct HTElement {
    std::size_t n = 2;  // |Sigma|
    std::size_t r = 1;  // |Q|
    // pairs (b, phi(b)); the domain words form B, the image words form C
    std::vector<std::pair<HTWord, HTWord>> pairs;

    void validate() const;  // both sides complete antichains, matching sizes
    HTElement inverse() const;
    std::size_t max_word_length() const;

    // image of a word that extends some domain element
    HTWord apply(const HTWord& w) const;

    bool is_identity() const;

    static HTElement identity(std::size_t n, std::size_t r);
};

// True iff the set of words is a finite complete antichain: every infinite
// string over Q Sigma^omega has exactly one element as a prefix.
bool is_complete_antichain(std::size_t n, std::size_t r, const std::vector<HTWord>& words);

HTElement ht_compose(const HTElement& e1, const HTElement& e2);

bool ht_is_trivial(const std::map<Letter, HTElement>& generators, const GWord& w);

class HigmanThompsonOracle : public GroupOracle {
  public:
    HigmanThompsonOracle(GroupAlphabet alphabet, std::map<Letter, HTElement> generators);
    bool is_trivial(const GWord& w) const override;
    const std::map<Letter, HTElement>& generators() const { return generators_; }

  private:
    std::map<Letter, HTElement> generators_;
};

}  // namespace cspda

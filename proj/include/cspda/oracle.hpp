// Brute-force word-problem deciders, independent of the machine model.
// Each oracle decides whether a word over a fixed inverse-closed generating
// set represents the identity of its group.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cspda {

using Letter = std::string;
using GWord = std::vector<Letter>;

struct UnknownSymbolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GroupAlphabet {
    std::vector<Letter> letters;  // canonical order
    std::unordered_map<Letter, Letter> inverse;

    bool contains(const Letter& a) const { return inverse.count(a) != 0; }
    const Letter& inverse_of(const Letter& a) const;
    void check_involution() const;

    // letters plus inverse pairs, e.g. {{"a","A"},{"b","B"}}; a singleton
    // {{"a"}} declares a self-inverse letter.
    static GroupAlphabet from_pairs(const std::vector<std::vector<Letter>>& pairs);
};

GWord formal_inverse(const GroupAlphabet& alphabet, const GWord& w);

class GroupOracle {
  public:
    explicit GroupOracle(GroupAlphabet alphabet) : alphabet_(std::move(alphabet)) {}
    virtual ~GroupOracle() = default;

    const GroupAlphabet& alphabet() const { return alphabet_; }
    virtual bool is_trivial(const GWord& w) const = 0;

  private:
    GroupAlphabet alphabet_;
};

using OraclePtr = std::shared_ptr<const GroupOracle>;

// Free reduction: cancels adjacent formal inverse pairs until none remain.
GWord free_reduce(const GroupAlphabet& alphabet, const GWord& w);

// Transversal rewriting data for a virtually free group: every element has a
// unique normal form w·t with w freely reduced over the basis B and t drawn
// from the transversal (or absent).  rewrite maps (t, a) to (w_{t,a}, t_a)
// realising t·a = w_{t,a}·t_a, with t = "" standing for the subgroup's coset.
struct VirtuallyFreeData {
    GroupAlphabet alphabet;                // input letters A
    GroupAlphabet basis;                   // free basis B with its involution
    std::vector<Letter> transversal;       // T, excluding the subgroup's own coset

    struct Rewrite {
        GWord word;    // over B, freely reduced
        Letter coset;  // element of T, or "" for the subgroup coset
    };
    std::map<std::pair<Letter, Letter>, Rewrite> rewrite;

    const Rewrite& rule(const Letter& coset, const Letter& a) const;
    // Throws SpecError on a malformed table: missing entries, words outside
    // the basis, or inconsistent length-2 identities t·a·(a^-1).
    void validate() const;

    struct NormalForm {
        GWord word;    // freely reduced over B
        Letter coset;  // "" or an element of T
        bool identity() const { return word.empty() && coset.empty(); }
    };
    NormalForm fold(const GWord& w) const;
    NormalForm fold_step(NormalForm nf, const Letter& a) const;

    static VirtuallyFreeData free_group(const GroupAlphabet& basis);
};

// Normal-form fold: true iff both the basis word and the coset end trivial.
bool vf_is_trivial(const VirtuallyFreeData& data, const GWord& w);

class FreeGroupOracle : public GroupOracle {
  public:
    explicit FreeGroupOracle(GroupAlphabet alphabet) : GroupOracle(std::move(alphabet)) {}
    bool is_trivial(const GWord& w) const override {
        return free_reduce(alphabet(), w).empty();
    }
};

class VirtuallyFreeOracle : public GroupOracle {
  public:
    explicit VirtuallyFreeOracle(VirtuallyFreeData data)
        : GroupOracle(data.alphabet), data_(std::move(data)) {}
    bool is_trivial(const GWord& w) const override { return vf_is_trivial(data_, w); }
    const VirtuallyFreeData& data() const { return data_; }

  private:
    VirtuallyFreeData data_;
};

}  // namespace cspda

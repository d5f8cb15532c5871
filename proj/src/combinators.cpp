#include "cspda/combinators.hpp"

#include <algorithm>

#include "cspda/machine.hpp"

namespace cspda {

namespace {

GroupAlphabet disjoint_union(const GroupAlphabet& a, const GroupAlphabet& b) {
    GroupAlphabet out = a;
    for (const auto& x : b.letters) {
        if (a.contains(x))
            throw AlphabetCollisionError("letter '" + x + "' appears in both factors");
        out.letters.push_back(x);
        out.inverse[x] = b.inverse.at(x);
    }
    return out;
}

class DirectProductOracle : public GroupOracle {
  public:
    DirectProductOracle(OraclePtr h, OraclePtr k)
        : GroupOracle(disjoint_union(h->alphabet(), k->alphabet())),
          h_(std::move(h)),
          k_(std::move(k)) {}

    bool is_trivial(const GWord& w) const override {
        GWord hw, kw;
        for (const auto& a : w) {
            if (h_->alphabet().contains(a))
                hw.push_back(a);
            else if (k_->alphabet().contains(a))
                kw.push_back(a);
            else
                throw UnknownSymbolError("letter '" + a + "' not in either factor");
        }
        return h_->is_trivial(hw) && k_->is_trivial(kw);
    }

  private:
    OraclePtr h_, k_;
};

class FiniteExtensionOracle : public GroupOracle {
  public:
    FiniteExtensionOracle(OraclePtr h, FiniteExtensionData data)
        : GroupOracle(data.alphabet), h_(std::move(h)), data_(std::move(data)) {
        data_.validate(h_->alphabet());
    }

    bool is_trivial(const GWord& w) const override {
        Letter t = "";
        GWord acc;
        for (const auto& a : w) {
            const auto& e = data_.rule(t, a);
            acc.insert(acc.end(), e.h_word.begin(), e.h_word.end());
            t = e.coset;
        }
        return t.empty() && h_->is_trivial(acc);
    }

  private:
    OraclePtr h_;
    FiniteExtensionData data_;
};

class FreeProductOracle : public GroupOracle {
  public:
    FreeProductOracle(OraclePtr h, OraclePtr k)
        : GroupOracle(disjoint_union(h->alphabet(), k->alphabet())),
          h_(std::move(h)),
          k_(std::move(k)) {}

    bool is_trivial(const GWord& w) const override {
        struct Component {
            bool in_h;
            GWord word;
        };
        std::vector<Component> comps;
        for (const auto& a : w) {
            bool in_h = h_->alphabet().contains(a);
            if (!in_h && !k_->alphabet().contains(a))
                throw UnknownSymbolError("letter '" + a + "' not in either factor");
            if (comps.empty() || comps.back().in_h != in_h)
                comps.push_back({in_h, {}});
            comps.back().word.push_back(a);
        }
        // Delete trivial components; a deletion may expose two same-factor
        // neighbours, which merge and must be re-tested.
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < comps.size(); ++i) {
                const auto& o = comps[i].in_h ? h_ : k_;
                if (!o->is_trivial(comps[i].word))
                    continue;
                comps.erase(comps.begin() + i);
                if (i > 0 && i < comps.size() && comps[i - 1].in_h == comps[i].in_h) {
                    comps[i - 1].word.insert(comps[i - 1].word.end(), comps[i].word.begin(),
                                             comps[i].word.end());
                    comps.erase(comps.begin() + i);
                }
                changed = true;
                break;
            }
        }
        return comps.empty();
    }

  private:
    OraclePtr h_, k_;
};

class WreathOracle : public GroupOracle {
  public:
    WreathOracle(OraclePtr h, VirtuallyFreeData k_data)
        : GroupOracle(disjoint_union(h->alphabet(), k_data.alphabet)),
          h_(std::move(h)),
          k_(std::move(k_data)) {
        k_.validate();
    }

    bool is_trivial(const GWord& w) const override {
        using NF = VirtuallyFreeData::NormalForm;
        NF pos;  // current K position, as its normal form
        std::map<std::string, GWord> components;  // keyed by the position normal form
        for (const auto& a : w) {
            if (h_->alphabet().contains(a)) {
                components[key(pos)].push_back(a);
            } else if (k_.alphabet.contains(a)) {
                pos = k_.fold_step(std::move(pos), a);
            } else {
                throw UnknownSymbolError("letter '" + a + "' not in either factor");
            }
        }
        if (!pos.identity())
            return false;
        for (const auto& [where, word] : components)
            if (!h_->is_trivial(word))
                return false;
        return true;
    }

  private:
    static std::string key(const VirtuallyFreeData::NormalForm& nf) {
        std::string out;
        for (const auto& b : nf.word) {
            out += b;
            out += '.';
        }
        out += '|';
        out += nf.coset;
        return out;
    }

    OraclePtr h_;
    VirtuallyFreeData k_;
};

class RewrittenOracle : public GroupOracle {
  public:
    RewrittenOracle(OraclePtr base, GroupAlphabet new_alphabet, std::map<Letter, GWord> words)
        : GroupOracle(std::move(new_alphabet)), base_(std::move(base)), words_(std::move(words)) {
        for (const auto& b : alphabet().letters) {
            auto it = words_.find(b);
            if (it == words_.end())
                throw SpecError("no replacement word for letter '" + b + "'");
            for (const auto& a : it->second)
                if (!base_->alphabet().contains(a))
                    throw UnknownSymbolError("replacement letter '" + a + "' not in base");
            const GWord& winv = words_.at(alphabet().inverse_of(b));
            if (winv != formal_inverse(base_->alphabet(), it->second))
                throw SpecError("replacement words do not respect inverses at '" + b + "'");
        }
    }

    bool is_trivial(const GWord& w) const override {
        GWord expanded;
        for (const auto& b : w) {
            auto it = words_.find(b);
            if (it == words_.end())
                throw UnknownSymbolError("letter '" + b + "' has no replacement");
            expanded.insert(expanded.end(), it->second.begin(), it->second.end());
        }
        return base_->is_trivial(expanded);
    }

  private:
    OraclePtr base_;
    std::map<Letter, GWord> words_;
};

}  // namespace

const FiniteExtensionData::Entry& FiniteExtensionData::rule(const Letter& coset,
                                                            const Letter& a) const {
    auto it = table.find({coset, a});
    if (it == table.end())
        throw UnknownSymbolError("no extension rule for ('" + coset + "','" + a + "')");
    return it->second;
}

void FiniteExtensionData::validate(const GroupAlphabet& h_alphabet) const {
    alphabet.check_involution();
    std::vector<Letter> cosets{""};
    cosets.insert(cosets.end(), transversal.begin(), transversal.end());
    for (const auto& t : cosets) {
        for (const auto& a : alphabet.letters) {
            const Entry& e = rule(t, a);
            for (const auto& b : e.h_word)
                if (!h_alphabet.contains(b))
                    throw SpecError("extension word letter '" + b + "' outside H's alphabet");
            if (!e.coset.empty() &&
                std::find(transversal.begin(), transversal.end(), e.coset) == transversal.end())
                throw SpecError("extension coset '" + e.coset + "' outside the transversal");
        }
    }
}

OraclePtr oracle_direct_product(OraclePtr h, OraclePtr k) {
    return std::make_shared<DirectProductOracle>(std::move(h), std::move(k));
}

OraclePtr oracle_finite_extension(OraclePtr h, FiniteExtensionData data) {
    return std::make_shared<FiniteExtensionOracle>(std::move(h), std::move(data));
}

OraclePtr oracle_free_product(OraclePtr h, OraclePtr k) {
    return std::make_shared<FreeProductOracle>(std::move(h), std::move(k));
}

OraclePtr oracle_wreath(OraclePtr h, VirtuallyFreeData k_data) {
    return std::make_shared<WreathOracle>(std::move(h), std::move(k_data));
}

OraclePtr oracle_rewritten(OraclePtr base, GroupAlphabet new_alphabet,
                           std::map<Letter, GWord> words) {
    return std::make_shared<RewrittenOracle>(std::move(base), std::move(new_alphabet),
                                             std::move(words));
}

}  // namespace cspda

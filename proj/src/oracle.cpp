#include "cspda/oracle.hpp"

#include <algorithm>

#include "cspda/machine.hpp"

namespace cspda {

const Letter& GroupAlphabet::inverse_of(const Letter& a) const {
    auto it = inverse.find(a);
    if (it == inverse.end())
        throw UnknownSymbolError("letter '" + a + "' not in alphabet");
    return it->second;
}

void GroupAlphabet::check_involution() const {
    for (const auto& a : letters) {
        const Letter& b = inverse_of(a);
        if (!contains(b) || inverse_of(b) != a)
            throw SpecError("alphabet involution broken at '" + a + "'");
    }
}

GroupAlphabet GroupAlphabet::from_pairs(const std::vector<std::vector<Letter>>& pairs) {
    GroupAlphabet out;
    for (const auto& p : pairs) {
        if (p.size() == 1) {
            out.letters.push_back(p[0]);
            out.inverse[p[0]] = p[0];
        } else if (p.size() == 2) {
            out.letters.push_back(p[0]);
            out.letters.push_back(p[1]);
            out.inverse[p[0]] = p[1];
            out.inverse[p[1]] = p[0];
        } else {
            throw SpecError("alphabet pair must have one or two letters");
        }
    }
    out.check_involution();
    return out;
}

GWord formal_inverse(const GroupAlphabet& alphabet, const GWord& w) {
    GWord out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        out.push_back(alphabet.inverse_of(*it));
    return out;
}

GWord free_reduce(const GroupAlphabet& alphabet, const GWord& w) {
    GWord out;
    for (const auto& a : w) {
        const Letter& inv = alphabet.inverse_of(a);
        if (!out.empty() && out.back() == inv)
            out.pop_back();
        else
            out.push_back(a);
    }
    return out;
}

const VirtuallyFreeData::Rewrite& VirtuallyFreeData::rule(const Letter& coset,
                                                          const Letter& a) const {
    auto it = rewrite.find({coset, a});
    if (it == rewrite.end())
        throw UnknownSymbolError("no rewrite for coset '" + coset + "' and letter '" + a + "'");
    return it->second;
}

VirtuallyFreeData::NormalForm VirtuallyFreeData::fold_step(NormalForm nf, const Letter& a) const {
    const Rewrite& r = rule(nf.coset, a);
    for (const auto& b : r.word) {
        const Letter& inv = basis.inverse_of(b);
        if (!nf.word.empty() && nf.word.back() == inv)
            nf.word.pop_back();
        else
            nf.word.push_back(b);
    }
    nf.coset = r.coset;
    return nf;
}

VirtuallyFreeData::NormalForm VirtuallyFreeData::fold(const GWord& w) const {
    NormalForm nf;
    for (const auto& a : w) {
        if (!alphabet.contains(a))
            throw UnknownSymbolError("letter '" + a + "' not in alphabet");
        nf = fold_step(std::move(nf), a);
    }
    return nf;
}

void VirtuallyFreeData::validate() const {
    alphabet.check_involution();
    basis.check_involution();
    std::vector<Letter> cosets{""};
    cosets.insert(cosets.end(), transversal.begin(), transversal.end());
    for (const auto& t : cosets) {
        for (const auto& a : alphabet.letters) {
            const Rewrite& r = rule(t, a);  // throws if missing
            for (const auto& b : r.word)
                if (!basis.contains(b))
                    throw SpecError("rewrite word letter '" + b + "' outside the basis");
            if (!r.coset.empty() &&
                std::find(transversal.begin(), transversal.end(), r.coset) == transversal.end())
                throw SpecError("rewrite coset '" + r.coset + "' outside the transversal");
            if (free_reduce(basis, r.word) != r.word)
                throw SpecError("rewrite word for ('" + t + "','" + a + "') is not reduced");
        }
    }
    // basis letters in A must act freely on the subgroup coset
    for (const auto& b : basis.letters) {
        if (!alphabet.contains(b))
            continue;
        const Rewrite& r = rule("", b);
        if (r.word != GWord{b} || !r.coset.empty())
            throw SpecError("rewrite('', '" + b + "') must be ('" + b + "', '')");
    }
    // consistency on all length-2 identities t·a·a^-1 = t
    for (const auto& t : cosets) {
        for (const auto& a : alphabet.letters) {
            NormalForm nf{{}, t};
            nf = fold_step(std::move(nf), a);
            nf = fold_step(std::move(nf), alphabet.inverse_of(a));
            if (!nf.word.empty() || nf.coset != t)
                throw SpecError("rewrite table breaks t·a·a^-1 = t at ('" + t + "','" + a + "')");
        }
    }
}

VirtuallyFreeData VirtuallyFreeData::free_group(const GroupAlphabet& basis) {
    VirtuallyFreeData data;
    data.alphabet = basis;
    data.basis = basis;
    for (const auto& b : basis.letters)
        data.rewrite[{"", b}] = {{b}, ""};
    return data;
}

bool vf_is_trivial(const VirtuallyFreeData& data, const GWord& w) {
    return data.fold(w).identity();
}

}  // namespace cspda

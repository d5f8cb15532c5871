#include "cspda/ht.hpp"

#include <algorithm>
#include <set>

#include "cspda/machine.hpp"

namespace cspda {

namespace {

bool is_prefix(const HTWord& a, const HTWord& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// Recursive cover check: below `prefix`, the words extending it must tile the
// subtree exactly.
bool covers(std::size_t n, const std::vector<HTWord>& sorted, const HTWord& prefix) {
    auto exact = std::binary_search(sorted.begin(), sorted.end(), prefix);
    bool extended = false;
    for (const auto& w : sorted)
        if (w.size() > prefix.size() && is_prefix(prefix, w))
            extended = true;
    if (exact)
        return !extended;  // an element that is also extended breaks the antichain
    if (!extended)
        return false;  // hole: some omega through here has no prefix in the set
    for (std::size_t x = 0; x < n; ++x) {
        HTWord child = prefix;
        child.push_back(static_cast<std::uint8_t>(x));
        if (!covers(n, sorted, child))
            return false;
    }
    return true;
}

}  // namespace

bool is_complete_antichain(std::size_t n, std::size_t r, const std::vector<HTWord>& words) {
    if (words.empty())
        return false;
    std::vector<HTWord> sorted = words;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        return false;
    for (const auto& w : sorted) {
        if (w.empty() || w[0] >= r)
            return false;
        for (std::size_t i = 1; i < w.size(); ++i)
            if (w[i] >= n)
                return false;
    }
    for (std::size_t root = 0; root < r; ++root)
        if (!covers(n, sorted, {static_cast<std::uint8_t>(root)}))
            return false;
    return true;
}

void HTElement::validate() const {
    if (n < 2 || r < 1)
        throw IncompatibleParametersError("need n >= 2 and r >= 1");
    std::vector<HTWord> domain, image;
    for (const auto& [b, c] : pairs) {
        domain.push_back(b);
        image.push_back(c);
    }
    if (!is_complete_antichain(n, r, domain))
        throw InvalidAntichainError("domain is not a finite complete antichain");
    if (!is_complete_antichain(n, r, image))
        throw InvalidAntichainError("image is not a finite complete antichain");
}

HTElement HTElement::inverse() const {
    HTElement inv;
    inv.n = n;
    inv.r = r;
    for (const auto& [b, c] : pairs)
        inv.pairs.push_back({c, b});
    return inv;
}

std::size_t HTElement::max_word_length() const {
    std::size_t k = 0;
    for (const auto& [b, c] : pairs)
        k = std::max({k, b.size(), c.size()});
    return k;
}

HTWord HTElement::apply(const HTWord& w) const {
    for (const auto& [b, c] : pairs) {
        if (is_prefix(b, w)) {
            HTWord out = c;
            out.insert(out.end(), w.begin() + b.size(), w.end());
            return out;
        }
    }
    throw InvalidAntichainError("word has no prefix in the domain antichain");
}

bool HTElement::is_identity() const {
    for (const auto& [b, c] : pairs)
        if (b != c)
            return false;
    return true;
}

HTElement HTElement::identity(std::size_t n, std::size_t r) {
    HTElement e;
    e.n = n;
    e.r = r;
    for (std::size_t root = 0; root < r; ++root) {
        HTWord w{static_cast<std::uint8_t>(root)};
        e.pairs.push_back({w, w});
    }
    return e;
}

HTElement ht_compose(const HTElement& e1, const HTElement& e2) {
    if (e1.n != e2.n || e1.r != e2.r)
        throw IncompatibleParametersError("composing elements of different G_{n,r}");

    HTElement a = e1, b = e2;
    // Refine by leaf expansions until a's image antichain equals b's domain
    // antichain as a set.  Expanding a pair replaces it by its n children on
    // both sides simultaneously, which does not change the induced map.
    auto expand = [](HTElement& e, std::size_t index, bool domain_side) {
        auto [bw, cw] = e.pairs[index];
        e.pairs.erase(e.pairs.begin() + index);
        for (std::size_t x = 0; x < e.n; ++x) {
            HTWord nb = bw, nc = cw;
            nb.push_back(static_cast<std::uint8_t>(x));
            nc.push_back(static_cast<std::uint8_t>(x));
            e.pairs.push_back({nb, nc});
        }
        (void)domain_side;
    };

    for (;;) {
        bool changed = false;
        for (std::size_t i = 0; i < a.pairs.size() && !changed; ++i) {
            for (std::size_t j = 0; j < b.pairs.size() && !changed; ++j) {
                const HTWord& c1 = a.pairs[i].second;
                const HTWord& b2 = b.pairs[j].first;
                if (c1.size() < b2.size() && is_prefix(c1, b2)) {
                    expand(a, i, false);
                    changed = true;
                } else if (b2.size() < c1.size() && is_prefix(b2, c1)) {
                    expand(b, j, true);
                    changed = true;
                }
            }
        }
        if (!changed)
            break;
    }

    HTElement out;
    out.n = a.n;
    out.r = a.r;
    for (const auto& [d, mid] : a.pairs) {
        bool matched = false;
        for (const auto& [b2, c2] : b.pairs) {
            if (b2 == mid) {
                out.pairs.push_back({d, c2});
                matched = true;
                break;
            }
        }
        if (!matched)
            throw InvalidAntichainError("refinement failed to align antichains");
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

bool ht_is_trivial(const std::map<Letter, HTElement>& generators, const GWord& w) {
    if (w.empty())
        return true;
    auto first = generators.find(w[0]);
    if (first == generators.end())
        throw UnknownSymbolError("letter '" + w[0] + "' has no generator");
    HTElement acc = first->second;
    for (std::size_t i = 1; i < w.size(); ++i) {
        auto it = generators.find(w[i]);
        if (it == generators.end())
            throw UnknownSymbolError("letter '" + w[i] + "' has no generator");
        acc = ht_compose(acc, it->second);
    }
    return acc.is_identity();
}

HigmanThompsonOracle::HigmanThompsonOracle(GroupAlphabet alphabet,
                                           std::map<Letter, HTElement> generators)
    : GroupOracle(std::move(alphabet)), generators_(std::move(generators)) {
    for (const auto& a : this->alphabet().letters)
        if (!generators_.count(a))
            throw SpecError("no tree-pair data for generator '" + a + "'");
    for (const auto& [letter, e] : generators_)
        e.validate();
}

bool HigmanThompsonOracle::is_trivial(const GWord& w) const {
    return ht_is_trivial(generators_, w);
}

}  // namespace cspda

// Shared test corpus: concrete group data used across the unit and
// acceptance suites.

#pragma once

#include <array>
#include <map>

#include "cspda/combinators.hpp"
#include "cspda/ht.hpp"
#include "cspda/mealy.hpp"
#include "cspda/oracle.hpp"

namespace fixtures {

using namespace cspda;

// F2 = <a, b>, free of rank 2.
inline GroupAlphabet f2_alphabet() {
    return GroupAlphabet::from_pairs({{"a", "A"}, {"b", "B"}});
}

inline VirtuallyFreeData f2_data() {
    return VirtuallyFreeData::free_group(f2_alphabet());
}

// Z = <u>.
inline GroupAlphabet z_alphabet(const Letter& u = "u", const Letter& uinv = "U") {
    return GroupAlphabet::from_pairs({{u, uinv}});
}

// Z2 = <p | p^2>: basis empty, transversal {p}.
inline VirtuallyFreeData z2_data(const Letter& p) {
    VirtuallyFreeData data;
    data.alphabet = GroupAlphabet::from_pairs({{p}});
    data.transversal = {p};
    data.rewrite[{"", p}] = {{}, p};
    data.rewrite[{p, p}] = {{}, ""};
    return data;
}

// Infinite dihedral group over two involutions x, y: the index-2 free
// subgroup is generated by g = xy.
inline VirtuallyFreeData dinf_data(const Letter& x = "x", const Letter& y = "y") {
    VirtuallyFreeData data;
    data.alphabet = GroupAlphabet::from_pairs({{x}, {y}});
    data.basis = GroupAlphabet::from_pairs({{"g", "G"}});
    data.transversal = {x};
    data.rewrite[{"", x}] = {{}, x};
    data.rewrite[{"", y}] = {{"G"}, x};   // y = (xy)^-1 x
    data.rewrite[{x, x}] = {{}, ""};
    data.rewrite[{x, y}] = {{"g"}, ""};   // xy = g
    return data;
}

// Grigorchuk generators on the binary tree: a swaps at the root; b, c, d are
// directed along the spine 1^omega with restriction cycles (a,c), (a,d),
// (1,b) respectively.
inline FinitaryAutomorphism grig_a() {
    FinitaryAutomorphism a;
    a.degree = 2;
    a.depth = 1;
    a.perms[{}] = {1, 0};
    return a;
}

inline DirectedAutomorphism grig_directed(const std::array<bool, 3>& active) {
    // active[j]: the off-spine tail at periodic class j is the root swap;
    // otherwise it is the identity.
    DirectedAutomorphism delta;
    delta.degree = 2;
    delta.q = {1, 1, 1};
    delta.q_image = {1, 1, 1};
    delta.off_q.resize(3);
    for (std::size_t j = 0; j < 3; ++j) {
        DirectedAutomorphism::OffSpine off;
        off.image = 0;  // b, c, d all fix the first letter off the spine
        off.tail = active[j] ? grig_a() : FinitaryAutomorphism::identity(2);
        delta.off_q[j][0] = off;
    }
    return delta;
}

inline std::map<Letter, GeneratorData> grig_generators() {
    std::map<Letter, GeneratorData> g;
    g["a"] = grig_a();
    g["b"] = grig_directed({true, true, false});   // restrictions a, c, d -> tails a, a, 1
    g["c"] = grig_directed({true, false, true});   // tails a, 1, a
    g["d"] = grig_directed({false, true, true});   // tails 1, a, a
    return g;
}

inline GroupAlphabet grig_alphabet() {
    return GroupAlphabet::from_pairs({{"a"}, {"b"}, {"c"}, {"d"}});
}

// The classical 5-state transducer: psi(b) = (a, c), psi(c) = (a, d),
// psi(d) = (1, b), a swaps.  States: a=0, b=1, c=2, d=3, id=4.
inline std::map<Letter, MealyMachine> grig_standard_machines() {
    MealyMachine m;
    m.degree = 2;
    m.table.resize(5);
    auto set = [&](std::uint32_t s, std::uint32_t on0, TreeLetter out0, std::uint32_t on1,
                   TreeLetter out1) {
        m.table[s] = {{on0, out0}, {on1, out1}};
    };
    set(0, 4, 1, 4, 0);  // a: swap, both restrictions trivial
    set(1, 0, 0, 2, 1);  // b = (a, c)
    set(2, 0, 0, 3, 1);  // c = (a, d)
    set(3, 4, 0, 1, 1);  // d = (1, b)
    set(4, 4, 0, 4, 1);  // identity
    m.check();
    std::map<Letter, MealyMachine> out;
    for (auto [letter, s] : {std::pair<Letter, std::uint32_t>{"a", 0}, {"b", 1}, {"c", 2},
                             {"d", 3}}) {
        MealyMachine g = m;
        g.initial = s;
        out[letter] = g;
    }
    return out;
}

// Higman-Thompson G_{2,1} generators: the top swap and a Thompson-style
// unbalanced rebracketing.
inline HTElement ht_swap() {
    HTElement e;
    e.n = 2;
    e.r = 1;
    e.pairs = {{{0, 0}, {0, 1}}, {{0, 1}, {0, 0}}};
    return e;
}

inline HTElement ht_shift() {
    HTElement e;
    e.n = 2;
    e.r = 1;
    e.pairs = {{{0, 0}, {0, 0, 0}}, {{0, 1, 0}, {0, 0, 1}}, {{0, 1, 1}, {0, 1}}};
    return e;
}

inline std::map<Letter, HTElement> ht_generators() {
    std::map<Letter, HTElement> g;
    g["s"] = ht_swap();
    g["x"] = ht_shift();
    g["X"] = ht_shift().inverse();
    return g;
}

inline GroupAlphabet ht_alphabet() {
    return GroupAlphabet::from_pairs({{"s"}, {"x", "X"}});
}

// Lamplighter pieces: H = Z2 = <h>, K = Z = <t>.
inline OraclePtr lamplighter_oracle() {
    auto h = std::make_shared<VirtuallyFreeOracle>(z2_data("h"));
    return oracle_wreath(h, VirtuallyFreeData::free_group(z_alphabet("t", "T")));
}

inline GWord gw(std::initializer_list<const char*> letters) {
    GWord w;
    for (const char* l : letters)
        w.push_back(l);
    return w;
}

}  // namespace fixtures

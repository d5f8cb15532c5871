#include <doctest.h>

#include <random>

#include "fixtures.hpp"

using namespace cspda;
using fixtures::gw;

namespace {

// The oracle axioms: the empty word, formal inverses, and insertion of a
// cancelling pair anywhere.
void check_oracle_invariants(const GroupOracle& oracle, std::uint64_t seed = 7,
                             std::size_t rounds = 40, std::size_t max_len = 5) {
    const auto& letters = oracle.alphabet().letters;
    std::mt19937_64 rng(seed);
    CHECK(oracle.is_trivial({}));
    for (std::size_t i = 0; i < rounds; ++i) {
        GWord w;
        std::size_t len = rng() % (max_len + 1);
        for (std::size_t j = 0; j < len; ++j)
            w.push_back(letters[rng() % letters.size()]);

        GWord cancel = w;
        GWord inv = formal_inverse(oracle.alphabet(), w);
        cancel.insert(cancel.end(), inv.begin(), inv.end());
        CHECK(oracle.is_trivial(cancel));

        GWord padded = w;
        std::size_t pos = w.empty() ? 0 : rng() % (w.size() + 1);
        const Letter& a = letters[rng() % letters.size()];
        padded.insert(padded.begin() + pos, oracle.alphabet().inverse_of(a));
        padded.insert(padded.begin() + pos, a);
        CHECK(oracle.is_trivial(padded) == oracle.is_trivial(w));
    }
}

}  // namespace

TEST_CASE("free reduction") {
    GroupAlphabet f2 = fixtures::f2_alphabet();
    CHECK(free_reduce(f2, gw({"a", "A"})).empty());
    CHECK(free_reduce(f2, gw({"a", "b", "B", "A"})).empty());
    CHECK(free_reduce(f2, gw({"a", "b", "A"})) == gw({"a", "b", "A"}));
    CHECK_THROWS_AS(free_reduce(f2, gw({"z"})), UnknownSymbolError);
}

TEST_CASE("virtually free fold on the infinite dihedral group") {
    VirtuallyFreeData dinf = fixtures::dinf_data();
    dinf.validate();
    CHECK(vf_is_trivial(dinf, {}));
    CHECK(vf_is_trivial(dinf, gw({"x", "x"})));
    CHECK(vf_is_trivial(dinf, gw({"y", "y"})));
    CHECK_FALSE(vf_is_trivial(dinf, gw({"x", "y"})));
    CHECK_FALSE(vf_is_trivial(dinf, gw({"x"})));
    CHECK(vf_is_trivial(dinf, gw({"x", "y", "x", "y", "y", "x", "y", "x"})));
}

TEST_CASE("oracle invariants hold across the corpus") {
    check_oracle_invariants(FreeGroupOracle(fixtures::f2_alphabet()));
    check_oracle_invariants(VirtuallyFreeOracle(fixtures::dinf_data()));
    check_oracle_invariants(VirtuallyFreeOracle(fixtures::z2_data("p")));
    check_oracle_invariants(
        AutomatonGroupOracle(fixtures::grig_alphabet(), fixtures::grig_standard_machines()));
    check_oracle_invariants(HigmanThompsonOracle(fixtures::ht_alphabet(),
                                                 fixtures::ht_generators()),
                            7, 25, 4);
    check_oracle_invariants(*fixtures::lamplighter_oracle());
    auto zz = oracle_free_product(
        std::make_shared<VirtuallyFreeOracle>(fixtures::z2_data("x")),
        std::make_shared<VirtuallyFreeOracle>(fixtures::z2_data("y")));
    check_oracle_invariants(*zz);
}

TEST_CASE("mealy product and identity checks") {
    auto machines = fixtures::grig_standard_machines();
    SUBCASE("product of one machine acts like the machine") {
        MealyMachine p = mealy_product({machines.at("b")});
        for (TreeWord w : {TreeWord{0, 1, 1}, TreeWord{1, 1, 1, 0}, TreeWord{}})
            CHECK(p.apply(w) == machines.at("b").apply(w));
    }
    SUBCASE("machine times inverse is the identity") {
        MealyMachine p = mealy_product({machines.at("b"), machines.at("b").inverse()});
        CHECK(mealy_is_identity(p));
    }
    SUBCASE("ab is nontrivial at depth 1") {
        MealyMachine p = mealy_product({machines.at("a"), machines.at("b")});
        CHECK_FALSE(mealy_is_identity(p));
        CHECK(p.apply({0}) != TreeWord{0});
    }
    SUBCASE("identity check agrees with fixing all short strings") {
        auto fixes_short_strings = [](const MealyMachine& m) {
            std::vector<TreeWord> frontier{{}};
            for (std::size_t len = 0; len <= m.num_states(); ++len) {
                std::vector<TreeWord> next;
                for (const auto& w : frontier) {
                    if (m.apply(w) != w)
                        return false;
                    for (std::size_t x = 0; x < m.degree; ++x) {
                        TreeWord e = w;
                        e.push_back(static_cast<TreeLetter>(x));
                        next.push_back(std::move(e));
                    }
                }
                frontier = std::move(next);
            }
            return true;
        };
        for (const auto& word : {gw({"a", "a"}), gw({"a", "b"}), gw({"b", "c"}),
                                 gw({"b", "c", "d"}), gw({"d", "b", "c"})}) {
            std::vector<MealyMachine> fs;
            for (const auto& l : word)
                fs.push_back(machines.at(l));
            MealyMachine p = mealy_product(fs);
            CHECK(mealy_is_identity(p) == fixes_short_strings(p));
        }
    }
}

TEST_CASE("grigorchuk relations and non-relations via the mealy oracle") {
    AutomatonGroupOracle oracle(fixtures::grig_alphabet(), fixtures::grig_standard_machines());
    CHECK(oracle.is_trivial(gw({"a", "a"})));
    CHECK(oracle.is_trivial(gw({"b", "b"})));
    CHECK(oracle.is_trivial(gw({"c", "c"})));
    CHECK(oracle.is_trivial(gw({"d", "d"})));
    CHECK(oracle.is_trivial(gw({"b", "c", "d"})));
    CHECK(oracle.is_trivial(gw({"d", "b", "c"})));
    CHECK_FALSE(oracle.is_trivial(gw({"a", "b"})));
    CHECK_FALSE(oracle.is_trivial(gw({"a", "d"})));
    CHECK_FALSE(oracle.is_trivial(gw({"b"})));
    // (ad)^4 = 1 but (ad)^2 != 1
    GWord ad4, ad2 = gw({"a", "d", "a", "d"});
    for (int i = 0; i < 4; ++i) {
        ad4.push_back("a");
        ad4.push_back("d");
    }
    CHECK(oracle.is_trivial(ad4));
    CHECK_FALSE(oracle.is_trivial(ad2));
}

TEST_CASE("finitary application") {
    FinitaryAutomorphism id = FinitaryAutomorphism::identity(2);
    CHECK(apply_finitary(id, {0, 1, 0}) == TreeWord{0, 1, 0});
    FinitaryAutomorphism a = fixtures::grig_a();
    CHECK(apply_finitary(a, {0, 1}) == TreeWord{1, 1});
    CHECK(apply_finitary(a, {0, 0, 0}) == TreeWord{1, 0, 0});
}

TEST_CASE("directed application matches the displayed formulas") {
    auto gens = fixtures::grig_generators();
    const auto& b = std::get<DirectedAutomorphism>(gens.at("b"));
    // depart at the root: b(0u) = 0 a(u)
    CHECK(apply_directed(b, {0, 1, 1}) == TreeWord{0, 0, 1});
    // fully on the spine: image is the aligned spine image
    CHECK(apply_directed(b, {1, 1, 1, 1}) == TreeWord{1, 1, 1, 1});
    // depart after one spine letter: b|_1 = c, c(0u) = 0 a(u)
    CHECK(apply_directed(b, {1, 0, 1}) == TreeWord{1, 0, 0});
    // depart after two: b|_11 = d, d(0u) = 0 u
    CHECK(apply_directed(b, {1, 1, 0, 1}) == TreeWord{1, 1, 0, 1});
}

TEST_CASE("generator transducers agree with the definitional action") {
    auto gens = fixtures::grig_generators();
    for (const auto& [letter, g] : gens) {
        MealyMachine m = generator_to_mealy(g);
        std::vector<TreeWord> frontier{{}};
        for (std::size_t len = 0; len <= 8; ++len) {
            std::vector<TreeWord> next;
            for (const auto& w : frontier) {
                CHECK(m.apply(w) == apply_generator(g, w));
                if (len < 8)
                    for (TreeLetter x = 0; x < 2; ++x) {
                        TreeWord e = w;
                        e.push_back(x);
                        next.push_back(std::move(e));
                    }
            }
            frontier = std::move(next);
        }
    }
}

TEST_CASE("generator transducers match the classical grigorchuk machine") {
    auto gens = fixtures::grig_generators();
    auto classical = fixtures::grig_standard_machines();
    for (const auto& [letter, g] : gens) {
        MealyMachine built = generator_to_mealy(g);
        MealyMachine ref = classical.at(letter);
        MealyMachine diff = mealy_product({built, ref.inverse()});
        CHECK(mealy_is_identity(diff));
    }
}

TEST_CASE("complete antichain recognition") {
    // the worked example over n=2, r=1 and its broken variant
    CHECK(is_complete_antichain(2, 1, {{0, 0}, {0, 1, 0}, {0, 1, 1}}));
    CHECK_FALSE(is_complete_antichain(2, 1, {{0, 0}, {0, 0, 0}, {0, 1, 0}, {0, 1, 1}}));
    CHECK(is_complete_antichain(2, 1, {{0}}));
    CHECK_FALSE(is_complete_antichain(2, 1, {{0, 0}}));
    CHECK(is_complete_antichain(2, 2, {{0}, {1}}));
    CHECK_FALSE(is_complete_antichain(2, 2, {{0}}));
}

TEST_CASE("higman-thompson composition") {
    HTElement id = HTElement::identity(2, 1);
    HTElement s = fixtures::ht_swap();
    HTElement x = fixtures::ht_shift();
    s.validate();
    x.validate();

    CHECK(ht_compose(s, id).is_identity() == false);
    CHECK(ht_compose(s, s).is_identity());
    CHECK(ht_compose(x, x.inverse()).is_identity());
    CHECK_FALSE(ht_compose(s, x).is_identity());

    SUBCASE("composition with an expansion step acts correctly on prefixes") {
        HTElement sx = ht_compose(s, x);
        // check against pointwise application on long prefixes
        std::vector<HTWord> frontier{{0}};
        for (std::size_t len = 0; len < 4; ++len) {
            std::vector<HTWord> next;
            for (const auto& w : frontier) {
                for (std::uint8_t c = 0; c < 2; ++c) {
                    HTWord e = w;
                    e.push_back(c);
                    next.push_back(e);
                }
            }
            frontier = std::move(next);
        }
        for (const auto& w : frontier)  // length 5 >= every antichain depth here
            CHECK(sx.apply(w) == x.apply(s.apply(w)));
    }

    SUBCASE("associativity on sampled triples") {
        std::vector<HTElement> pool{s, x, x.inverse(), ht_compose(s, x)};
        for (const auto& e1 : pool)
            for (const auto& e2 : pool)
                for (const auto& e3 : pool) {
                    HTElement left = ht_compose(ht_compose(e1, e2), e3);
                    HTElement right = ht_compose(e1, ht_compose(e2, e3));
                    CHECK(ht_compose(left, right.inverse()).is_identity());
                }
    }
}

TEST_CASE("ht triviality over words") {
    auto gens = fixtures::ht_generators();
    CHECK(ht_is_trivial(gens, {}));
    CHECK(ht_is_trivial(gens, gw({"s", "s"})));
    CHECK_FALSE(ht_is_trivial(gens, gw({"s", "x"})));
    CHECK(ht_is_trivial(gens, gw({"x", "s", "s", "X"})));
    CHECK_FALSE(ht_is_trivial(gens, gw({"x", "x", "X"})));
}

TEST_CASE("free product oracle") {
    auto zz = oracle_free_product(
        std::make_shared<VirtuallyFreeOracle>(fixtures::z2_data("x")),
        std::make_shared<VirtuallyFreeOracle>(fixtures::z2_data("y")));
    CHECK(zz->is_trivial(gw({"x", "x"})));
    CHECK_FALSE(zz->is_trivial(gw({"x", "y", "x", "y"})));
    CHECK_FALSE(zz->is_trivial(gw({"x", "y", "x"})));
    CHECK(zz->is_trivial(gw({"x", "y", "y", "x"})));
}

TEST_CASE("free product oracle agrees with the dihedral normal form") {
    auto zz = oracle_free_product(
        std::make_shared<VirtuallyFreeOracle>(fixtures::z2_data("x")),
        std::make_shared<VirtuallyFreeOracle>(fixtures::z2_data("y")));
    VirtuallyFreeData dinf = fixtures::dinf_data();
    std::vector<GWord> frontier{{}};
    for (std::size_t len = 0; len <= 8; ++len) {
        std::vector<GWord> next;
        for (const auto& w : frontier) {
            CHECK(zz->is_trivial(w) == vf_is_trivial(dinf, w));
            if (len < 8)
                for (const Letter& l : {Letter("x"), Letter("y")}) {
                    GWord e = w;
                    e.push_back(l);
                    next.push_back(std::move(e));
                }
        }
        frontier = std::move(next);
    }
}

TEST_CASE("wreath oracle on the lamplighter group") {
    OraclePtr lamp = fixtures::lamplighter_oracle();
    CHECK(lamp->is_trivial(gw({"t", "T"})));
    CHECK(lamp->is_trivial(gw({"h", "h"})));
    CHECK_FALSE(lamp->is_trivial(gw({"h", "t", "h", "T"})));  // lamps at two positions
    CHECK(lamp->is_trivial(gw({"h", "t", "h", "T", "h", "t", "h", "T"})));
    CHECK_FALSE(lamp->is_trivial(gw({"h", "t"})));
    CHECK(lamp->is_trivial(gw({"t", "h", "T", "t", "h", "T"})));
}

TEST_CASE("direct product oracle") {
    auto f2 = std::make_shared<FreeGroupOracle>(fixtures::f2_alphabet());
    auto z2 = std::make_shared<VirtuallyFreeOracle>(fixtures::z2_data("z"));
    auto prod = oracle_direct_product(f2, z2);
    CHECK(prod->is_trivial(gw({"a", "z", "A", "z"})));
    CHECK_FALSE(prod->is_trivial(gw({"a", "z"})));
    CHECK_FALSE(prod->is_trivial(gw({"z"})));
    CHECK(prod->is_trivial(gw({"z", "z"})));
    CHECK_THROWS_AS(oracle_direct_product(f2, f2), AlphabetCollisionError);
}

TEST_CASE("finite extension oracle builds the dihedral group over Z") {
    auto z = std::make_shared<FreeGroupOracle>(fixtures::z_alphabet("g", "G"));
    FiniteExtensionData data;
    data.alphabet = GroupAlphabet::from_pairs({{"x"}, {"y"}});
    data.transversal = {"x"};
    data.table[{"", "x"}] = {{}, "x"};
    data.table[{"", "y"}] = {gw({"G"}), "x"};
    data.table[{"x", "x"}] = {{}, ""};
    data.table[{"x", "y"}] = {gw({"g"}), ""};
    auto ext = oracle_finite_extension(z, data);
    VirtuallyFreeData dinf = fixtures::dinf_data();
    std::vector<GWord> frontier{{}};
    for (std::size_t len = 0; len <= 8; ++len) {
        std::vector<GWord> next;
        for (const auto& w : frontier) {
            CHECK(ext->is_trivial(w) == vf_is_trivial(dinf, w));
            if (len < 8)
                for (const Letter& l : {Letter("x"), Letter("y")}) {
                    GWord e = w;
                    e.push_back(l);
                    next.push_back(std::move(e));
                }
        }
        frontier = std::move(next);
    }
}

TEST_CASE("rewritten oracle") {
    auto f2 = std::make_shared<FreeGroupOracle>(fixtures::f2_alphabet());
    GroupAlphabet wide = GroupAlphabet::from_pairs({{"a", "A"}, {"b", "B"}, {"c", "C"}});
    std::map<Letter, GWord> words{{"a", gw({"a"})}, {"A", gw({"A"})}, {"b", gw({"b"})},
                                  {"B", gw({"B"})}, {"c", gw({"a", "b"})},
                                  {"C", gw({"B", "A"})}};
    auto oracle = oracle_rewritten(f2, wide, words);
    CHECK(oracle->is_trivial(gw({"c", "B", "A"})));
    CHECK_FALSE(oracle->is_trivial(gw({"c"})));
    CHECK(oracle->is_trivial(gw({"c", "C"})));
    check_oracle_invariants(*oracle);
}

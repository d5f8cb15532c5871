#include <doctest.h>

#include "cspda/constructions.hpp"
#include "cspda/equiv.hpp"
#include "cspda/validate.hpp"
#include "fixtures.hpp"

using namespace cspda;
using fixtures::gw;

namespace {

// Exhaustive agreement between a machine and its oracle up to word length n.
void expect_equiv(const CspdaSpec& machine, const GroupOracle& oracle, std::size_t n,
                  std::size_t init_bound) {
    EquivReport report = equiv_check(machine, oracle, n, init_bound);
    CHECK(report.machine_only == 0);
    CHECK(report.oracle_only == 0);
    if (!report.clean()) {
        for (const auto& m : report.mismatches)
            MESSAGE("mismatch: '", machine.render_word(m.word), "' machine=", m.machine_verdict,
                    " oracle=", m.oracle_verdict);
    }
}

}  // namespace

TEST_CASE("free group machine validates and matches free reduction") {
    CspdaSpec m = build_virtually_free(fixtures::f2_data(), "F2");
    CHECK(validate_spec(m).ok());
    FreeGroupOracle oracle(fixtures::f2_alphabet());
    expect_equiv(m, oracle, 5, 7);
}

TEST_CASE("free group machine spot checks") {
    CspdaSpec m = build_virtually_free(fixtures::f2_data(), "F2");
    Word aA = m.parse_word("aA");
    Word ab = m.parse_word("ab");
    CHECK_FALSE(accepts(m, aA, 10).accepted);
    AcceptResult res = accepts(m, ab, 10);
    REQUIRE(res.accepted);
    CHECK(*res.witness_init == Word{m.pad, m.pad});

    SUBCASE("trace semantics from the worked examples") {
        auto inits = enumerate_init_words(m, 3);
        // check of height 2: reading 'a' pushes and lands accepting
        Configuration c2 = entry_configuration(m, {m.pad, m.pad}, inits[0].entry);
        RunOutcome after_a = run_word(m, c2, m.parse_word("a"));
        REQUIRE(after_a.reached());
        CHECK(after_a.config.height() == 1);
        CHECK(m.kind(after_a.config.state) == StateKind::AcceptingReading);
        // free cancellation returns to the entry configuration
        RunOutcome after_aA = run_word(m, c2, aA);
        REQUIRE(after_aA.reached());
        CHECK(after_aA.config.height() == 0);
        CHECK(m.kind(after_aA.config.state) == StateKind::Entry);
        // height 1 cannot hold ab
        Configuration c1 = entry_configuration(m, {m.pad}, inits[0].entry);
        CHECK(run_word(m, c1, ab).failed());
        // height 3: ab reaches an accepting configuration of height 2
        Configuration c3 = entry_configuration(m, {m.pad, m.pad, m.pad}, inits[0].entry);
        RunOutcome after_ab = run_word(m, c3, ab);
        REQUIRE(after_ab.reached());
        CHECK(after_ab.config.height() == 2);
        CHECK(m.kind(after_ab.config.state) == StateKind::AcceptingReading);
    }
}

TEST_CASE("trivial group machine accepts nothing") {
    VirtuallyFreeData trivial;
    CspdaSpec m = build_virtually_free(trivial, "trivial");
    CHECK(validate_spec(m).ok());
    CHECK_FALSE(accepts(m, {}, 4).accepted);
}

TEST_CASE("dihedral machine from transversal data") {
    VirtuallyFreeData dinf = fixtures::dinf_data();
    CspdaSpec m = build_virtually_free(dinf, "Dinf");
    CHECK(validate_spec(m).ok());
    VirtuallyFreeOracle oracle(dinf);
    expect_equiv(m, oracle, 6, 8);
}

TEST_CASE("grigorchuk machine validates and matches the transducer oracle") {
    CspdaSpec m = build_bounded_automata(fixtures::grig_alphabet(), fixtures::grig_generators(),
                                         2, "grigorchuk");
    CHECK(validate_spec(m).ok());
    AutomatonGroupOracle oracle(fixtures::grig_alphabet(), fixtures::grig_standard_machines());

    SUBCASE("relations are rejected at every init") {
        for (const char* rel : {"aa", "bb", "cc", "dd", "bcd"})
            CHECK_FALSE(accepts(m, m.parse_word(rel), 6).accepted);
    }
    SUBCASE("ab is accepted with a depth-1 witness") {
        AcceptResult res = accepts(m, m.parse_word("ab"), 6);
        REQUIRE(res.accepted);
        CHECK(res.witness_init->size() <= 2);  // witness letter plus one pad
    }
    SUBCASE("exhaustive agreement at n=4") {
        expect_equiv(m, oracle, 4, 6);
    }
}

TEST_CASE("an identity-only generating set yields the empty language") {
    GroupAlphabet one = GroupAlphabet::from_pairs({{"e"}});
    std::map<Letter, GeneratorData> gens;
    gens["e"] = FinitaryAutomorphism::identity(2);
    CspdaSpec m = build_bounded_automata(one, gens, 2, "trivial_action");
    CHECK(validate_spec(m).ok());
    for (const auto& w : enumerate_input_words(m, 6))
        CHECK_FALSE(accepts(m, w, 5).accepted);
}

TEST_CASE("reading a trivial word leaves the configuration fixed") {
    CspdaSpec m = build_virtually_free(fixtures::f2_data(), "F2");
    auto inits = enumerate_init_words(m, 5);
    Configuration entry = entry_configuration(m, inits[4].word, inits[4].entry);
    RunOutcome cu = run_word(m, entry, m.parse_word("a"));
    RunOutcome cuv = run_word(m, entry, m.parse_word("abB"));
    REQUIRE(cu.reached());
    REQUIRE(cuv.reached());
    CHECK(cu.config.same_as(cuv.config));
    CHECK(cu.config.push == Word{*m.symbols.find("a")});
}

TEST_CASE("higman-thompson machine validates and matches the tree-pair oracle") {
    CspdaSpec m = build_higman_thompson(2, 1, fixtures::ht_alphabet(),
                                        fixtures::ht_generators(), "V");
    CHECK(validate_spec(m).ok());
    HigmanThompsonOracle oracle(fixtures::ht_alphabet(), fixtures::ht_generators());

    SUBCASE("the swap relation is rejected everywhere") {
        CHECK_FALSE(accepts(m, m.parse_word("ss"), 8).accepted);
        CHECK_FALSE(accepts(m, m.parse_word("xX"), 8).accepted);
    }
    SUBCASE("the swap is accepted from a short witness") {
        AcceptResult res = accepts(m, m.parse_word("s"), 8);
        REQUIRE(res.accepted);
        CHECK(res.witness_init->size() <= 3);
    }
    SUBCASE("words needing a deeper witness fail on short inits but accept on longer ones") {
        Word w = m.parse_word("xx");  // moves prefixes at depth 3+
        auto inits = enumerate_init_words(m, 10);
        bool some_failed = false, some_accepted = false;
        for (const auto& init : inits) {
            Configuration entry = entry_configuration(m, init.word, init.entry);
            RunOutcome out = run_word(m, entry, w);
            if (out.failed())
                some_failed = true;
            if (out.reached() && m.kind(out.config.state) == StateKind::AcceptingReading)
                some_accepted = true;
        }
        CHECK(some_failed);
        CHECK(some_accepted);
    }
    SUBCASE("exhaustive agreement at n=4") {
        expect_equiv(m, oracle, 4, 8);
    }
}

TEST_CASE("rewritten generators replay through the base machine") {
    CspdaSpec f2 = build_virtually_free(fixtures::f2_data(), "F2");
    GroupAlphabet wide = GroupAlphabet::from_pairs({{"a", "A"}, {"b", "B"}, {"c", "C"}});
    std::map<Letter, GWord> words{{"a", gw({"a"})}, {"A", gw({"A"})}, {"b", gw({"b"})},
                                  {"B", gw({"B"})}, {"c", gw({"a", "b"})},
                                  {"C", gw({"B", "A"})}};
    CspdaSpec m = rewrite_generators(f2, wide, words, "F2c");
    CHECK(validate_spec(m).ok());
    CHECK_FALSE(accepts(m, m.parse_word("cBA"), 10).accepted);
    CHECK(accepts(m, m.parse_word("c"), 10).accepted);
    auto oracle = oracle_rewritten(std::make_shared<FreeGroupOracle>(fixtures::f2_alphabet()),
                                   wide, words);
    expect_equiv(m, *oracle, 4, 10);

    SUBCASE("identity replacement map leaves the language unchanged") {
        std::map<Letter, GWord> id_words{
            {"a", gw({"a"})}, {"A", gw({"A"})}, {"b", gw({"b"})}, {"B", gw({"B"})}};
        CspdaSpec same = rewrite_generators(f2, fixtures::f2_alphabet(), id_words, "F2id");
        FreeGroupOracle base(fixtures::f2_alphabet());
        expect_equiv(same, base, 4, 6);
    }
    SUBCASE("a one-generator subgroup behaves as a free group of rank one") {
        GroupAlphabet sub = GroupAlphabet::from_pairs({{"w", "W"}});
        std::map<Letter, GWord> sub_words{{"w", gw({"a"})}, {"W", gw({"A"})}};
        CspdaSpec m1 = rewrite_generators(f2, sub, sub_words, "F2sub");
        FreeGroupOracle rank1(sub);
        expect_equiv(m1, rank1, 5, 7);
    }
    SUBCASE("empty replacement words are rejected") {
        std::map<Letter, GWord> bad{{"a", {}}, {"A", {}}, {"b", gw({"b"})}, {"B", gw({"B"})}};
        CHECK_THROWS_AS(rewrite_generators(f2, fixtures::f2_alphabet(), bad, "bad"),
                        EmptyReplacementError);
    }
}

TEST_CASE("finite extension rebuilds the dihedral group over Z") {
    CspdaSpec z = build_virtually_free(
        VirtuallyFreeData::free_group(fixtures::z_alphabet("g", "G")), "Z");
    FiniteExtensionData data;
    data.alphabet = GroupAlphabet::from_pairs({{"x"}, {"y"}});
    data.transversal = {"x"};
    data.table[{"", "x"}] = {{}, "x"};
    data.table[{"", "y"}] = {gw({"G"}), "x"};
    data.table[{"x", "x"}] = {{}, ""};
    data.table[{"x", "y"}] = {gw({"g"}), ""};
    CspdaSpec m = extend_finite(z, data, "Dinf_ext");
    CHECK(validate_spec(m).ok());

    VirtuallyFreeOracle oracle(fixtures::dinf_data());
    expect_equiv(m, oracle, 6, 8);

    SUBCASE("a single coset letter is accepted at every adequate init") {
        AcceptResult res = accepts(m, m.parse_word("x"), 4);
        REQUIRE(res.accepted);
    }
    SUBCASE("trivial extension leaves the language unchanged") {
        CspdaSpec f2 = build_virtually_free(fixtures::f2_data(), "F2");
        FiniteExtensionData none;
        none.alphabet = fixtures::f2_alphabet();
        for (const auto& l : none.alphabet.letters)
            none.table[{"", l}] = {gw({l.c_str()}), ""};
        CspdaSpec same = extend_finite(f2, none, "F2triv");
        FreeGroupOracle base(fixtures::f2_alphabet());
        expect_equiv(same, base, 4, 6);
    }
}

TEST_CASE("direct product ignores the other factor's letters") {
    CspdaSpec f2 = build_virtually_free(fixtures::f2_data(), "F2");
    CspdaSpec z2 = build_virtually_free(fixtures::z2_data("z"), "Z2");
    CspdaSpec m = product_direct(f2, z2, "F2xZ2");
    CHECK(validate_spec(m).ok());

    CHECK_FALSE(accepts(m, m.parse_word("zz"), 8).accepted);
    CHECK(accepts(m, m.parse_word("az"), 8).accepted);
    CHECK(accepts(m, m.parse_word("z"), 8).accepted);
    CHECK_FALSE(accepts(m, m.parse_word("azAz"), 8).accepted);

    auto oracle = oracle_direct_product(std::make_shared<FreeGroupOracle>(fixtures::f2_alphabet()),
                                        std::make_shared<VirtuallyFreeOracle>(fixtures::z2_data("z")));
    expect_equiv(m, *oracle, 4, 7);

    SUBCASE("alphabet collisions are rejected") {
        CHECK_THROWS_AS(product_direct(f2, f2, "bad"), AlphabetCollisionError);
    }
}

TEST_CASE("free product of two involutions is the infinite dihedral group") {
    CspdaSpec zx = build_virtually_free(fixtures::z2_data("x"), "Z2x");
    CspdaSpec zy = build_virtually_free(fixtures::z2_data("y"), "Z2y");
    CspdaSpec m = product_free(zx, zy, "Z2*Z2");
    CHECK(validate_spec(m).ok());

    auto oracle = oracle_free_product(
        std::make_shared<VirtuallyFreeOracle>(fixtures::z2_data("x")),
        std::make_shared<VirtuallyFreeOracle>(fixtures::z2_data("y")));

    CHECK_FALSE(accepts(m, m.parse_word("xx"), 10).accepted);
    CHECK(accepts(m, m.parse_word("xy"), 10).accepted);
    CHECK(accepts(m, m.parse_word("x"), 10).accepted);
    CHECK_FALSE(accepts(m, m.parse_word("xyyx"), 12).accepted);

    expect_equiv(m, *oracle, 5, 12);
}

TEST_CASE("wreath product machine builds the lamplighter group") {
    CspdaSpec z2 = build_virtually_free(fixtures::z2_data("h"), "Z2");
    VirtuallyFreeData z_top = VirtuallyFreeData::free_group(fixtures::z_alphabet("t", "T"));
    CspdaSpec m = product_wreath(z2, z_top, "lamplighter");
    CHECK(validate_spec(m).ok());

    OraclePtr oracle = fixtures::lamplighter_oracle();

    CHECK_FALSE(accepts(m, m.parse_word("tT"), 10).accepted);
    CHECK_FALSE(accepts(m, m.parse_word("hh"), 10).accepted);
    CHECK(accepts(m, m.parse_word("t"), 10).accepted);
    CHECK(accepts(m, m.parse_word("h"), 10).accepted);
    {
        Word w = m.parse_word("h t h T");
        CHECK(accepts(m, w, 12).accepted);
    }

    expect_equiv(m, *oracle, 4, 12);
}

TEST_CASE("wreath product with a transversal in the top group") {
    CspdaSpec z2 = build_virtually_free(fixtures::z2_data("h"), "Z2");
    VirtuallyFreeData dinf = fixtures::dinf_data();
    CspdaSpec m = product_wreath(z2, dinf, "Z2wrDinf");
    CHECK(validate_spec(m).ok());
    auto oracle =
        oracle_wreath(std::make_shared<VirtuallyFreeOracle>(fixtures::z2_data("h")), dinf);
    expect_equiv(m, *oracle, 4, 14);
}

TEST_CASE("free product of factors of different shapes") {
    CspdaSpec f2 = build_virtually_free(fixtures::f2_data(), "F2");
    CspdaSpec z2 = build_virtually_free(fixtures::z2_data("y"), "Z2y");
    CspdaSpec m = product_free(f2, z2, "F2*Z2");
    CHECK(validate_spec(m).ok());
    auto oracle =
        oracle_free_product(std::make_shared<FreeGroupOracle>(fixtures::f2_alphabet()),
                            std::make_shared<VirtuallyFreeOracle>(fixtures::z2_data("y")));
    expect_equiv(m, *oracle, 4, 12);
    // the commutator of letters from different factors never dies
    CHECK(accepts(m, m.parse_word("ayAy"), 12).accepted);
    CHECK_FALSE(accepts(m, m.parse_word("aA"), 12).accepted);
}

namespace {

// Appending one pad to the padding region of a reaching init must preserve
// the final state.
void check_padding_monotonicity(const CspdaSpec& m, std::size_t word_len,
                                std::size_t init_bound) {
    auto inits = enumerate_init_words(m, init_bound);
    std::size_t reached = 0;
    for (const auto& w : enumerate_input_words(m, word_len)) {
        for (const auto& init : inits) {
            Configuration entry = entry_configuration(m, init.word, init.entry);
            RunOutcome out = run_word(m, entry, w);
            if (!out.reached())
                continue;
            ++reached;
            Word longer = init.word;
            longer.push_back(m.pad);
            Configuration entry2 = entry_configuration(m, longer, init.entry);
            RunOutcome out2 = run_word(m, entry2, w);
            REQUIRE(out2.reached());
            CHECK(out2.config.state == out.config.state);
        }
    }
    CHECK(reached > 0);
}

}  // namespace

TEST_CASE("padding monotonicity for the normal-form machine") {
    CspdaSpec m = build_virtually_free(fixtures::f2_data(), "F2");
    check_padding_monotonicity(m, 3, 6);
}

TEST_CASE("padding monotonicity for the witness-string machines") {
    CspdaSpec grig = build_bounded_automata(fixtures::grig_alphabet(),
                                            fixtures::grig_generators(), 2, "grig");
    check_padding_monotonicity(grig, 3, 5);
    CspdaSpec v = build_higman_thompson(2, 1, fixtures::ht_alphabet(),
                                        fixtures::ht_generators(), "V");
    check_padding_monotonicity(v, 3, 6);
}

TEST_CASE("padding monotonicity for the wreath machine") {
    CspdaSpec z2 = build_virtually_free(fixtures::z2_data("h"), "Z2");
    CspdaSpec m = product_wreath(
        z2, VirtuallyFreeData::free_group(fixtures::z_alphabet("t", "T")), "lamp");
    check_padding_monotonicity(m, 3, 10);
}

TEST_CASE("free product substacks always end in an entry symbol") {
    CspdaSpec zx = build_virtually_free(fixtures::z2_data("x"), "Z2x");
    CspdaSpec zy = build_virtually_free(fixtures::z2_data("y"), "Z2y");
    CspdaSpec m = product_free(zx, zy, "Z2*Z2");
    CHECK(enumerate_init_words(m, 0).empty());
    auto words = enumerate_init_words(m, 1);
    REQUIRE(!words.empty());  // a single bare entry symbol is a valid substack
    for (const auto& iw : words)
        CHECK(iw.word.size() == 1);
}

TEST_CASE("a zero init bound starves acceptance but never soundness") {
    CspdaSpec m = build_virtually_free(fixtures::f2_data(), "F2");
    FreeGroupOracle oracle(fixtures::f2_alphabet());
    EquivReport r = equiv_check(m, oracle, 4, 0);
    CHECK(r.machine_only == 0);
    CHECK(r.oracle_only > 0);  // the empty check stack fails on any push
}

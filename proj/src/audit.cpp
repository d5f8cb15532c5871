#include "cspda/audit.hpp"

#include <algorithm>
#include <random>

namespace cspda {

GWord to_oracle_word(const CspdaSpec& spec, const Word& w) {
    GWord out;
    out.reserve(w.size());
    for (Symbol s : w)
        out.push_back(spec.symbols.name(s));
    return out;
}

Word to_machine_word(const CspdaSpec& spec, const GWord& w) {
    Word out;
    out.reserve(w.size());
    for (const auto& a : w) {
        auto s = spec.symbols.find(a);
        if (!s || !spec.in_input_alphabet(*s))
            throw UnknownSymbolError("letter '" + a + "' is not a machine input letter");
        out.push_back(*s);
    }
    return out;
}

void check_alphabets_match(const CspdaSpec& spec, const GroupOracle& oracle) {
    if (spec.input_alphabet.size() != oracle.alphabet().letters.size())
        throw SpecError("machine and oracle alphabets differ in size");
    for (Symbol s : spec.input_alphabet) {
        const std::string& name = spec.symbols.name(s);
        if (!oracle.alphabet().contains(name))
            throw SpecError("machine letter '" + name + "' missing from the oracle alphabet");
        Symbol inv = spec.inverse_of.at(s);
        if (oracle.alphabet().inverse_of(name) != spec.symbols.name(inv))
            throw SpecError("machine and oracle disagree on the inverse of '" + name + "'");
    }
}

Property3Report audit_property3(const CspdaSpec& spec, const GroupOracle& oracle,
                                const Property3Config& config) {
    check_alphabets_match(spec, oracle);
    Property3Report report;

    std::vector<Word> words = enumerate_input_words(spec, config.max_len);
    std::vector<Word> trivial;
    for (const auto& w : words)
        if (oracle.is_trivial(to_oracle_word(spec, w)))
            trivial.push_back(w);
    std::vector<InitWord> inits = enumerate_init_words(spec, config.init_bound);
    if (inits.empty() || trivial.empty())
        return report;

    std::mt19937_64 rng(config.seed);
    auto pick = [&rng](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

    auto raise_divergence = [&](const RunOutcome& out, const Word& w, const InitWord& init) {
        if (out.diverged())
            throw DivergenceError("machine '" + spec.name + "' diverged on '" +
                                  spec.render_word(w) + "' from init '" +
                                  spec.render_word(init.word) + "': " + out.note);
    };

    for (std::size_t i = 0; i < config.samples; ++i) {
        const InitWord& init = inits[pick(inits.size())];
        const Word& u = words[pick(words.size())];
        const Word& v = trivial[pick(trivial.size())];

        Configuration entry = entry_configuration(spec, init.word, init.entry);
        RunOutcome cu = run_word(spec, entry, u);
        raise_divergence(cu, u, init);

        Word uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        RunOutcome cuv = run_word(spec, entry, uv);
        raise_divergence(cuv, uv, init);
        ++report.samples_run;

        if (cuv.failed()) {
            ++report.failures_allowed;
        } else if (cuv.reached()) {
            if (!cu.reached()) {
                report.counterexamples.push_back(
                    {init.word, u, v, "C^u failed but C^{uv} reached"});
            } else if (!cuv.config.same_as(cu.config)) {
                report.counterexamples.push_back(
                    {init.word, u, v, "C^{uv} reached but differs from C^u"});
            }
        }

        // Corollary: a reached C^u different from the entry configuration
        // certifies that u is nontrivial.
        if (cu.reached() && !cu.config.same_as(entry) &&
            oracle.is_trivial(to_oracle_word(spec, u))) {
            report.counterexamples.push_back(
                {init.word, u, {}, "C^u differs from C although u is trivial"});
        }
    }
    return report;
}

std::optional<InitWord> find_robust_entry(const CspdaSpec& spec, const GroupOracle& oracle,
                                          const Word& w, std::size_t n, std::size_t init_bound) {
    if (oracle.is_trivial(to_oracle_word(spec, w)))
        throw SpecError("find_robust_entry requires a word in the co-word problem");
    std::vector<Word> probes = enumerate_input_words(spec, n);
    for (const auto& init : enumerate_init_words(spec, init_bound)) {
        Configuration entry = entry_configuration(spec, init.word, init.entry);
        RunOutcome cw = run_word(spec, entry, w);
        if (cw.diverged())
            throw DivergenceError("diverged probing '" + spec.render_word(w) + "': " + cw.note);
        if (!cw.reached() || spec.kind(cw.config.state) != StateKind::AcceptingReading)
            continue;
        bool robust = true;
        for (const auto& v : probes) {
            RunOutcome cv = run_word(spec, entry, v);
            if (cv.diverged())
                throw DivergenceError("diverged probing '" + spec.render_word(v) +
                                      "': " + cv.note);
            if (cv.failed()) {
                robust = false;
                break;
            }
        }
        if (robust)
            return init;
    }
    return std::nullopt;
}

}  // namespace cspda

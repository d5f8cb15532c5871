#include "cspda/groupspec.hpp"

#include <algorithm>
#include <deque>

#include <json.hpp>

#include "cspda/validate.hpp"

namespace cspda {

namespace {

using json = nlohmann::ordered_json;

GroupAlphabet alphabet_from_json(const json& j) {
    std::vector<std::vector<Letter>> pairs;
    for (const auto& p : j) {
        std::vector<Letter> pair;
        for (const auto& l : p)
            pair.push_back(l.get<std::string>());
        pairs.push_back(pair);
    }
    return GroupAlphabet::from_pairs(pairs);
}

GWord word_from_json(const json& j) {
    GWord w;
    for (const auto& l : j)
        w.push_back(l.get<std::string>());
    return w;
}

VirtuallyFreeData vf_data_from_json(const json& j) {
    VirtuallyFreeData data;
    data.alphabet = alphabet_from_json(j.at("alphabet"));
    data.basis = alphabet_from_json(j.at("basis"));
    if (j.contains("transversal"))
        for (const auto& t : j.at("transversal"))
            data.transversal.push_back(t.get<std::string>());
    for (const auto& r : j.at("rewrite")) {
        VirtuallyFreeData::Rewrite rw;
        rw.word = word_from_json(r.at("word"));
        rw.coset = r.value("to_coset", "");
        data.rewrite[{r.value("coset", ""), r.at("letter").get<std::string>()}] = rw;
    }
    data.validate();
    return data;
}

TreeWord tree_word_from_json(const json& j) {
    TreeWord w;
    for (const auto& x : j)
        w.push_back(static_cast<TreeLetter>(x.get<unsigned>()));
    return w;
}

FinitaryAutomorphism finitary_from_json(const json& j, std::size_t degree) {
    FinitaryAutomorphism phi;
    phi.degree = degree;
    phi.depth = j.at("depth").get<std::size_t>();
    if (j.contains("perms")) {
        for (const auto& p : j.at("perms")) {
            std::vector<TreeLetter> perm;
            for (const auto& x : p.at("perm"))
                perm.push_back(static_cast<TreeLetter>(x.get<unsigned>()));
            phi.perms[tree_word_from_json(p.at("node"))] = perm;
        }
    }
    phi.check();
    return phi;
}

GeneratorData generator_from_json(const json& j, std::size_t degree) {
    std::string type = j.at("type").get<std::string>();
    if (type == "finitary")
        return finitary_from_json(j, degree);
    if (type != "directed")
        throw SchemaError("generator type must be 'finitary' or 'directed'");
    DirectedAutomorphism delta;
    delta.degree = degree;
    delta.p = tree_word_from_json(j.value("p", json::array()));
    delta.q = tree_word_from_json(j.at("q"));
    delta.p_image = tree_word_from_json(j.value("p_image", json::array()));
    delta.q_image = tree_word_from_json(j.at("q_image"));
    auto rows_from = [&](const json& rows) {
        std::vector<std::map<TreeLetter, DirectedAutomorphism::OffSpine>> out;
        for (const auto& row : rows) {
            std::map<TreeLetter, DirectedAutomorphism::OffSpine> m;
            for (const auto& e : row) {
                DirectedAutomorphism::OffSpine off;
                off.image = static_cast<TreeLetter>(e.at("image").get<unsigned>());
                off.tail = finitary_from_json(e.at("tail"), degree);
                m[static_cast<TreeLetter>(e.at("letter").get<unsigned>())] = off;
            }
            out.push_back(std::move(m));
        }
        return out;
    };
    delta.off_p = rows_from(j.value("off_p", json::array()));
    delta.off_q = rows_from(j.at("off_q"));
    delta.check();
    return delta;
}

HTElement ht_element_from_json(const json& j, std::size_t n, std::size_t r) {
    HTElement e;
    e.n = n;
    e.r = r;
    for (const auto& p : j.at("pairs"))
        e.pairs.push_back({tree_word_from_json(p.at("from")), tree_word_from_json(p.at("to"))});
    e.validate();
    return e;
}

struct BoundHint {
    enum class Mode { Linear, Calibrate } mode = Mode::Linear;
    std::size_t a = 1, b = 2;  // bound(n) = a*n + b
};

BoundHint hint_from_json(const json& j, BoundHint fallback) {
    if (!j.contains("init_bound_hint"))
        return fallback;
    const auto& h = j.at("init_bound_hint");
    BoundHint out;
    std::string mode = h.value("mode", "linear");
    if (mode == "calibrate") {
        out.mode = BoundHint::Mode::Calibrate;
    } else if (mode == "linear") {
        out.mode = BoundHint::Mode::Linear;
        out.a = h.value("a", 1u);
        out.b = h.value("b", 2u);
    } else {
        throw SchemaError("unknown init_bound_hint mode '" + mode + "'");
    }
    return out;
}

// Minimal witness length for a nontrivial transducer: the shortest input it
// does not fix, found as a shortest path to a state with non-identity output.
std::size_t minimal_witness_depth(const MealyMachine& m) {
    std::vector<int> dist(m.num_states(), -1);
    std::deque<std::uint32_t> work{m.initial};
    dist[m.initial] = 0;
    while (!work.empty()) {
        std::uint32_t s = work.front();
        work.pop_front();
        for (std::size_t x = 0; x < m.degree; ++x) {
            auto [next, y] = m.table[s][x];
            if (y != x)
                return static_cast<std::size_t>(dist[s]) + 1;
            if (dist[next] < 0) {
                dist[next] = dist[s] + 1;
                work.push_back(next);
            }
        }
    }
    throw SpecError("minimal_witness_depth called on an identity machine");
}

LoadedGroup load_from_json(const json& j);

LoadedGroup load_free(const json& j) {
    GroupAlphabet alphabet = alphabet_from_json(j.at("alphabet"));
    VirtuallyFreeData data = VirtuallyFreeData::free_group(alphabet);
    LoadedGroup out;
    out.name = j.value("name", "free");
    out.machine = build_virtually_free(data, out.name);
    out.oracle = std::make_shared<FreeGroupOracle>(alphabet);
    return out;
}

LoadedGroup load_virtually_free(const json& j) {
    VirtuallyFreeData data = vf_data_from_json(j);
    LoadedGroup out;
    out.name = j.value("name", "virtually_free");
    out.machine = build_virtually_free(data, out.name);
    out.oracle = std::make_shared<VirtuallyFreeOracle>(data);
    return out;
}

LoadedGroup load_bounded(const json& j) {
    std::size_t degree = j.at("degree").get<std::size_t>();
    GroupAlphabet alphabet = alphabet_from_json(j.at("alphabet"));
    std::map<Letter, GeneratorData> generators;
    for (const auto& [letter, g] : j.at("generators").items())
        generators.emplace(letter, generator_from_json(g, degree));
    for (const auto& a : alphabet.letters)
        if (!generators.count(a))
            throw SchemaError("no generator data for letter '" + a + "'");

    std::map<Letter, MealyMachine> machines;
    for (const auto& [letter, g] : generators)
        machines.emplace(letter, generator_to_mealy(g));
    // inverse pairs must compose to the identity
    for (const auto& a : alphabet.letters) {
        MealyMachine prod = mealy_product({machines.at(a), machines.at(alphabet.inverse_of(a))});
        if (!mealy_is_identity(prod))
            throw SpecError("generators for '" + a + "' and its inverse do not cancel");
    }

    LoadedGroup out;
    out.name = j.value("name", "bounded_automata");
    out.machine = build_bounded_automata(alphabet, generators, degree, out.name);
    auto oracle = std::make_shared<AutomatonGroupOracle>(alphabet, machines);
    out.oracle = oracle;
    out.init_bound_for = [oracle, alphabet](std::size_t n) {
        std::size_t depth = 1;
        std::deque<GWord> frontier{{}};
        for (std::size_t len = 1; len <= n; ++len) {
            std::deque<GWord> next;
            for (const auto& w : frontier) {
                for (const auto& a : alphabet.letters) {
                    GWord ext = w;
                    ext.push_back(a);
                    if (!oracle->is_trivial(ext)) {
                        std::vector<MealyMachine> ms;
                        for (const auto& x : ext)
                            ms.push_back(oracle->machine_for(x));
                        depth = std::max(depth, minimal_witness_depth(mealy_product(ms)));
                    }
                    next.push_back(std::move(ext));
                }
            }
            frontier = std::move(next);
        }
        return depth + 1;  // one padding cell above the witness string
    };
    return out;
}

LoadedGroup load_higman_thompson(const json& j) {
    std::size_t n = j.at("n").get<std::size_t>();
    std::size_t r = j.at("r").get<std::size_t>();
    GroupAlphabet alphabet = alphabet_from_json(j.at("alphabet"));
    std::map<Letter, HTElement> generators;
    for (const auto& [letter, g] : j.at("generators").items())
        generators.emplace(letter, ht_element_from_json(g, n, r));
    // inverse letters may be omitted; they are the structural inverses
    for (const auto& a : alphabet.letters) {
        if (generators.count(a))
            continue;
        const Letter& inv = alphabet.inverse_of(a);
        auto it = generators.find(inv);
        if (it == generators.end())
            throw SchemaError("no tree-pair data for '" + a + "' or its inverse");
        generators.emplace(a, it->second.inverse());
    }
    for (const auto& a : alphabet.letters) {
        if (!ht_compose(generators.at(a), generators.at(alphabet.inverse_of(a))).is_identity())
            throw SpecError("tree pairs for '" + a + "' and its inverse do not cancel");
    }

    LoadedGroup out;
    out.name = j.value("name", "higman_thompson");
    out.machine = build_higman_thompson(n, r, alphabet, generators, out.name);
    out.oracle = std::make_shared<HigmanThompsonOracle>(alphabet, generators);
    out.init_bound_for = [generators, alphabet, n, r](std::size_t len) {
        // For each nontrivial word, find the cheapest witness string by
        // simulating the prefix-replacement run; the bound covers the witness
        // length and every intermediate image length.
        std::size_t bound = 2;
        std::vector<GWord> words{{}};
        std::size_t begin = 0;
        for (std::size_t l = 1; l <= len; ++l) {
            std::size_t end = words.size();
            for (std::size_t i = begin; i < end; ++i)
                for (const auto& a : alphabet.letters) {
                    GWord w = words[i];
                    w.push_back(a);
                    words.push_back(std::move(w));
                }
            begin = end;
        }
        auto trace_needs = [&](const GWord& w, const HTWord& x) -> std::optional<std::size_t> {
            HTWord y = x;
            std::size_t maxh = x.size();
            for (const auto& a : w) {
                const HTElement& g = generators.at(a);
                bool found = false;
                for (const auto& [b, c] : g.pairs) {
                    if (b.size() <= y.size() && std::equal(b.begin(), b.end(), y.begin())) {
                        HTWord img = c;
                        img.insert(img.end(), y.begin() + b.size(), y.end());
                        y = std::move(img);
                        found = true;
                        break;
                    }
                }
                if (!found)
                    return std::nullopt;  // x too short
                maxh = std::max(maxh, y.size());
            }
            if (y == x)
                return std::nullopt;  // not a witness
            return maxh;
        };
        for (const auto& w : words) {
            if (w.empty() || ht_is_trivial(generators, w))
                continue;
            std::optional<std::size_t> best;
            for (std::size_t xl = 1; xl <= 14 && !best; ++xl) {
                std::vector<HTWord> xs;
                for (std::size_t root = 0; root < r; ++root)
                    xs.push_back({static_cast<std::uint8_t>(root)});
                for (std::size_t d = 1; d < xl; ++d) {
                    std::vector<HTWord> grown;
                    for (const auto& x : xs)
                        for (std::size_t c = 0; c < n; ++c) {
                            HTWord g = x;
                            g.push_back(static_cast<std::uint8_t>(c));
                            grown.push_back(std::move(g));
                        }
                    xs = std::move(grown);
                }
                for (const auto& x : xs)
                    if (auto need = trace_needs(w, x))
                        best = best ? std::min(*best, *need) : *need;
            }
            if (!best)
                throw SpecError("no witness string of length <= 14 found during calibration");
            bound = std::max(bound, *best);
        }
        return bound;
    };
    return out;
}

LoadedGroup load_from_json(const json& j) {
    if (!j.contains("kind"))
        throw SchemaError("group spec is missing the 'kind' field");
    std::string kind = j.at("kind").get<std::string>();

    LoadedGroup out;
    BoundHint hint{BoundHint::Mode::Linear, 1, 2};
    if (kind == "free") {
        out = load_free(j);
    } else if (kind == "virtually_free") {
        out = load_virtually_free(j);
    } else if (kind == "bounded_automata") {
        out = load_bounded(j);
        hint.mode = BoundHint::Mode::Calibrate;
    } else if (kind == "higman_thompson") {
        out = load_higman_thompson(j);
        hint.mode = BoundHint::Mode::Calibrate;
    } else if (kind == "direct_product") {
        LoadedGroup h = load_from_json(j.at("h"));
        LoadedGroup k = load_from_json(j.at("k"));
        out.name = j.value("name", "direct_product");
        out.machine = product_direct(h.machine, k.machine, out.name);
        out.oracle = oracle_direct_product(h.oracle, k.oracle);
        auto hb = h.init_bound_for, kb = k.init_bound_for;
        out.init_bound_for = [hb, kb](std::size_t n) {
            return std::max(hb(n), kb(n)) + 1;  // one factor tag symbol
        };
    } else if (kind == "finite_extension") {
        LoadedGroup h = load_from_json(j.at("h"));
        FiniteExtensionData data;
        data.alphabet = alphabet_from_json(j.at("alphabet"));
        if (j.contains("transversal"))
            for (const auto& t : j.at("transversal"))
                data.transversal.push_back(t.get<std::string>());
        std::size_t longest = 1;
        for (const auto& r : j.at("table")) {
            FiniteExtensionData::Entry e;
            e.h_word = word_from_json(r.at("word"));
            e.coset = r.value("to_coset", "");
            longest = std::max(longest, e.h_word.size());
            data.table[{r.value("coset", ""), r.at("letter").get<std::string>()}] = e;
        }
        out.name = j.value("name", "finite_extension");
        out.machine = extend_finite(h.machine, data, out.name);
        out.oracle = oracle_finite_extension(h.oracle, data);
        auto hb = h.init_bound_for;
        out.init_bound_for = [hb, longest](std::size_t n) { return hb(longest * n); };
    } else if (kind == "free_product") {
        LoadedGroup h = load_from_json(j.at("h"));
        LoadedGroup k = load_from_json(j.at("k"));
        out.name = j.value("name", "free_product");
        out.machine = product_free(h.machine, k.machine, out.name);
        out.oracle = oracle_free_product(h.oracle, k.oracle);
        hint = {BoundHint::Mode::Linear, 2, 2};
    } else if (kind == "wreath") {
        LoadedGroup h = load_from_json(j.at("h"));
        VirtuallyFreeData k_data = vf_data_from_json(j.at("k"));
        out.name = j.value("name", "wreath");
        out.machine = product_wreath(h.machine, k_data, out.name);
        out.oracle = oracle_wreath(h.oracle, k_data);
        hint = {BoundHint::Mode::Linear, 3, 4};
    } else if (kind == "rewritten") {
        LoadedGroup base = load_from_json(j.at("base"));
        GroupAlphabet alphabet = alphabet_from_json(j.at("alphabet"));
        std::map<Letter, GWord> words;
        std::size_t longest = 1;
        for (const auto& [letter, w] : j.at("words").items()) {
            words[letter] = word_from_json(w);
            longest = std::max(longest, words[letter].size());
        }
        out.name = j.value("name", "rewritten");
        out.machine = rewrite_generators(base.machine, alphabet, words, out.name);
        out.oracle = oracle_rewritten(base.oracle, alphabet, words);
        auto bb = base.init_bound_for;
        out.init_bound_for = [bb, longest](std::size_t n) { return bb(longest * n); };
    } else {
        throw SchemaError("unknown group kind '" + kind + "'");
    }

    out.machine.name = out.name;
    if (j.contains("init_bound_hint")) {
        hint = hint_from_json(j, hint);
        if (hint.mode == BoundHint::Mode::Calibrate) {
            if (!out.init_bound_for)
                throw SchemaError("this family has no calibration pre-pass");
        } else {
            std::size_t a = hint.a, b = hint.b;
            out.init_bound_for = [a, b](std::size_t n) { return a * n + b; };
        }
    } else if (!out.init_bound_for) {
        std::size_t a = hint.a, b = hint.b;
        out.init_bound_for = [a, b](std::size_t n) { return a * n + b; };
    }

    ValidationReport report = validate_spec(out.machine);
    if (!report.ok())
        throw SpecError("constructed machine for '" + out.name +
                        "' fails validation: " + report.summary());
    return out;
}

}  // namespace

LoadedGroup load_group_spec_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw SchemaError(std::string("group spec is not valid JSON: ") + e.what());
    }
    try {
        return load_from_json(j);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("group spec schema error: ") + e.what());
    }
}

LoadedGroup load_group_spec(const std::string& path) {
    return load_group_spec_text(read_file(path));
}

}  // namespace cspda

// cspda-lab: build check-stack pushdown automata from group descriptions and
// test them against brute-force word-problem oracles.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cspda/equiv.hpp"
#include "cspda/groupspec.hpp"
#include "cspda/validate.hpp"

namespace {

using namespace cspda;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

unsigned default_jobs() {
    if (const char* env = std::getenv("CSPDA_LAB_JOBS"))
        return static_cast<unsigned>(std::max(1, std::atoi(env)));
    return 1;
}

bool looks_like_machine_file(const std::string& text) {
    // both formats are JSON objects; group specs carry a top-level "kind" tag
    try {
        auto j = nlohmann::json::parse(text);
        return j.is_object() && j.contains("input_alphabet") && !j.contains("kind");
    } catch (const std::exception&) {
        return false;
    }
}

void apply_symbol_order(CspdaSpec& spec, const std::string& order) {
    std::vector<Symbol> reordered;
    std::string tok;
    std::istringstream in(order);
    while (std::getline(in, tok, ',')) {
        auto s = spec.symbols.find(tok);
        if (!s || !spec.in_check_alphabet(*s))
            throw SpecError("--symbol-order names '" + tok + "', not a check symbol");
        reordered.push_back(*s);
    }
    for (Symbol s : spec.check_alphabet)
        if (std::find(reordered.begin(), reordered.end(), s) == reordered.end())
            reordered.push_back(s);
    spec.check_alphabet = reordered;
}

int cmd_build(const std::string& spec_path, const std::string& out_path) {
    LoadedGroup group = load_group_spec(spec_path);
    save_machine(group.machine, out_path);
    std::cout << "wrote " << out_path << " (" << group.machine.states.size() << " states, "
              << group.machine.transitions.size() << " transitions)\n";
    return kExitOk;
}

int cmd_check(const std::string& path, const std::string& word_text, int init_bound,
              const std::string& symbol_order) {
    std::string text = read_file(path);
    if (looks_like_machine_file(text)) {
        CspdaSpec machine = machine_from_json(text);
        machine.name = path;
        if (!symbol_order.empty())
            apply_symbol_order(machine, symbol_order);
        Word w = machine.parse_word(word_text);
        std::size_t bound = init_bound >= 0 ? static_cast<std::size_t>(init_bound)
                                            : w.size() + 2;
        AcceptResult res = accepts(machine, w, bound);
        if (res.accepted)
            std::cout << "ACCEPT (witness init: " << machine.render_word(*res.witness_init)
                      << ")\n";
        else
            std::cout << "REJECT\n";
        return kExitOk;
    }
    LoadedGroup group = load_group_spec_text(text);
    if (!symbol_order.empty())
        apply_symbol_order(group.machine, symbol_order);
    Word w = group.machine.parse_word(word_text);
    std::size_t bound = init_bound >= 0 ? static_cast<std::size_t>(init_bound)
                                        : group.init_bound_for(w.size());
    AcceptResult res = accepts(group.machine, w, bound);
    bool trivial = group.oracle->is_trivial(to_oracle_word(group.machine, w));
    if (res.accepted)
        std::cout << "ACCEPT (nontrivial; witness init: "
                  << group.machine.render_word(*res.witness_init) << ")\n";
    else
        std::cout << "REJECT (" << (trivial ? "trivial" : "no accepting init within bound")
                  << ")\n";
    if (res.accepted && trivial) {
        std::cout << "soundness breach: oracle says trivial but the machine accepted\n";
        return kExitMismatch;
    }
    return kExitOk;
}

int cmd_equiv(const std::string& spec_path, std::size_t n, int init_bound, unsigned jobs,
              const std::string& report_path, const std::string& csv_path,
              const std::string& symbol_order) {
    LoadedGroup group = load_group_spec(spec_path);
    if (!symbol_order.empty())
        apply_symbol_order(group.machine, symbol_order);
    std::size_t bound =
        init_bound >= 0 ? static_cast<std::size_t>(init_bound) : group.init_bound_for(n);
    EquivReport report = equiv_check(group.machine, *group.oracle, n, bound, jobs);
    std::cout << "group " << group.name << ": n=" << n << " init_bound=" << bound
              << " agree=" << report.agree << " machine_only=" << report.machine_only
              << " oracle_only=" << report.oracle_only << " ("
              << report.duration_seconds << "s)\n";
    for (const auto& m : report.mismatches) {
        std::cout << "  mismatch '" << group.machine.render_word(m.word)
                  << "': machine=" << m.machine_verdict << " oracle=" << m.oracle_verdict;
        if (!m.machine_verdict && m.oracle_verdict)
            std::cout << "  (initBound possibly insufficient)";
        std::cout << "\n";
    }
    if (!report_path.empty())
        write_file(report_path, equiv_report_json(group.machine, report));
    if (!csv_path.empty())
        write_file(csv_path, equiv_report_csv(group.machine, report));
    return report.clean() ? kExitOk : kExitMismatch;
}

int cmd_audit(const std::string& spec_path, const AuditConfig& config_in, int init_bound,
              const std::string& report_path) {
    LoadedGroup group = load_group_spec(spec_path);
    AuditConfig config = config_in;
    if (init_bound >= 0)
        config.init_bound = static_cast<std::size_t>(init_bound);
    else
        config.init_bound = group.init_bound_for(config.max_len);
    AuditAllReport report = audit_all(group.machine, *group.oracle, config);
    std::cout << "validator:       " << (report.validator_ok ? "ok" : "FAIL") << "\n"
              << "property (3):    " << (report.property3_ok ? "ok" : "FAIL") << " ("
              << report.property3_samples << " samples)\n"
              << "divergence scan: " << (report.divergence_ok ? "ok" : "FAIL") << " ("
              << report.runs_scanned << " runs)\n"
              << "robust entries:  " << (report.sweep_ok ? "ok" : "FAIL") << " ("
              << report.sweep_words << " words)\n"
              << (report.certified() ? "certified special at tested sizes\n"
                                     : "NOT certified\n");
    if (!report.validator_ok)
        std::cout << report.validator_summary << "\n";
    if (!report_path.empty())
        write_file(report_path, audit_report_json(group.machine, report));
    return report.certified() ? kExitOk : kExitMismatch;
}

int cmd_trace(const std::string& spec_path, const std::string& init_text,
              const std::string& word_text) {
    LoadedGroup group = load_group_spec(spec_path);
    const CspdaSpec& m = group.machine;
    Word init = m.parse_word(init_text);
    auto inits = enumerate_init_words(m, init.size());
    std::optional<StateId> entry;
    for (const auto& iw : inits)
        if (iw.word == init)
            entry = iw.entry;
    if (!entry)
        throw SpecError("'" + init_text + "' is not in the init language");
    Word w = m.parse_word(word_text);
    for (const auto& e : trace_run(m, init, *entry, w)) {
        std::cout << e.step << "\t" << m.state(e.state).name << "\th=" << e.height << "\t("
                  << (e.obs.push_top == kBottom ? "BOT" : m.symbols.name(e.obs.push_top)) << ","
                  << (e.obs.check_cell == kBottom ? "BOT" : m.symbols.name(e.obs.check_cell))
                  << ")\t" << e.action;
        if (!e.annotation.empty())
            std::cout << "\t# " << e.annotation;
        std::cout << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"check-stack pushdown automata workbench"};
    app.require_subcommand(1);

    std::string spec_path, out_path, word_text, init_text, report_path, csv_path, symbol_order;
    std::size_t n = 6;
    int init_bound = -1;
    unsigned jobs = default_jobs();
    AuditConfig audit_config;

    auto* build = app.add_subcommand("build", "build a machine file from a group spec");
    build->add_option("spec", spec_path, "group spec JSON")->required();
    build->add_option("-o,--output", out_path, "machine file to write")->required();

    auto* check = app.add_subcommand("check", "run one word against a machine or group spec");
    check->add_option("input", spec_path, "machine file or group spec")->required();
    check->add_option("-w,--word", word_text, "input word")->required();
    check->add_option("--init-bound", init_bound, "stage-1 word length bound");
    check->add_option("--symbol-order", symbol_order, "comma list pinning enumeration order");

    auto* equiv = app.add_subcommand("equiv", "compare the machine with its oracle");
    equiv->add_option("spec", spec_path, "group spec JSON")->required();
    equiv->add_option("-n,--length", n, "word length bound")->required();
    equiv->add_option("--init-bound", init_bound, "stage-1 word length bound");
    equiv->add_option("--jobs", jobs, "worker threads (env CSPDA_LAB_JOBS)");
    equiv->add_option("--report", report_path, "write JSON report here");
    equiv->add_option("--csv", csv_path, "write CSV report here");
    equiv->add_option("--symbol-order", symbol_order, "comma list pinning enumeration order");

    auto* audit = app.add_subcommand("audit", "validator + special-property audits");
    audit->add_option("spec", spec_path, "group spec JSON")->required();
    audit->add_option("--samples", audit_config.samples, "property-3 sample count");
    audit->add_option("--seed", audit_config.seed, "RNG seed");
    audit->add_option("--max-len", audit_config.max_len, "u/v length bound");
    audit->add_option("--init-bound", init_bound, "stage-1 word length bound");
    audit->add_option("--scan-len", audit_config.scan_len, "divergence scan word length");
    audit->add_option("--sweep-len", audit_config.sweep_len, "robust-entry sweep word length");
    audit->add_option("--sweep-radius", audit_config.sweep_radius, "non-failure radius");
    audit->add_option("--report", report_path, "write JSON report here");

    auto* trace = app.add_subcommand("trace", "event log of one run");
    trace->add_option("spec", spec_path, "group spec JSON")->required();
    trace->add_option("--init", init_text, "check-stack word, bottom to top")->required();
    trace->add_option("-w,--word", word_text, "input word")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_name() == "CallForHelp" ? kExitOk : kExitUsage;
    }

    try {
        if (build->parsed())
            return cmd_build(spec_path, out_path);
        if (check->parsed())
            return cmd_check(spec_path, word_text, init_bound, symbol_order);
        if (equiv->parsed())
            return cmd_equiv(spec_path, n, init_bound, jobs, report_path, csv_path, symbol_order);
        if (audit->parsed())
            return cmd_audit(spec_path, audit_config, init_bound, report_path);
        if (trace->parsed())
            return cmd_trace(spec_path, init_text, word_text);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMismatch;
    }
    return kExitUsage;
}

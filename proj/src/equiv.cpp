#include "cspda/equiv.hpp"

#include <chrono>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cspda/validate.hpp"

namespace cspda {

EquivReport equiv_check(const CspdaSpec& spec, const GroupOracle& oracle, std::size_t n,
                        std::size_t init_bound, unsigned jobs) {
    check_alphabets_match(spec, oracle);
    auto started = std::chrono::steady_clock::now();

    EquivReport report;
    report.group_name = spec.name;
    report.word_length = n;
    report.init_bound = init_bound;

    std::vector<Word> words = enumerate_input_words(spec, n);
    std::vector<InitWord> inits = enumerate_init_words(spec, init_bound);

    struct Verdict {
        bool machine;
        bool oracle;
        std::optional<Word> witness;
    };
    std::vector<Verdict> verdicts(words.size());

    auto evaluate = [&](std::size_t begin, std::size_t end, std::exception_ptr& error) {
        try {
            for (std::size_t i = begin; i < end; ++i) {
                AcceptResult acc = accepts(spec, words[i], inits);
                bool nontrivial = !oracle.is_trivial(to_oracle_word(spec, words[i]));
                verdicts[i] = {acc.accepted, nontrivial, acc.witness_init};
            }
        } catch (...) {
            error = std::current_exception();
        }
    };

    if (jobs <= 1) {
        std::exception_ptr error;
        evaluate(0, words.size(), error);
        if (error)
            std::rethrow_exception(error);
    } else {
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(jobs);
        std::size_t chunk = (words.size() + jobs - 1) / jobs;
        for (unsigned t = 0; t < jobs; ++t) {
            std::size_t begin = std::min<std::size_t>(t * chunk, words.size());
            std::size_t end = std::min<std::size_t>(begin + chunk, words.size());
            workers.emplace_back(evaluate, begin, end, std::ref(errors[t]));
        }
        for (auto& w : workers)
            w.join();
        for (const auto& e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    for (std::size_t i = 0; i < words.size(); ++i) {
        const Verdict& v = verdicts[i];
        if (v.machine == v.oracle) {
            ++report.agree;
        } else {
            if (v.machine)
                ++report.machine_only;
            else
                ++report.oracle_only;
            report.mismatches.push_back({words[i], v.machine, v.oracle, v.witness});
        }
    }

    report.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

std::string equiv_report_json(const CspdaSpec& spec, const EquivReport& report) {
    nlohmann::ordered_json j;
    j["report_version"] = 1;
    j["kind"] = "equiv";
    j["group"] = report.group_name;
    j["word_length"] = report.word_length;
    j["init_bound"] = report.init_bound;
    j["counts"] = {{"agree", report.agree},
                   {"machine_only", report.machine_only},
                   {"oracle_only", report.oracle_only}};
    auto mismatches = nlohmann::ordered_json::array();
    for (const auto& m : report.mismatches) {
        nlohmann::ordered_json e;
        e["word"] = spec.render_word(m.word);
        e["machine"] = m.machine_verdict;
        e["oracle"] = m.oracle_verdict;
        if (m.witness_init)
            e["witness_init"] = spec.render_word(*m.witness_init);
        if (!m.machine_verdict && m.oracle_verdict)
            e["note"] = "initBound possibly insufficient";
        mismatches.push_back(e);
    }
    j["mismatches"] = mismatches;
    return j.dump(2) + "\n";
}

std::string equiv_report_csv(const CspdaSpec& spec, const EquivReport& report) {
    std::ostringstream out;
    out << "group,word_length,init_bound,agree,machine_only,oracle_only\n";
    out << report.group_name << ',' << report.word_length << ',' << report.init_bound << ','
        << report.agree << ',' << report.machine_only << ',' << report.oracle_only << "\n";
    out << "word,machine,oracle,witness_init\n";
    for (const auto& m : report.mismatches) {
        out << spec.render_word(m.word) << ',' << (m.machine_verdict ? 1 : 0) << ','
            << (m.oracle_verdict ? 1 : 0) << ','
            << (m.witness_init ? spec.render_word(*m.witness_init) : "") << "\n";
    }
    return out.str();
}

AuditAllReport audit_all(const CspdaSpec& spec, const GroupOracle& oracle,
                         const AuditConfig& config) {
    AuditAllReport report;
    report.config = config;

    ValidationReport vr = validate_spec(spec);
    report.validator_ok = vr.ok();
    report.validator_summary = vr.summary();

    Property3Config p3;
    p3.samples = config.samples;
    p3.max_len = config.max_len;
    p3.init_bound = config.init_bound;
    p3.seed = config.seed;
    Property3Report p3r = audit_property3(spec, oracle, p3);
    report.property3_ok = p3r.ok();
    report.property3_samples = p3r.samples_run;
    report.property3_counterexamples = p3r.counterexamples.size();

    // Divergence scan: every (init, word) pair at the scan sizes must end in
    // Reached or Failed.
    report.divergence_ok = true;
    std::vector<InitWord> inits = enumerate_init_words(spec, config.init_bound);
    for (const auto& w : enumerate_input_words(spec, config.scan_len)) {
        for (const auto& init : inits) {
            Configuration entry = entry_configuration(spec, init.word, init.entry);
            RunOutcome out = run_word(spec, entry, w);
            ++report.runs_scanned;
            if (out.diverged())
                report.divergence_ok = false;
        }
    }

    report.sweep_ok = true;
    for (const auto& w : enumerate_input_words(spec, config.sweep_len)) {
        if (oracle.is_trivial(to_oracle_word(spec, w)))
            continue;
        ++report.sweep_words;
        if (!find_robust_entry(spec, oracle, w, config.sweep_radius, config.init_bound)) {
            ++report.sweep_unresolved;
            report.sweep_ok = false;
        }
    }
    return report;
}

std::string audit_report_json(const CspdaSpec& spec, const AuditAllReport& report) {
    nlohmann::ordered_json j;
    j["report_version"] = 1;
    j["kind"] = "audit";
    j["group"] = spec.name;
    j["parameters"] = {{"samples", report.config.samples},
                       {"max_len", report.config.max_len},
                       {"init_bound", report.config.init_bound},
                       {"seed", report.config.seed},
                       {"scan_len", report.config.scan_len},
                       {"sweep_len", report.config.sweep_len},
                       {"sweep_radius", report.config.sweep_radius}};
    j["validator"] = {{"ok", report.validator_ok}, {"summary", report.validator_summary}};
    j["property3"] = {{"ok", report.property3_ok},
                      {"samples", report.property3_samples},
                      {"counterexamples", report.property3_counterexamples}};
    j["divergence_scan"] = {{"ok", report.divergence_ok}, {"runs", report.runs_scanned}};
    j["robust_entry_sweep"] = {{"ok", report.sweep_ok},
                               {"words", report.sweep_words},
                               {"unresolved", report.sweep_unresolved}};
    j["certified_special_at_tested_sizes"] = report.certified();
    return j.dump(2) + "\n";
}

}  // namespace cspda

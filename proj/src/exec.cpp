#include "cspda/exec.hpp"

#include <sstream>
#include <unordered_set>

namespace cspda {

namespace {

// Configurations observed late in a non-reading run, for exact repetition
// detection.  Recording starts only after kRecordFrom steps: honest machines
// settle quickly, and any infinite run keeps revisiting its cycle, so late
// recording still catches every divergence before the budget does.
constexpr std::size_t kRecordFrom = 64;

std::string fingerprint(const CspdaSpec& spec, const Configuration& cfg, std::size_t step) {
    std::ostringstream out;
    out << "repeated configuration at step " << step << ": state '"
        << spec.state(cfg.state).name << "', height " << cfg.height();
    return out.str();
}

void emit(const Tracer& tracer, const CspdaSpec& spec, std::size_t step,
          const Configuration& cfg, const std::string& action) {
    if (!tracer)
        return;
    std::string note;
    auto it = spec.state_roles.find(spec.state(cfg.state).name);
    if (it != spec.state_roles.end())
        note = it->second;
    tracer({step, cfg.state, action, cfg.observe(), cfg.height(), note});
}

std::string op_text(const CspdaSpec& spec, const StackOp& op) {
    switch (op.kind) {
        case OpKind::Push: return "push " + spec.symbols.name(op.symbol);
        case OpKind::Pop: return "pop";
        case OpKind::Stay: return "stay";
    }
    return "?";
}

}  // namespace

std::size_t default_step_budget(const CspdaSpec& spec, std::size_t check_len) {
    return spec.states.size() * (check_len + 2) * (spec.push_alphabet.size() + 1);
}

Configuration entry_configuration(const CspdaSpec& spec, const Word& init_word, StateId entry) {
    (void)spec;
    Configuration cfg;
    cfg.state = entry;
    cfg.check = std::make_shared<const Word>(init_word);
    return cfg;
}

RunOutcome advance_to_reading(const CspdaSpec& spec, Configuration cfg, std::size_t budget,
                              const Tracer& tracer) {
    struct Snapshot {
        StateId state;
        Word push;
        bool operator==(const Snapshot& o) const { return state == o.state && push == o.push; }
    };
    struct SnapshotHash {
        std::size_t operator()(const Snapshot& s) const {
            std::size_t h = s.state;
            for (Symbol x : s.push)
                h = h * 1000003u + x;
            return h;
        }
    };
    std::unordered_set<Snapshot, SnapshotHash> seen;

    std::size_t step = 0;
    for (;;) {
        StateKind k = spec.kind(cfg.state);
        if (is_reading(k)) {
            emit(tracer, spec, step, cfg, "reach " + to_string(k));
            return {RunStatus::Reached, std::move(cfg), ""};
        }
        if (k == StateKind::Fail) {
            emit(tracer, spec, step, cfg, "fail state");
            return {RunStatus::Failed, {}, "fail state"};
        }
        if (k == StateKind::Initial) {
            emit(tracer, spec, step, cfg, "stuck in initial state");
            return {RunStatus::Failed, {}, "initial state has no stage-2 moves"};
        }
        if (step >= budget) {
            emit(tracer, spec, step, cfg, "budget exhausted");
            return {RunStatus::Diverged, {}, "step budget exhausted (" +
                                                 std::to_string(budget) + " steps)"};
        }
        if (step >= kRecordFrom && !seen.insert({cfg.state, cfg.push}).second) {
            emit(tracer, spec, step, cfg, "diverged");
            return {RunStatus::Diverged, {}, fingerprint(spec, cfg, step)};
        }

        const StepAction* act = spec.transitions.lookup(cfg.state, std::nullopt, cfg.observe());
        if (!act) {
            emit(tracer, spec, step, cfg, "no move");
            return {RunStatus::Failed, {}, "stuck: no applicable non-reading move"};
        }
        switch (act->op.kind) {
            case OpKind::Push:
                if (cfg.height() == cfg.check->size()) {
                    emit(tracer, spec, step, cfg, "push above check top");
                    return {RunStatus::Failed, {}, "push above the check-stack top"};
                }
                cfg.push.push_back(act->op.symbol);
                break;
            case OpKind::Pop:
                if (cfg.push.empty()) {
                    emit(tracer, spec, step, cfg, "pop on empty pushdown");
                    return {RunStatus::Failed, {}, "pop on empty pushdown"};
                }
                cfg.push.pop_back();
                break;
            case OpKind::Stay:
                break;
        }
        emit(tracer, spec, step, cfg, op_text(spec, act->op));
        cfg.state = act->next;
        ++step;
    }
}

RunOutcome read_letter(const CspdaSpec& spec, Configuration cfg, Symbol letter,
                       const Tracer& tracer) {
    if (!is_reading(spec.kind(cfg.state)))
        throw std::logic_error("read_letter from a non-reading state");
    const StepAction* act = spec.transitions.lookup(cfg.state, letter, cfg.observe());
    if (!act) {
        emit(tracer, spec, 0, cfg, "no reading move for " + spec.symbols.name(letter));
        return {RunStatus::Failed, {}, "no reading move"};
    }
    emit(tracer, spec, 0, cfg,
         "read " + spec.symbols.name(letter) + ", " + op_text(spec, act->op));
    switch (act->op.kind) {
        case OpKind::Push:
            if (cfg.height() == cfg.check->size())
                return {RunStatus::Failed, {}, "push above the check-stack top"};
            cfg.push.push_back(act->op.symbol);
            break;
        case OpKind::Pop:
            if (cfg.push.empty())
                return {RunStatus::Failed, {}, "pop on empty pushdown"};
            cfg.push.pop_back();
            break;
        case OpKind::Stay:
            break;
    }
    cfg.state = act->next;
    std::size_t budget = default_step_budget(spec, cfg.check->size());
    return advance_to_reading(spec, std::move(cfg), budget, tracer);
}

RunOutcome run_word(const CspdaSpec& spec, Configuration entry, const Word& w,
                    const Tracer& tracer) {
    RunOutcome out{RunStatus::Reached, std::move(entry), ""};
    for (Symbol a : w) {
        out = read_letter(spec, std::move(out.config), a, tracer);
        if (!out.reached())
            return out;
    }
    return out;
}

AcceptResult accepts(const CspdaSpec& spec, const Word& w, std::size_t init_bound) {
    return accepts(spec, w, enumerate_init_words(spec, init_bound));
}

AcceptResult accepts(const CspdaSpec& spec, const Word& w, const std::vector<InitWord>& inits) {
    for (const auto& init : inits) {
        Configuration entry = entry_configuration(spec, init.word, init.entry);
        RunOutcome out = run_word(spec, std::move(entry), w);
        if (out.diverged())
            throw DivergenceError("machine '" + spec.name + "' diverged on word '" +
                                  spec.render_word(w) + "' from init '" +
                                  spec.render_word(init.word) + "': " + out.note);
        if (out.reached() && spec.kind(out.config.state) == StateKind::AcceptingReading)
            return {true, init.word};
    }
    return {false, std::nullopt};
}

std::vector<TraceEvent> trace_run(const CspdaSpec& spec, const Word& init_word, StateId entry,
                                  const Word& w) {
    std::vector<TraceEvent> events;
    std::size_t counter = 0;
    Tracer tracer = [&](const TraceEvent& e) {
        TraceEvent copy = e;
        copy.step = counter++;
        events.push_back(copy);
    };
    Configuration cfg = entry_configuration(spec, init_word, entry);
    RunOutcome out = run_word(spec, std::move(cfg), w, tracer);
    TraceEvent final{};
    final.step = counter;
    final.state = out.reached() ? out.config.state : spec.fail_state;
    final.height = out.reached() ? out.config.height() : 0;
    switch (out.status) {
        case RunStatus::Reached:
            final.action = "outcome: reached " + to_string(spec.kind(out.config.state));
            break;
        case RunStatus::Failed:
            final.action = "outcome: failed (" + out.note + ")";
            break;
        case RunStatus::Diverged:
            final.action = "outcome: diverged (" + out.note + ")";
            break;
    }
    events.push_back(final);
    return events;
}

}  // namespace cspda

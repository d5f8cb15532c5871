#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cspda/enumerate.hpp"
#include "cspda/machine.hpp"

namespace cspda {

enum class RunStatus : std::uint8_t { Reached, Failed, Diverged };

struct RunOutcome {
    RunStatus status;
    Configuration config;   // meaningful for Reached
    std::string note;       // divergence fingerprint / failure reason

    bool reached() const { return status == RunStatus::Reached; }
    bool failed() const { return status == RunStatus::Failed; }
    bool diverged() const { return status == RunStatus::Diverged; }
};

struct TraceEvent {
    std::size_t step;
    StateId state;
    std::string action;      // "read a", "push x", "pop", "stay", terminal notes
    Observation obs;
    std::size_t height;
    std::string annotation;  // builder role metadata, if any
};

using Tracer = std::function<void(const TraceEvent&)>;

// Budget backstop for non-reading runs; exact repetition detection makes this
// a safety net only.
std::size_t default_step_budget(const CspdaSpec& spec, std::size_t check_len);

Configuration entry_configuration(const CspdaSpec& spec, const Word& init_word, StateId entry);

// Runs non-reading moves until a reading state, the fail state, a missing
// transition, a push at the check-stack top (all Failed), or an exact
// configuration repetition / budget exhaustion (Diverged).
RunOutcome advance_to_reading(const CspdaSpec& spec, Configuration cfg, std::size_t budget,
                              const Tracer& tracer = nullptr);

RunOutcome read_letter(const CspdaSpec& spec, Configuration cfg, Symbol letter,
                       const Tracer& tracer = nullptr);

// C^w: the first reading configuration after consuming all of w.
RunOutcome run_word(const CspdaSpec& spec, Configuration entry, const Word& w,
                    const Tracer& tracer = nullptr);

struct AcceptResult {
    bool accepted = false;
    std::optional<Word> witness_init;
};

// Existentially quantifies over stage-1 initialisations of length <= init_bound.
// Failed runs are skipped; a Diverged run raises DivergenceError.
AcceptResult accepts(const CspdaSpec& spec, const Word& w, std::size_t init_bound);
AcceptResult accepts(const CspdaSpec& spec, const Word& w, const std::vector<InitWord>& inits);

std::vector<TraceEvent> trace_run(const CspdaSpec& spec, const Word& init_word, StateId entry,
                                  const Word& w);

}  // namespace cspda

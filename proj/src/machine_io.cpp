#include "cspda/machine_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cspda {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string sym(const CspdaSpec& spec, Symbol s) {
    return s == kBottom ? "BOT" : spec.symbols.name(s);
}

ordered_json op_to_json(const CspdaSpec& spec, const StackOp& op) {
    switch (op.kind) {
        case OpKind::Push: return ordered_json{{"push", spec.symbols.name(op.symbol)}};
        case OpKind::Pop: return "pop";
        case OpKind::Stay: return "stay";
    }
    return "stay";
}

StateKind kind_from_string(const std::string& k) {
    if (k == "initial")
        return StateKind::Initial;
    if (k == "fail")
        return StateKind::Fail;
    if (k == "entry")
        return StateKind::Entry;
    if (k == "accepting")
        return StateKind::AcceptingReading;
    if (k == "non_reading")
        return StateKind::NonReading;
    throw SchemaError("unknown state kind '" + k + "'");
}

}  // namespace

std::string machine_to_json(const CspdaSpec& spec) {
    ordered_json j;
    ordered_json ia_letters = ordered_json::array();
    ordered_json inv = ordered_json::object();
    for (Symbol a : spec.input_alphabet) {
        ia_letters.push_back(spec.symbols.name(a));
        inv[spec.symbols.name(a)] = spec.symbols.name(spec.inverse_of.at(a));
    }
    j["input_alphabet"] = ordered_json{{"symbols", ia_letters}, {"inverse_of", inv}};

    ordered_json check = ordered_json::array(), push = ordered_json::array();
    for (Symbol s : spec.check_alphabet)
        check.push_back(spec.symbols.name(s));
    for (Symbol s : spec.push_alphabet)
        push.push_back(spec.symbols.name(s));
    j["check_alphabet"] = check;
    j["push_alphabet"] = push;
    j["pad_symbol"] = spec.symbols.name(spec.pad);

    ordered_json states = ordered_json::array();
    for (const auto& st : spec.states)
        states.push_back(ordered_json{{"id", st.name}, {"kind", to_string(st.kind)}});
    j["states"] = states;

    ordered_json transitions = ordered_json::array();
    for (const auto& e : spec.transitions.entries()) {
        ordered_json t;
        t["from"] = spec.state(e.from).name;
        t["input"] = e.input ? ordered_json(spec.symbols.name(*e.input)) : ordered_json(nullptr);
        t["push_top"] = sym(spec, e.obs.push_top);
        t["check_cell"] = sym(spec, e.obs.check_cell);
        t["to"] = spec.state(e.action.next).name;
        t["op"] = op_to_json(spec, e.action.op);
        transitions.push_back(t);
    }
    j["transitions"] = transitions;

    ordered_json ia;
    ia["states"] = spec.init_automaton.num_states;
    ia["start"] = spec.init_automaton.start;
    ordered_json edges = ordered_json::array();
    for (const auto& e : spec.init_automaton.edges)
        edges.push_back(ordered_json{
            {"from", e.from}, {"symbol", spec.symbols.name(e.symbol)}, {"to", e.to}});
    ia["edges"] = edges;
    ordered_json accepting = ordered_json::array();
    for (const auto& [st, entry] : spec.init_automaton.accepting)
        accepting.push_back(ordered_json{{"state", st}, {"entry_state", spec.state(entry).name}});
    ia["accepting"] = accepting;
    j["init_automaton"] = ia;

    return j.dump(2) + "\n";
}

CspdaSpec machine_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw SchemaError(std::string("machine file is not valid JSON: ") + e.what());
    }
    CspdaSpec spec;
    try {
        for (const auto& s : j.at("input_alphabet").at("symbols"))
            spec.input_alphabet.push_back(spec.symbols.intern(s.get<std::string>()));
        for (const auto& [a, b] : j.at("input_alphabet").at("inverse_of").items())
            spec.inverse_of[spec.symbols.intern(a)] = spec.symbols.intern(b.get<std::string>());
        for (const auto& s : j.at("check_alphabet"))
            spec.check_alphabet.push_back(spec.symbols.intern(s.get<std::string>()));
        for (const auto& s : j.at("push_alphabet"))
            spec.push_alphabet.push_back(spec.symbols.intern(s.get<std::string>()));
        spec.pad = spec.symbols.intern(j.at("pad_symbol").get<std::string>());

        for (const auto& st : j.at("states"))
            spec.states.push_back(
                {st.at("id").get<std::string>(), kind_from_string(st.at("kind"))});
        for (StateId i = 0; i < spec.states.size(); ++i) {
            if (spec.states[i].kind == StateKind::Initial)
                spec.initial_state = i;
            if (spec.states[i].kind == StateKind::Fail)
                spec.fail_state = i;
        }
        auto state_id = [&](const std::string& name) -> StateId {
            auto id = spec.find_state(name);
            if (!id)
                throw SchemaError("transition references unknown state '" + name + "'");
            return *id;
        };
        auto symbol_or_bot = [&](const ordered_json& v) -> Symbol {
            auto s = v.get<std::string>();
            if (s == "BOT")
                return kBottom;
            auto id = spec.symbols.find(s);
            if (!id)
                throw SchemaError("unknown symbol '" + s + "' in transition");
            return *id;
        };
        for (const auto& t : j.at("transitions")) {
            TransitionEntry e;
            e.from = state_id(t.at("from"));
            if (t.at("input").is_null())
                e.input = std::nullopt;
            else
                e.input = symbol_or_bot(t.at("input"));
            e.obs.push_top = symbol_or_bot(t.at("push_top"));
            e.obs.check_cell = symbol_or_bot(t.at("check_cell"));
            e.action.next = state_id(t.at("to"));
            const auto& op = t.at("op");
            if (op.is_string() && op == "pop")
                e.action.op = StackOp::pop();
            else if (op.is_string() && op == "stay")
                e.action.op = StackOp::stay();
            else if (op.is_object() && op.contains("push"))
                e.action.op = StackOp::push(symbol_or_bot(op.at("push")));
            else
                throw SchemaError("bad stack op in transition");
            spec.transitions.add(e);
        }

        const auto& ia = j.at("init_automaton");
        spec.init_automaton.num_states = ia.at("states").get<std::uint32_t>();
        spec.init_automaton.start = ia.at("start").get<std::uint32_t>();
        for (const auto& e : ia.at("edges"))
            spec.init_automaton.edges.push_back({e.at("from").get<std::uint32_t>(),
                                                 symbol_or_bot(e.at("symbol")),
                                                 e.at("to").get<std::uint32_t>()});
        for (const auto& acc : ia.at("accepting"))
            spec.init_automaton.accepting.push_back(
                {acc.at("state").get<std::uint32_t>(),
                 state_id(acc.at("entry_state").get<std::string>())});
    } catch (const ordered_json::exception& e) {
        throw SchemaError(std::string("machine file schema error: ") + e.what());
    }
    return spec;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SchemaError("cannot open '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw SchemaError("cannot write '" + path + "'");
    out << content;
}

void save_machine(const CspdaSpec& spec, const std::string& path) {
    write_file(path, machine_to_json(spec));
    ordered_json meta;
    meta["name"] = spec.name;
    ordered_json roles = ordered_json::object();
    std::vector<std::string> keys;
    for (const auto& [k, v] : spec.state_roles)
        keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (const auto& k : keys)
        roles[k] = spec.state_roles.at(k);
    meta["state_roles"] = roles;
    write_file(path + ".meta.json", meta.dump(2) + "\n");
}

CspdaSpec load_machine(const std::string& path) {
    CspdaSpec spec = machine_from_json(read_file(path));
    try {
        ordered_json meta = ordered_json::parse(read_file(path + ".meta.json"));
        spec.name = meta.value("name", "");
        if (meta.contains("state_roles"))
            for (const auto& [k, v] : meta.at("state_roles").items())
                spec.state_roles[k] = v.get<std::string>();
    } catch (const SchemaError&) {
        spec.name = path;  // no sidecar
    }
    return spec;
}

}  // namespace cspda

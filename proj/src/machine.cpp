#include "cspda/machine.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

namespace cspda {

bool is_reading(StateKind k) {
    return k == StateKind::Entry || k == StateKind::AcceptingReading;
}

std::string to_string(StateKind k) {
    switch (k) {
        case StateKind::Initial: return "initial";
        case StateKind::Fail: return "fail";
        case StateKind::Entry: return "entry";
        case StateKind::AcceptingReading: return "accepting";
        case StateKind::NonReading: return "non_reading";
    }
    return "?";
}

bool CspdaSpec::in_input_alphabet(Symbol s) const {
    return std::find(input_alphabet.begin(), input_alphabet.end(), s) != input_alphabet.end();
}

bool CspdaSpec::in_check_alphabet(Symbol s) const {
    return std::find(check_alphabet.begin(), check_alphabet.end(), s) != check_alphabet.end();
}

bool CspdaSpec::in_push_alphabet(Symbol s) const {
    return std::find(push_alphabet.begin(), push_alphabet.end(), s) != push_alphabet.end();
}

std::optional<StateId> CspdaSpec::find_state(const std::string& name) const {
    for (StateId i = 0; i < states.size(); ++i)
        if (states[i].name == name)
            return i;
    return std::nullopt;
}

std::string CspdaSpec::render_word(const Word& w) const {
    std::ostringstream out;
    bool multichar = false;
    for (Symbol s : w)
        if (symbols.name(s).size() > 1)
            multichar = true;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i && multichar)
            out << ' ';
        out << symbols.name(w[i]);
    }
    return out.str();
}

// Accepts either whitespace-separated symbol names or, when every referenced
// symbol is a single character, a plain run of characters like "abA".
Word CspdaSpec::parse_word(const std::string& text) const {
    Word out;
    if (text.find(' ') != std::string::npos) {
        std::istringstream in(text);
        std::string tok;
        while (in >> tok) {
            auto s = symbols.find(tok);
            if (!s)
                throw SpecError("unknown symbol '" + tok + "'");
            out.push_back(*s);
        }
        return out;
    }
    if (auto whole = symbols.find(text); whole && !text.empty()) {
        out.push_back(*whole);
        return out;
    }
    for (char c : text) {
        auto s = symbols.find(std::string(1, c));
        if (!s)
            throw SpecError(std::string("unknown symbol '") + c + "'");
        out.push_back(*s);
    }
    return out;
}

}  // namespace cspda

#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "fva/core.hpp"

namespace fva {

class ParseError : public Error {
public:
    ParseError(const std::string& where, const std::string& what)
        : Error(where + ": " + what), where_(where) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

using AnyAutomaton = std::variant<Automaton, MultiAutomaton>;

// Canonical JSON: object keys and every array are sorted, so that
// serialize(parse(serialize(a))) == serialize(a) byte for byte.
nlohmann::json to_json(const Automaton& a);
nlohmann::json to_json(const MultiAutomaton& a);
nlohmann::json label_to_json(const Label& l);

std::string serialize(const Automaton& a);
std::string serialize(const MultiAutomaton& a);

AnyAutomaton automaton_from_json(const nlohmann::json& j);
Label label_from_json(const nlohmann::json& j, const std::string& where);

/// Parses text; `source` names the input in error messages.
AnyAutomaton parse_any(const std::string& text, const std::string& source = "<input>");
Automaton parse_automaton(const std::string& text, const std::string& source = "<input>");
MultiAutomaton parse_multi(const std::string& text, const std::string& source = "<input>");

AnyAutomaton load_any(const std::string& path);
Automaton load_automaton(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// `$x` -> `x`; plain names pass through.
std::string strip_var_prefix(const std::string& s);

}  // namespace fva

#include "fva/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace fva {

std::string strip_var_prefix(const std::string& s)
{
    return !s.empty() && s.front() == '$' ? s.substr(1) : s;
}

namespace {

std::string var_token(const Variable& x) { return "$" + x.str(); }

json sorted_array(std::vector<std::string> items)
{
    std::sort(items.begin(), items.end());
    return json(items);
}

json sorted_by_dump(std::vector<json> items)
{
    std::vector<std::pair<std::string, json>> keyed;
    keyed.reserve(items.size());
    for (auto& j : items)
        keyed.emplace_back(j.dump(), std::move(j));
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    json out = json::array();
    for (auto& [_, j] : keyed)
        out.push_back(std::move(j));
    return out;
}

template <class A>
void common_to_json(const A& a, json& j)
{
    std::vector<std::string> vars;
    for (const auto& x : a.variables)
        vars.push_back(var_token(x));
    j["variables"] = sorted_array(vars);
    j["states"] = sorted_array({a.states.begin(), a.states.end()});
    j["initial"] = sorted_array({a.initial.begin(), a.initial.end()});
    j["accepting"] = sorted_array({a.accepting.begin(), a.accepting.end()});
    json refresh = json::object();
    for (const auto& [x, where] : a.refresh)
        refresh[var_token(x)] = sorted_array({where.begin(), where.end()});
    j["refresh"] = refresh;
}

// Error locations are JSON-pointer-like paths.
[[noreturn]] void fail(const std::string& where, const std::string& what)
{
    throw ParseError(where, what);
}

const json& member(const json& j, const char* key, const std::string& where)
{
    auto it = j.find(key);
    if (it == j.end())
        fail(where, std::string("missing field '") + key + "'");
    return *it;
}

std::string string_at(const json& j, const std::string& where)
{
    if (!j.is_string())
        fail(where, "expected a string");
    return j.get<std::string>();
}

std::set<std::string> string_set(const json& j, const std::string& where)
{
    if (!j.is_array())
        fail(where, "expected an array");
    std::set<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.insert(string_at(j[i], where + "/" + std::to_string(i)));
    return out;
}

template <class A>
void common_from_json(const json& j, A& a)
{
    for (const auto& v : string_set(member(j, "variables", ""), "/variables"))
        a.variables.insert(Variable(strip_var_prefix(v)));
    a.states = string_set(member(j, "states", ""), "/states");
    a.initial = string_set(member(j, "initial", ""), "/initial");
    a.accepting = string_set(member(j, "accepting", ""), "/accepting");
    if (auto it = j.find("refresh"); it != j.end()) {
        if (!it->is_object())
            fail("/refresh", "expected an object");
        for (const auto& [k, v] : it->items()) {
            auto where = string_set(v, "/refresh/" + k);
            a.refresh[Variable(strip_var_prefix(k))] = std::move(where);
        }
    }
}

}  // namespace

json label_to_json(const Label& l)
{
    json j;
    if (l.is_letter()) {
        j["kind"] = "letter";
        j["value"] = l.as_letter().str();
    } else if (l.is_var()) {
        j["kind"] = "var";
        j["value"] = var_token(l.as_var());
    } else {
        j["kind"] = "eps";
        j["value"] = kEpsilonToken;
    }
    if (l.polarity() != Polarity::none)
        j["polarity"] = polarity_symbol(l.polarity());
    return j;
}

Label label_from_json(const json& j, const std::string& where)
{
    if (!j.is_object())
        fail(where, "expected a label object");
    const std::string kind = string_at(member(j, "kind", where), where + "/kind");
    Polarity pol = Polarity::none;
    if (auto it = j.find("polarity"); it != j.end()) {
        const std::string p = string_at(*it, where + "/polarity");
        if (p == "!")
            pol = Polarity::send;
        else if (p == "?")
            pol = Polarity::recv;
        else
            fail(where + "/polarity", "expected \"!\" or \"?\"");
    }
    if (kind == "eps")
        return Label(Epsilon{}, pol);
    const std::string value = string_at(member(j, "value", where), where + "/value");
    if (kind == "letter")
        return Label(Letter(value), pol);
    if (kind == "var")
        return Label(Variable(strip_var_prefix(value)), pol);
    fail(where + "/kind", "unknown label kind '" + kind + "'");
}

json to_json(const Automaton& a)
{
    json j;
    j["type"] = type_name(a.type);
    common_to_json(a, j);
    std::vector<json> ts;
    for (const auto& t : a.transitions)
        ts.push_back(json{{"from", t.from}, {"label", label_to_json(t.label)}, {"to", t.to}});
    j["transitions"] = sorted_by_dump(std::move(ts));
    return j;
}

json to_json(const MultiAutomaton& a)
{
    json j;
    j["type"] = "nfva";
    j["arity"] = a.arity;
    common_to_json(a, j);
    std::vector<json> ts;
    for (const auto& t : a.transitions) {
        json labels = json::array();
        for (const auto& l : t.labels)
            labels.push_back(label_to_json(l));
        ts.push_back(json{{"from", t.from}, {"label", labels}, {"to", t.to}});
    }
    j["transitions"] = sorted_by_dump(std::move(ts));
    return j;
}

std::string serialize(const Automaton& a) { return to_json(a).dump(2) + "\n"; }
std::string serialize(const MultiAutomaton& a) { return to_json(a).dump(2) + "\n"; }

AnyAutomaton automaton_from_json(const json& j)
{
    if (!j.is_object())
        fail("", "expected an automaton object");
    const std::string type = string_at(member(j, "type", ""), "/type");
    const json& ts = member(j, "transitions", "");
    if (!ts.is_array())
        fail("/transitions", "expected an array");

    if (type == "nfva") {
        MultiAutomaton a;
        const json& ar = member(j, "arity", "");
        if (!ar.is_number_unsigned())
            fail("/arity", "expected a positive integer");
        a.arity = ar.get<std::size_t>();
        common_from_json(j, a);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const std::string where = "/transitions/" + std::to_string(i);
            MultiTransition t;
            t.from = string_at(member(ts[i], "from", where), where + "/from");
            t.to = string_at(member(ts[i], "to", where), where + "/to");
            const json& labels = member(ts[i], "label", where);
            if (!labels.is_array())
                fail(where + "/label", "expected an array of labels for an nfva");
            for (std::size_t k = 0; k < labels.size(); ++k)
                t.labels.push_back(label_from_json(labels[k], where + "/label/" + std::to_string(k)));
            a.transitions.insert(std::move(t));
        }
        return a;
    }

    Automaton a;
    if (type == "fva")
        a.type = AutomatonType::fva;
    else if (type == "cfva")
        a.type = AutomatonType::cfva;
    else if (type == "eps-fva")
        a.type = AutomatonType::eps_fva;
    else
        fail("/type", "unknown automaton type '" + type + "'");
    common_from_json(j, a);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const std::string where = "/transitions/" + std::to_string(i);
        Transition t;
        t.from = string_at(member(ts[i], "from", where), where + "/from");
        t.to = string_at(member(ts[i], "to", where), where + "/to");
        t.label = label_from_json(member(ts[i], "label", where), where + "/label");
        a.transitions.insert(std::move(t));
    }
    return a;
}

AnyAutomaton parse_any(const std::string& text, const std::string& source)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source + " (byte " + std::to_string(e.byte) + ")", "malformed JSON");
    }
    try {
        return automaton_from_json(j);
    } catch (const ParseError& e) {
        throw ParseError(source + "#" + e.where(), std::string(e.what()).substr(e.where().size() + 2));
    }
}

Automaton parse_automaton(const std::string& text, const std::string& source)
{
    auto any = parse_any(text, source);
    if (auto* a = std::get_if<Automaton>(&any))
        return std::move(*a);
    throw ParseError(source, "expected an fva, cfva or eps-fva, found an nfva");
}

MultiAutomaton parse_multi(const std::string& text, const std::string& source)
{
    auto any = parse_any(text, source);
    if (auto* a = std::get_if<MultiAutomaton>(&any))
        return std::move(*a);
    throw ParseError(source, "expected an nfva");
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write '" + path + "'");
    out << content;
}

AnyAutomaton load_any(const std::string& path) { return parse_any(read_file(path), path); }

Automaton load_automaton(const std::string& path) { return parse_automaton(read_file(path), path); }

}  // namespace fva

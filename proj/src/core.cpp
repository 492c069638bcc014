#include "fva/core.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

namespace fva {

const char* polarity_symbol(Polarity p)
{
    switch (p) {
    case Polarity::send: return "!";
    case Polarity::recv: return "?";
    case Polarity::none: break;
    }
    return "";
}

const char* type_name(AutomatonType t)
{
    switch (t) {
    case AutomatonType::fva: return "fva";
    case AutomatonType::cfva: return "cfva";
    case AutomatonType::eps_fva: return "eps-fva";
    }
    return "?";
}

std::string Label::to_string() const
{
    std::string out = polarity_symbol(polarity_);
    if (is_letter())
        out += as_letter().str();
    else if (is_var())
        out += "$" + as_var().str();
    else
        out += kEpsilonToken;
    return out;
}

std::set<Letter> Automaton::letters() const
{
    std::set<Letter> out;
    for (const auto& t : transitions)
        if (t.label.is_letter())
            out.insert(t.label.as_letter());
    return out;
}

std::set<Variable> Automaton::refreshed_at(const StateId& state) const
{
    std::set<Variable> out;
    for (const auto& [x, where] : refresh)
        if (where.contains(state))
            out.insert(x);
    return out;
}

void Automaton::add_transition(StateId from, Label label, StateId to)
{
    states.insert(from);
    states.insert(to);
    if (label.is_var())
        variables.insert(label.as_var());
    transitions.insert(Transition{std::move(from), std::move(label), std::move(to)});
}

std::set<Letter> MultiAutomaton::letters() const
{
    std::set<Letter> out;
    for (const auto& t : transitions)
        for (const auto& l : t.labels)
            if (l.is_letter())
                out.insert(l.as_letter());
    return out;
}

InvalidAutomaton::InvalidAutomaton(std::vector<std::string> violations)
    : Error([&] {
          std::string msg = "invalid automaton:";
          for (const auto& v : violations)
              msg += "\n  " + v;
          return msg;
      }()),
      violations_(std::move(violations))
{
}

bool is_valid_token(const std::string& s)
{
    if (s.empty())
        return false;
    return std::none_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

bool is_valid_letter_symbol(const std::string& s)
{
    return is_valid_token(s) && s != kEpsilonToken && s != kEmptyWordToken && s.front() != '$';
}

namespace {

struct ViolationSink {
    std::vector<std::string> out;

    void add(std::string msg) { out.push_back(std::move(msg)); }
};

template <class A>
void check_common(const A& a, ViolationSink& sink)
{
    for (const auto& s : a.states)
        if (!is_valid_token(s))
            sink.add("invalid state id '" + s + "'");
    for (const auto& x : a.variables)
        if (!is_valid_token(x.str()) || x.str().front() == '$')
            sink.add("invalid variable name '" + x.str() + "'");
    for (const auto& s : a.initial)
        if (!a.states.contains(s))
            sink.add("unknown state '" + s + "' in initial");
    for (const auto& s : a.accepting)
        if (!a.states.contains(s))
            sink.add("unknown state '" + s + "' in accepting");
    for (const auto& [x, where] : a.refresh) {
        if (!a.variables.contains(x))
            sink.add("unknown variable '$" + x.str() + "' in refresh");
        for (const auto& s : where)
            if (!a.states.contains(s))
                sink.add("unknown state '" + s + "' in refresh of '$" + x.str() + "'");
    }
}

template <class A>
void check_label(const A& a, const Label& l, bool eps_ok, bool polarized, const std::string& where,
                 ViolationSink& sink)
{
    if (l.is_eps() && !eps_ok)
        sink.add("epsilon label not allowed " + where);
    if (l.is_letter() && !is_valid_letter_symbol(l.as_letter().str()))
        sink.add("invalid letter '" + l.as_letter().str() + "' " + where);
    if (l.is_var() && !a.variables.contains(l.as_var()))
        sink.add("unknown variable '$" + l.as_var().str() + "' " + where);
    if (polarized && !l.is_eps() && l.polarity() == Polarity::none)
        sink.add("missing polarity " + where);
    if ((!polarized || l.is_eps()) && l.polarity() != Polarity::none)
        sink.add("unexpected polarity " + where);
}

}  // namespace

std::vector<std::string> validate(const Automaton& a)
{
    ViolationSink sink;
    check_common(a, sink);
    const bool eps_ok = a.type == AutomatonType::eps_fva;
    const bool polarized = a.type == AutomatonType::cfva;
    for (const auto& t : a.transitions) {
        const std::string where = "on transition " + t.from + " -" + t.label.to_string() + "-> " + t.to;
        if (!a.states.contains(t.from))
            sink.add("unknown state '" + t.from + "' " + where);
        if (!a.states.contains(t.to))
            sink.add("unknown state '" + t.to + "' " + where);
        check_label(a, t.label, eps_ok, polarized, where, sink);
    }
    if (a.type == AutomatonType::cfva) {
        if (a.initial.size() != 1)
            sink.add("single initial required (found " + std::to_string(a.initial.size()) + ")");
        if (a.accepting != a.states)
            sink.add("all states must be accepting in a cfva");
    }
    return sink.out;
}

std::vector<std::string> validate(const MultiAutomaton& a)
{
    ViolationSink sink;
    check_common(a, sink);
    if (a.arity < 1)
        sink.add("arity must be at least 1");
    for (const auto& t : a.transitions) {
        std::string labels;
        for (const auto& l : t.labels)
            labels += (labels.empty() ? "" : ",") + l.to_string();
        const std::string where = "on transition " + t.from + " -(" + labels + ")-> " + t.to;
        if (!a.states.contains(t.from))
            sink.add("unknown state '" + t.from + "' " + where);
        if (!a.states.contains(t.to))
            sink.add("unknown state '" + t.to + "' " + where);
        if (t.labels.size() != a.arity)
            sink.add("tuple of size " + std::to_string(t.labels.size()) + " does not match arity " +
                     std::to_string(a.arity) + " " + where);
        for (const auto& l : t.labels)
            check_label(a, l, false, false, where, sink);
    }
    return sink.out;
}

void require_valid(const Automaton& a)
{
    if (auto v = validate(a); !v.empty())
        throw InvalidAutomaton(std::move(v));
}

void require_valid(const MultiAutomaton& a)
{
    if (auto v = validate(a); !v.empty())
        throw InvalidAutomaton(std::move(v));
}

Letter mint_letter(const std::set<Letter>& used)
{
    for (std::size_t i = 0;; ++i) {
        Letter candidate("#f" + std::to_string(i));
        if (!used.contains(candidate))
            return candidate;
    }
}

std::vector<Letter> mint_letters(const std::set<Letter>& used, std::size_t count)
{
    std::set<Letter> taken = used;
    std::vector<Letter> out;
    out.reserve(count);
    while (out.size() < count) {
        Letter l = mint_letter(taken);
        taken.insert(l);
        out.push_back(std::move(l));
    }
    return out;
}

namespace {

Label rename_label(const Label& l, const std::map<Variable, Variable>& mapping)
{
    if (!l.is_var())
        return l;
    auto it = mapping.find(l.as_var());
    return it == mapping.end() ? l : Label(it->second, l.polarity());
}

template <class A>
void rename_common(A& out, const A& a, const std::map<Variable, Variable>& mapping)
{
    auto map_var = [&](const Variable& x) {
        auto it = mapping.find(x);
        return it == mapping.end() ? x : it->second;
    };
    out.variables.clear();
    for (const auto& x : a.variables)
        out.variables.insert(map_var(x));
    out.refresh.clear();
    for (const auto& [x, where] : a.refresh)
        out.refresh[map_var(x)] = where;
}

}  // namespace

Automaton rename_variables(const Automaton& a, const std::map<Variable, Variable>& mapping)
{
    Automaton out = a;
    rename_common(out, a, mapping);
    out.transitions.clear();
    for (const auto& t : a.transitions)
        out.transitions.insert({t.from, rename_label(t.label, mapping), t.to});
    return out;
}

MultiAutomaton rename_variables(const MultiAutomaton& a, const std::map<Variable, Variable>& mapping)
{
    MultiAutomaton out = a;
    rename_common(out, a, mapping);
    out.transitions.clear();
    for (const auto& t : a.transitions) {
        MultiTransition mt{t.from, {}, t.to};
        for (const auto& l : t.labels)
            mt.labels.push_back(rename_label(l, mapping));
        out.transitions.insert(std::move(mt));
    }
    return out;
}

std::pair<Automaton, Automaton> rename_apart(const Automaton& a, const Automaton& b)
{
    std::set<Variable> taken = a.variables;
    taken.insert(b.variables.begin(), b.variables.end());
    std::map<Variable, Variable> mapping;
    for (const auto& x : b.variables) {
        if (!a.variables.contains(x))
            continue;
        std::string name = x.str();
        do {
            name += '\'';
        } while (taken.contains(Variable(name)));
        taken.insert(Variable(name));
        mapping.emplace(x, Variable(name));
    }
    if (mapping.empty())
        return {a, b};
    return {a, rename_variables(b, mapping)};
}

Automaton prefix_states(const Automaton& a, const std::string& prefix)
{
    auto p = [&](const StateId& s) { return prefix + s; };
    Automaton out;
    out.type = a.type;
    out.variables = a.variables;
    for (const auto& s : a.states)
        out.states.insert(p(s));
    for (const auto& s : a.initial)
        out.initial.insert(p(s));
    for (const auto& s : a.accepting)
        out.accepting.insert(p(s));
    for (const auto& t : a.transitions)
        out.transitions.insert({p(t.from), t.label, p(t.to)});
    for (const auto& [x, where] : a.refresh)
        for (const auto& s : where)
            out.refresh[x].insert(p(s));
    return out;
}

namespace {

std::set<StateId> reach(const std::set<StateId>& from,
                        const std::multimap<StateId, StateId>& edges)
{
    std::set<StateId> seen = from;
    std::deque<StateId> queue(from.begin(), from.end());
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        auto [lo, hi] = edges.equal_range(s);
        for (auto it = lo; it != hi; ++it)
            if (seen.insert(it->second).second)
                queue.push_back(it->second);
    }
    return seen;
}

}  // namespace

std::set<StateId> accessible_states(const Automaton& a)
{
    std::multimap<StateId, StateId> fwd;
    for (const auto& t : a.transitions)
        fwd.emplace(t.from, t.to);
    return reach(a.initial, fwd);
}

Automaton trim(const Automaton& a)
{
    std::multimap<StateId, StateId> bwd;
    for (const auto& t : a.transitions)
        bwd.emplace(t.to, t.from);
    const std::set<StateId> acc = accessible_states(a);
    const std::set<StateId> coacc = reach(a.accepting, bwd);

    Automaton out;
    out.type = a.type;
    out.variables = a.variables;
    for (const auto& s : a.states)
        if (acc.contains(s) && coacc.contains(s))
            out.states.insert(s);
    for (const auto& s : a.initial)
        if (out.states.contains(s))
            out.initial.insert(s);
    for (const auto& s : a.accepting)
        if (out.states.contains(s))
            out.accepting.insert(s);
    for (const auto& t : a.transitions)
        if (out.states.contains(t.from) && out.states.contains(t.to))
            out.transitions.insert(t);
    for (const auto& [x, where] : a.refresh) {
        auto& dst = out.refresh[x];
        for (const auto& s : where)
            if (out.states.contains(s))
                dst.insert(s);
    }
    return out;
}

}  // namespace fva

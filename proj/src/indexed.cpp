#include "fva/indexed.hpp"

#include <algorithm>

namespace fva::detail {

int LetterTable::intern(const Letter& l)
{
    auto [it, inserted] = ids_.emplace(l, static_cast<int>(letters_.size()));
    if (inserted)
        letters_.push_back(l);
    return it->second;
}

int LetterTable::find(const Letter& l) const
{
    auto it = ids_.find(l);
    return it == ids_.end() ? -1 : it->second;
}

namespace {

template <class A>
IndexedAutomaton index_common(const A& a)
{
    if (a.variables.size() > kMaxVariables)
        throw Error("at most " + std::to_string(kMaxVariables) + " variables are supported");
    IndexedAutomaton ia;
    for (const auto& s : a.states) {
        ia.state_index.emplace(s, static_cast<int>(ia.state_names.size()));
        ia.state_names.push_back(s);
    }
    for (const auto& x : a.variables) {
        ia.var_index.emplace(x, static_cast<int>(ia.vars.size()));
        ia.vars.push_back(x);
    }
    const std::size_t n = ia.state_names.size();
    ia.initial.assign(n, 0);
    ia.accepting.assign(n, 0);
    ia.out.assign(n, {});
    ia.refresh.assign(n, 0);
    for (const auto& s : a.initial) {
        int q = ia.state_index.at(s);
        ia.initial[q] = 1;
        ia.initial_list.push_back(q);
    }
    for (const auto& s : a.accepting)
        ia.accepting[ia.state_index.at(s)] = 1;
    for (const auto& [x, where] : a.refresh) {
        auto vit = ia.var_index.find(x);
        if (vit == ia.var_index.end())
            continue;
        for (const auto& s : where)
            ia.refresh[ia.state_index.at(s)] |= VarMask{1} << vit->second;
    }
    return ia;
}

Atom to_atom(const IndexedAutomaton& ia, const Label& l, LetterTable& letters)
{
    if (l.is_letter())
        return {Atom::Kind::letter, letters.intern(l.as_letter())};
    if (l.is_var())
        return {Atom::Kind::var, ia.var_index.at(l.as_var())};
    return {Atom::Kind::eps, -1};
}

void push_edge(IndexedAutomaton& ia, Edge e)
{
    ia.has_eps = ia.has_eps || e.is_eps();
    ia.out[e.from].push_back(static_cast<int>(ia.edges.size()));
    ia.edges.push_back(std::move(e));
}

}  // namespace

IndexedAutomaton index_automaton(const Automaton& a, LetterTable& letters)
{
    IndexedAutomaton ia = index_common(a);
    ia.arity = 1;
    for (const auto& t : a.transitions)
        push_edge(ia, Edge{ia.state_index.at(t.from), ia.state_index.at(t.to), t.label.polarity(),
                           {to_atom(ia, t.label, letters)}});
    return ia;
}

IndexedAutomaton index_automaton(const MultiAutomaton& a, LetterTable& letters)
{
    IndexedAutomaton ia = index_common(a);
    ia.arity = a.arity;
    for (const auto& t : a.transitions) {
        Edge e{ia.state_index.at(t.from), ia.state_index.at(t.to), Polarity::none, {}};
        for (const auto& l : t.labels)
            e.atoms.push_back(to_atom(ia, l, letters));
        push_edge(ia, std::move(e));
    }
    return ia;
}

bool fire(const IndexedAutomaton& a, const Edge& e, const Memory& m, int letter, Memory& out)
{
    out = m;
    for (const Atom& at : e.atoms) {
        switch (at.kind) {
        case Atom::Kind::letter:
            if (at.id != letter)
                return false;
            break;
        case Atom::Kind::var:
            if (out[at.id] == kFree)
                out[at.id] = letter;
            else if (out[at.id] != letter)
                return false;
            break;
        case Atom::Kind::eps:
            return false;
        }
    }
    release(out, a.refresh[e.to]);
    return true;
}

void eps_close(const IndexedAutomaton& a, std::vector<Config>& configs)
{
    std::sort(configs.begin(), configs.end());
    configs.erase(std::unique(configs.begin(), configs.end()), configs.end());
    if (!a.has_eps)
        return;
    std::vector<Config> stack = configs;
    std::vector<Config> seen = configs;
    while (!stack.empty()) {
        Config c = std::move(stack.back());
        stack.pop_back();
        for (int eid : a.out[c.state]) {
            const Edge& e = a.edges[eid];
            if (!e.is_eps())
                continue;
            Config next{e.to, c.mem};
            release(next.mem, a.refresh[e.to]);
            auto pos = std::lower_bound(seen.begin(), seen.end(), next);
            if (pos != seen.end() && *pos == next)
                continue;
            seen.insert(pos, next);
            stack.push_back(std::move(next));
        }
    }
    configs = std::move(seen);
}

std::vector<Config> step_set(const IndexedAutomaton& a, const std::vector<Config>& configs, int letter)
{
    std::vector<Config> next;
    Memory mem;
    for (const Config& c : configs)
        for (int eid : a.out[c.state]) {
            const Edge& e = a.edges[eid];
            if (fire(a, e, c.mem, letter, mem))
                next.push_back(Config{e.to, mem});
        }
    eps_close(a, next);
    return next;
}

std::vector<Config> initial_configs(const IndexedAutomaton& a)
{
    std::vector<Config> out;
    for (int q : a.initial_list)
        out.push_back(Config{q, a.empty_memory()});
    eps_close(a, out);
    return out;
}

}  // namespace fva::detail

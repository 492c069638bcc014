#include "fva/closure.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace fva {

namespace {

// Copies of a and b with disjoint variables and states `1.*` / `2.*`.
std::pair<Automaton, Automaton> separate(const Automaton& a, const Automaton& b)
{
    require_valid(a);
    require_valid(b);
    auto [a1, b1] = rename_apart(a, b);
    return {prefix_states(a1, "1."), prefix_states(b1, "2.")};
}

Automaton merge(const Automaton& a, const Automaton& b, AutomatonType type)
{
    Automaton out;
    out.type = type;
    out.variables = a.variables;
    out.variables.insert(b.variables.begin(), b.variables.end());
    out.states = a.states;
    out.states.insert(b.states.begin(), b.states.end());
    out.transitions = a.transitions;
    out.transitions.insert(b.transitions.begin(), b.transitions.end());
    out.refresh = a.refresh;
    for (const auto& [x, where] : b.refresh)
        out.refresh[x].insert(where.begin(), where.end());
    return out;
}

std::string mask_suffix(const std::vector<Variable>& vars, std::uint64_t mask)
{
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (mask >> i & 1) {
            s += (first ? "" : ",") + vars[i].str();
            first = false;
        }
    return s + "}";
}

}  // namespace

Automaton union_of(const Automaton& a, const Automaton& b)
{
    auto [a1, b1] = separate(a, b);
    Automaton out = merge(a1, b1, AutomatonType::fva);
    out.initial = a1.initial;
    out.initial.insert(b1.initial.begin(), b1.initial.end());
    out.accepting = a1.accepting;
    out.accepting.insert(b1.accepting.begin(), b1.accepting.end());
    return out;
}

Automaton concat(const Automaton& a, const Automaton& b)
{
    auto [a1, b1] = separate(a, b);
    Automaton e = merge(a1, b1, AutomatonType::eps_fva);
    e.initial = a1.initial;
    e.accepting = b1.accepting;
    for (const auto& f : a1.accepting)
        for (const auto& q : b1.initial)
            e.add_transition(f, Label::eps(), q);
    return eliminate_eps(e);
}

Automaton star(const Automaton& a)
{
    require_valid(a);
    Automaton e = prefix_states(a, "1.");
    e.type = AutomatonType::eps_fva;
    const StateId seam = "seam";
    e.states.insert(seam);
    e.initial = {seam};
    e.accepting = {seam};
    for (const auto& q : prefix_states(a, "1.").initial)
        e.add_transition(seam, Label::eps(), q);
    for (const auto& f : prefix_states(a, "1.").accepting)
        e.add_transition(f, Label::eps(), seam);
    for (const auto& x : e.variables)
        e.refresh[x].insert(seam);
    return eliminate_eps(e);
}

Automaton eliminate_eps(const Automaton& e, EliminationStats* stats)
{
    require_valid(e);
    const std::vector<Variable> vars(e.variables.begin(), e.variables.end());
    if (vars.size() > 63)
        throw Error("too many variables for epsilon elimination");
    std::map<Variable, int> var_index;
    for (std::size_t i = 0; i < vars.size(); ++i)
        var_index.emplace(vars[i], static_cast<int>(i));
    std::map<StateId, std::uint64_t> own;
    for (const auto& q : e.states)
        own[q] = 0;
    for (const auto& [x, where] : e.refresh)
        for (const auto& q : where)
            own[q] |= std::uint64_t{1} << var_index.at(x);

    std::multimap<StateId, StateId> eps;
    std::multimap<StateId, const Transition*> letter_edges;
    for (const auto& t : e.transitions) {
        if (t.label.is_eps())
            eps.emplace(t.from, t.to);
        else
            letter_edges.emplace(t.from, &t);
    }

    using Node = std::pair<StateId, std::uint64_t>;
    // Every (r, R) with an epsilon path q ~> r whose refreshes, together with
    // q's own, make up R.
    auto closure = [&](const StateId& q) {
        std::set<Node> seen{{q, own[q]}};
        std::vector<Node> stack{{q, own[q]}};
        while (!stack.empty()) {
            Node n = stack.back();
            stack.pop_back();
            auto [lo, hi] = eps.equal_range(n.first);
            for (auto it = lo; it != hi; ++it) {
                Node m{it->second, n.second | own[it->second]};
                if (seen.insert(m).second)
                    stack.push_back(m);
            }
        }
        return seen;
    };

    std::map<Node, StateId> names;
    std::set<StateId> taken(e.states.begin(), e.states.end());
    auto name_of = [&](const Node& n) -> const StateId& {
        auto it = names.find(n);
        if (it != names.end())
            return it->second;
        StateId name = n.first;
        if (n.second != own[n.first]) {
            name += mask_suffix(vars, n.second);
            while (taken.contains(name))
                name += "'";
        }
        taken.insert(name);
        return names.emplace(n, name).first->second;
    };

    Automaton out;
    out.type = AutomatonType::fva;
    out.variables = e.variables;
    std::deque<Node> work;
    std::set<Node> done;
    auto visit = [&](const Node& n) {
        if (done.insert(n).second)
            work.push_back(n);
        return name_of(n);
    };
    for (const auto& q0 : e.initial)
        for (const auto& n : closure(q0)) {
            // the memory is empty at the start, so the path refreshes are moot
            const StateId s = visit(Node{n.first, own[n.first]});
            out.initial.insert(s);
        }
    std::map<StateId, std::set<Node>> closures;
    while (!work.empty()) {
        const Node n = work.front();
        work.pop_front();
        const StateId src = name_of(n);
        out.states.insert(src);
        if (e.accepting.contains(n.first))
            out.accepting.insert(src);
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (n.second >> i & 1)
                out.refresh[vars[i]].insert(src);
        auto [lo, hi] = letter_edges.equal_range(n.first);
        for (auto it = lo; it != hi; ++it) {
            const Transition& t = *it->second;
            auto cit = closures.find(t.to);
            if (cit == closures.end())
                cit = closures.emplace(t.to, closure(t.to)).first;
            for (const Node& m : cit->second)
                out.transitions.insert(Transition{src, t.label, visit(m)});
        }
    }

    const std::size_t bound = e.states.size() << vars.size();
    if (done.size() > bound)
        throw std::logic_error("epsilon elimination exceeded |Q|*2^|X| states");
    if (stats) {
        stats->result_states = out.states.size();
        stats->state_bound = bound;
    }
    return out;
}

MultiAutomaton product2(const Automaton& a, const Automaton& b)
{
    require_valid(a);
    require_valid(b);
    auto [a1, b1] = rename_apart(a, b);
    MultiAutomaton out;
    out.arity = 2;
    out.variables = a1.variables;
    out.variables.insert(b1.variables.begin(), b1.variables.end());

    std::multimap<StateId, const Transition*> ea, eb;
    for (const auto& t : a1.transitions)
        ea.emplace(t.from, &t);
    for (const auto& t : b1.transitions)
        eb.emplace(t.from, &t);

    using Pair = std::pair<StateId, StateId>;
    auto name = [](const Pair& p) { return "(" + p.first + "," + p.second + ")"; };
    std::set<Pair> seen;
    std::vector<Pair> stack;
    for (const auto& p : a1.initial)
        for (const auto& q : b1.initial) {
            seen.insert({p, q});
            stack.push_back({p, q});
            out.initial.insert(name({p, q}));
        }
    while (!stack.empty()) {
        Pair pq = stack.back();
        stack.pop_back();
        const StateId s = name(pq);
        out.states.insert(s);
        if (a1.accepting.contains(pq.first) && b1.accepting.contains(pq.second))
            out.accepting.insert(s);
        for (const auto& x : a1.refreshed_at(pq.first))
            out.refresh[x].insert(s);
        for (const auto& x : b1.refreshed_at(pq.second))
            out.refresh[x].insert(s);
        auto [alo, ahi] = ea.equal_range(pq.first);
        auto [blo, bhi] = eb.equal_range(pq.second);
        for (auto i = alo; i != ahi; ++i)
            for (auto j = blo; j != bhi; ++j) {
                Pair next{i->second->to, j->second->to};
                out.transitions.insert(MultiTransition{s, {i->second->label, j->second->label}, name(next)});
                if (seen.insert(next).second)
                    stack.push_back(next);
            }
    }
    return out;
}

Automaton reduce_nfva(const MultiAutomaton& a, const ReduceOptions& options)
{
    require_valid(a);
    if (a.arity == 1) {
        Automaton out;
        out.variables = a.variables;
        out.states = a.states;
        out.initial = a.initial;
        out.accepting = a.accepting;
        out.refresh = a.refresh;
        for (const auto& t : a.transitions)
            out.transitions.insert(Transition{t.from, t.labels.front(), t.to});
        return out;
    }

    const std::set<Letter> sigma = a.letters();
    const std::vector<Letter> letters(sigma.begin(), sigma.end());
    const std::vector<Variable> vars(a.variables.begin(), a.variables.end());
    const int n_letters = static_cast<int>(letters.size());
    const int n_classes = n_letters + static_cast<int>(vars.size());
    std::map<Variable, int> var_index;
    for (std::size_t i = 0; i < vars.size(); ++i)
        var_index.emplace(vars[i], static_cast<int>(i));
    std::map<Letter, int> letter_index;
    for (int i = 0; i < n_letters; ++i)
        letter_index.emplace(letters[i], i);

    std::map<StateId, std::vector<int>> refreshed;
    for (const auto& [x, where] : a.refresh)
        for (const auto& q : where)
            refreshed[q].push_back(var_index.at(x));
    std::multimap<StateId, const MultiTransition*> edges;
    for (const auto& t : a.transitions)
        edges.emplace(t.from, &t);

    // class variable names k1..kn, fresh with respect to nothing else
    std::vector<Variable> class_vars;
    for (std::size_t i = 0; i < vars.size(); ++i)
        class_vars.emplace_back("k" + std::to_string(i + 1));

    using Psi = std::vector<int>;  // per variable: class or -1
    using Node = std::pair<StateId, Psi>;
    auto name = [&](const Node& n) {
        std::string s = n.first + "[";
        for (std::size_t i = 0; i < n.second.size(); ++i)
            s += (i ? "," : "") + (n.second[i] < 0 ? std::string("_") : std::to_string(n.second[i] + 1));
        return s + "]";
    };

    Automaton out;
    out.variables.insert(class_vars.begin(), class_vars.end());
    std::set<Node> seen;
    std::vector<Node> stack;
    auto visit = [&](Node n) {
        StateId s = name(n);
        if (seen.insert(n).second) {
            if (seen.size() > options.state_cap)
                throw CapExceeded("reduce.state_cap", options.state_cap);
            stack.push_back(std::move(n));
        }
        return s;
    };
    for (const auto& q : a.initial)
        out.initial.insert(visit(Node{q, Psi(vars.size(), -1)}));

    while (!stack.empty()) {
        const Node n = std::move(stack.back());
        stack.pop_back();
        const StateId src = name(n);
        out.states.insert(src);
        if (a.accepting.contains(n.first))
            out.accepting.insert(src);
        std::vector<char> used(static_cast<std::size_t>(n_classes), 0);
        for (int c : n.second)
            if (c >= 0)
                used[static_cast<std::size_t>(c)] = 1;
        for (int c = n_letters; c < n_classes; ++c)
            if (!used[static_cast<std::size_t>(c)])
                out.refresh[class_vars[static_cast<std::size_t>(c - n_letters)]].insert(src);

        auto [lo, hi] = edges.equal_range(n.first);
        for (auto it = lo; it != hi; ++it) {
            const MultiTransition& t = *it->second;
            int forced = -1;
            bool clash = false;
            std::vector<int> free_vars;
            for (const Label& l : t.labels) {
                int c;
                if (l.is_letter()) {
                    c = letter_index.at(l.as_letter());
                } else {
                    const int v = var_index.at(l.as_var());
                    c = n.second[static_cast<std::size_t>(v)];
                    if (c < 0) {
                        free_vars.push_back(v);
                        continue;
                    }
                }
                if (forced >= 0 && forced != c)
                    clash = true;
                forced = c;
            }
            if (clash)
                continue;
            std::vector<int> choices;
            if (forced >= 0) {
                choices.push_back(forced);
            } else {
                // all components free: any letter, any occupied class, or
                // one representative empty class
                for (int c = 0; c < n_classes; ++c)
                    if (c < n_letters || used[static_cast<std::size_t>(c)])
                        choices.push_back(c);
                for (int c = n_letters; c < n_classes; ++c)
                    if (!used[static_cast<std::size_t>(c)]) {
                        choices.push_back(c);
                        break;
                    }
            }
            for (int c : choices) {
                Psi next = n.second;
                for (int v : free_vars)
                    next[static_cast<std::size_t>(v)] = c;
                if (auto r = refreshed.find(t.to); r != refreshed.end())
                    for (int v : r->second)
                        next[static_cast<std::size_t>(v)] = -1;
                Label label = c < n_letters ? Label(letters[static_cast<std::size_t>(c)])
                                            : Label(class_vars[static_cast<std::size_t>(c - n_letters)]);
                out.transitions.insert(Transition{src, label, visit(Node{t.to, std::move(next)})});
            }
        }
    }
    return out;
}

Automaton intersect(const Automaton& a, const Automaton& b, const ReduceOptions& options)
{
    return trim(reduce_nfva(product2(a, b), options));
}

}  // namespace fva

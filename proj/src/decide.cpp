#include "fva/decide.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

#include "fva/arena.hpp"
#include "fva/indexed.hpp"

namespace fva {

using detail::Config;
using detail::IndexedAutomaton;
using detail::LetterTable;
using detail::Memory;
using detail::VarMask;

namespace {

VarMask bit(int i) { return VarMask{1} << i; }

VarMask all_vars(const IndexedAutomaton& ia)
{
    return ia.num_vars() == 64 ? ~VarMask{0} : bit(static_cast<int>(ia.num_vars())) - 1;
}

bool is_var_edge(const detail::Edge& e) { return e.atoms.size() == 1 && e.atoms[0].is_var(); }

}  // namespace

UniversalityResult universal(const Automaton& a)
{
    require_valid(a);
    LetterTable letters;
    const IndexedAutomaton ia = detail::index_automaton(a, letters);

    using Node = std::pair<int, VarMask>;  // state, free variables
    std::map<Node, int> ids;
    std::vector<Node> nodes;
    std::vector<std::vector<int>> succ;
    std::vector<char> expanded;
    auto id_of = [&](const Node& n) {
        auto [it, inserted] = ids.emplace(n, static_cast<int>(nodes.size()));
        if (inserted) {
            nodes.push_back(n);
            succ.emplace_back();
            expanded.push_back(0);
        }
        return it->second;
    };
    auto successors = [&](int id) -> const std::vector<int>& {
        if (!expanded[static_cast<std::size_t>(id)]) {
            const Node n = nodes[static_cast<std::size_t>(id)];
            std::vector<int> out;
            for (int eid : ia.out[static_cast<std::size_t>(n.first)]) {
                const detail::Edge& e = ia.edges[static_cast<std::size_t>(eid)];
                if (!is_var_edge(e) || !(n.second & bit(e.atoms[0].id)))
                    continue;
                const VarMask free = (n.second & ~bit(e.atoms[0].id)) | ia.refresh[static_cast<std::size_t>(e.to)];
                out.push_back(id_of(Node{e.to, free}));
            }
            expanded[static_cast<std::size_t>(id)] = 1;
            succ[static_cast<std::size_t>(id)] = std::move(out);
        }
        return succ[static_cast<std::size_t>(id)];
    };

    std::vector<int> layer;
    for (int q : ia.initial_list)
        layer.push_back(id_of(Node{q, all_vars(ia)}));
    std::sort(layer.begin(), layer.end());
    layer.erase(std::unique(layer.begin(), layer.end()), layer.end());

    std::set<std::vector<int>> seen;
    UniversalityResult result;
    for (std::size_t n = 0;; ++n) {
        const bool accepts = std::any_of(layer.begin(), layer.end(), [&](int id) {
            return ia.accepting[static_cast<std::size_t>(nodes[static_cast<std::size_t>(id)].first)] != 0;
        });
        if (!accepts) {
            result.rejected_length = n;
            break;
        }
        if (!seen.insert(layer).second) {
            result.universal = true;
            break;
        }
        std::vector<int> next;
        for (int id : layer) {
            const auto& s = successors(id);
            next.insert(next.end(), s.begin(), s.end());
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        layer = std::move(next);
    }
    result.explored = seen.size();
    return result;
}

Word rejected_word(const Automaton& a, const UniversalityResult& r)
{
    if (!r.rejected_length)
        return {};
    return mint_letters(a.letters(), *r.rejected_length);
}

DeterminismResult is_deterministic(const Automaton& a)
{
    require_valid(a);
    DeterminismResult r;
    if (a.initial.size() > 1) {
        r.deterministic = false;
        r.offender = *a.initial.begin();
        r.reason = "more than one initial state";
        return r;
    }
    std::map<StateId, std::vector<const Transition*>> out;
    for (const auto& t : a.transitions)
        out[t.from].push_back(&t);
    for (const auto& q : accessible_states(a)) {
        const auto& ts = out[q];
        std::map<Letter, int> per_letter;
        bool has_var = false;
        for (const Transition* t : ts) {
            if (t->label.is_var())
                has_var = true;
            else if (t->label.is_letter() && ++per_letter[t->label.as_letter()] == 2) {
                r.deterministic = false;
                r.offender = q;
                r.reason = "two transitions on letter '" + t->label.as_letter().str() + "'";
                return r;
            }
        }
        if (has_var && ts.size() >= 2) {
            r.deterministic = false;
            r.offender = q;
            r.reason = "variable transition beside another transition";
            return r;
        }
    }
    return r;
}

namespace {

void require_deterministic(const Automaton& d)
{
    DeterminismResult det = is_deterministic(d);
    if (!det)
        throw NotDeterministic(*det.offender);
}

}  // namespace

bool dfva_universal(const Automaton& d)
{
    require_deterministic(d);
    if (d.initial.empty())
        return false;
    LetterTable letters;
    const IndexedAutomaton ia = detail::index_automaton(d, letters);
    int q = ia.initial_list.front();
    VarMask free = all_vars(ia);
    std::set<std::pair<int, VarMask>> seen;
    const std::size_t step_bound = 2 * ia.num_states() + 1;
    for (std::size_t steps = 0;; ++steps) {
        if (steps > step_bound)
            throw std::logic_error("deterministic universality walk exceeded 2|Q|+1 steps");
        if (!ia.accepting[static_cast<std::size_t>(q)])
            return false;
        if (!seen.insert({q, free}).second)
            return true;
        const auto& out = ia.out[static_cast<std::size_t>(q)];
        // deterministic: a variable transition is the only one
        if (out.empty() || !is_var_edge(ia.edges[static_cast<std::size_t>(out.front())]))
            return false;
        const detail::Edge& e = ia.edges[static_cast<std::size_t>(out.front())];
        if (!(free & bit(e.atoms[0].id)))
            return false;
        free = (free & ~bit(e.atoms[0].id)) | ia.refresh[static_cast<std::size_t>(e.to)];
        q = e.to;
    }
}

std::vector<Letter> pair_letters(const std::set<Variable>& xs, const std::set<Variable>& ys,
                                 const std::set<Letter>& used)
{
    std::vector<std::string> names;
    for (const auto& x : xs)
        for (const auto& y : ys) {
            names.push_back("#p(" + x.str() + "," + y.str() + ")");
            names.push_back("#p(" + y.str() + "," + x.str() + ")");
        }
    for (const auto& x : xs)
        names.push_back("#p(" + x.str() + ")");
    for (const auto& y : ys)
        names.push_back("#p(" + y.str() + ")");
    names.push_back("#p");
    std::set<Letter> taken = used;
    std::vector<Letter> out;
    for (auto name : names) {
        while (taken.contains(Letter(name)))
            name += '\'';
        taken.insert(Letter(name));
        out.emplace_back(name);
    }
    return out;
}

namespace {

struct SimPosition {
    enum Kind : int { root, pick_initial, attack, defend } kind;
    int q1 = -1;
    Memory m1{};
    int q2 = -1;
    Memory m2{};
    int letter = -1;

    friend auto operator<=>(const SimPosition&, const SimPosition&) = default;
};

}  // namespace

SimulationResult fva_simulates(const Automaton& a_in, const Automaton& b_in, const SimulationOptions& options)
{
    require_valid(a_in);
    require_valid(b_in);
    auto [a, b] = rename_apart(a_in, b_in);
    LetterTable letters;
    const IndexedAutomaton ia = detail::index_automaton(a, letters);
    const IndexedAutomaton ib = detail::index_automaton(b, letters);

    std::set<Letter> used = a.letters();
    for (const auto& l : b.letters())
        used.insert(l);
    std::vector<int> pool;
    for (const auto& l : used)
        pool.push_back(letters.intern(l));
    std::vector<Letter> fresh = pair_letters(a.variables, b.variables, used);
    for (const auto& l : fresh)
        used.insert(l);
    for (auto& l : mint_letters(used, options.extra_letters))
        fresh.push_back(std::move(l));
    for (const auto& l : fresh)
        pool.push_back(letters.intern(l));

    Arena g;
    std::map<SimPosition, int> ids;
    std::vector<SimPosition> positions;
    std::vector<char> bad;
    std::deque<int> work;
    auto node = [&](SimPosition p) {
        auto it = ids.find(p);
        if (it != ids.end())
            return it->second;
        const Player owner =
            p.kind == SimPosition::root || p.kind == SimPosition::attack ? Player::abelard : Player::eloise;
        const int id = g.add_node(owner);
        if (g.size() > options.position_cap)
            throw CapExceeded("sim.position_cap", options.position_cap);
        bad.push_back(p.kind == SimPosition::attack && ia.accepting[static_cast<std::size_t>(p.q1)] &&
                      !ib.accepting[static_cast<std::size_t>(p.q2)]);
        ids.emplace(p, id);
        positions.push_back(std::move(p));
        work.push_back(id);
        return id;
    };

    node(SimPosition{SimPosition::root});
    Memory next;
    while (!work.empty()) {
        const int id = work.front();
        work.pop_front();
        const SimPosition p = positions[static_cast<std::size_t>(id)];
        switch (p.kind) {
        case SimPosition::root:
            for (int q : ia.initial_list)
                g.add_edge(id, node(SimPosition{SimPosition::pick_initial, q, ia.empty_memory()}));
            break;
        case SimPosition::pick_initial:
            for (int q : ib.initial_list)
                g.add_edge(id, node(SimPosition{SimPosition::attack, p.q1, p.m1, q, ib.empty_memory()}));
            break;
        case SimPosition::attack:
            if (bad[static_cast<std::size_t>(id)])
                break;
            for (int eid : ia.out[static_cast<std::size_t>(p.q1)]) {
                const detail::Edge& e = ia.edges[static_cast<std::size_t>(eid)];
                for (int l : pool)
                    if (detail::fire(ia, e, p.m1, l, next))
                        g.add_edge(id, node(SimPosition{SimPosition::defend, e.to, next, p.q2, p.m2, l}));
            }
            break;
        case SimPosition::defend:
            for (int eid : ib.out[static_cast<std::size_t>(p.q2)]) {
                const detail::Edge& e = ib.edges[static_cast<std::size_t>(eid)];
                if (detail::fire(ib, e, p.m2, p.letter, next))
                    g.add_edge(id, node(SimPosition{SimPosition::attack, p.q1, p.m1, e.to, next}));
            }
            break;
        }
    }

    const Solution s = solve_safety(g, bad);
    return SimulationResult{s.eloise_wins[0] != 0, g.size(), pool.size()};
}

bool contains_dfva(const Automaton& a, const Automaton& d, const SimulationOptions& options)
{
    require_valid(a);
    require_deterministic(d);
    return fva_simulates(trim(a), d, options).simulates;
}

namespace {

void require_finite(const Automaton& f)
{
    require_valid(f);
    if (!f.variables.empty())
        throw NotFiniteAutomaton();
}

std::vector<int> post(const IndexedAutomaton& f, const std::vector<int>& states, int letter)
{
    std::vector<int> out;
    for (int q : states)
        for (int eid : f.out[static_cast<std::size_t>(q)]) {
            const detail::Edge& e = f.edges[static_cast<std::size_t>(eid)];
            if (e.atoms[0].id == letter)
                out.push_back(e.to);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool any_accepting(const IndexedAutomaton& f, const std::vector<int>& states)
{
    return std::any_of(states.begin(), states.end(),
                       [&](int q) { return f.accepting[static_cast<std::size_t>(q)] != 0; });
}

// L(f) ⊆ L(a): joint subset construction over f's letters.
bool fa_in_fva(const Automaton& a, const Automaton& f)
{
    LetterTable letters;
    const IndexedAutomaton ia = detail::index_automaton(a, letters);
    const IndexedAutomaton iff = detail::index_automaton(f, letters);
    std::vector<int> sigma;
    for (const auto& l : f.letters())
        sigma.push_back(letters.intern(l));

    using Node = std::pair<std::vector<int>, std::vector<Config>>;
    std::vector<int> f0 = iff.initial_list;
    std::sort(f0.begin(), f0.end());
    std::set<Node> seen;
    std::vector<Node> stack{{f0, detail::initial_configs(ia)}};
    seen.insert(stack.back());
    while (!stack.empty()) {
        Node n = std::move(stack.back());
        stack.pop_back();
        if (any_accepting(iff, n.first) &&
            std::none_of(n.second.begin(), n.second.end(),
                         [&](const Config& c) { return ia.accepting[static_cast<std::size_t>(c.state)] != 0; }))
            return false;
        for (int l : sigma) {
            std::vector<int> fs = post(iff, n.first, l);
            if (fs.empty())
                continue;
            Node m{std::move(fs), detail::step_set(ia, n.second, l)};
            if (seen.insert(m).second)
                stack.push_back(std::move(m));
        }
    }
    return true;
}

// L(a) ⊆ L(f): a useful variable transition yields a word with a letter
// foreign to f; otherwise a is a finite automaton.
bool fva_in_fa(const Automaton& a, const Automaton& f)
{
    const Automaton t = trim(a);
    for (const auto& tr : t.transitions)
        if (tr.label.is_var())
            return false;
    LetterTable letters;
    const IndexedAutomaton iff = detail::index_automaton(f, letters);
    const IndexedAutomaton ia = detail::index_automaton(t, letters);

    using Node = std::pair<int, std::vector<int>>;
    std::vector<int> f0 = iff.initial_list;
    std::sort(f0.begin(), f0.end());
    std::set<Node> seen;
    std::vector<Node> stack;
    for (int q : ia.initial_list)
        if (seen.insert({q, f0}).second)
            stack.push_back({q, f0});
    while (!stack.empty()) {
        Node n = std::move(stack.back());
        stack.pop_back();
        if (ia.accepting[static_cast<std::size_t>(n.first)] && !any_accepting(iff, n.second))
            return false;
        for (int eid : ia.out[static_cast<std::size_t>(n.first)]) {
            const detail::Edge& e = ia.edges[static_cast<std::size_t>(eid)];
            Node m{e.to, post(iff, n.second, e.atoms[0].id)};
            if (seen.insert(m).second)
                stack.push_back(std::move(m));
        }
    }
    return true;
}

}  // namespace

bool fa_containment(const Automaton& a, const Automaton& f, ContainmentDirection direction)
{
    require_valid(a);
    require_finite(f);
    return direction == ContainmentDirection::fa_in_fva ? fa_in_fva(a, f) : fva_in_fa(a, f);
}

}  // namespace fva

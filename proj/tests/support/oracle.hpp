#pragma once
// Reference semantics written straight from the run definition, sharing no
// code with the library: forward subset simulation over configurations.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "fva/core.hpp"

namespace fva::oracle {

using Mem = std::map<Variable, Letter>;
using Config = std::pair<StateId, Mem>;

template <class A>
void release(const A& a, const StateId& q, Mem& m)
{
    for (const auto& [x, where] : a.refresh)
        if (where.count(q))
            m.erase(x);
}

/// Memory after reading `letter` through `l`, or nothing.
inline std::optional<Mem> read(const Label& l, const Letter& letter, Mem m)
{
    if (l.is_letter())
        return l.as_letter() == letter ? std::optional<Mem>(m) : std::nullopt;
    if (!l.is_var())
        return std::nullopt;
    auto it = m.find(l.as_var());
    if (it == m.end()) {
        m[l.as_var()] = letter;
        return m;
    }
    return it->second == letter ? std::optional<Mem>(m) : std::nullopt;
}

inline std::set<Config> eps_closure(const Automaton& a, std::set<Config> s)
{
    std::vector<Config> todo(s.begin(), s.end());
    while (!todo.empty()) {
        Config c = todo.back();
        todo.pop_back();
        for (const auto& t : a.transitions) {
            if (t.from != c.first || !t.label.is_eps())
                continue;
            Mem m = c.second;
            release(a, t.to, m);
            Config n{t.to, std::move(m)};
            if (s.insert(n).second)
                todo.push_back(std::move(n));
        }
    }
    return s;
}

inline std::set<Config> start(const Automaton& a)
{
    std::set<Config> cur;
    for (const auto& q : a.initial)
        cur.insert({q, {}});
    return eps_closure(a, std::move(cur));
}

inline std::set<Config> start(const MultiAutomaton& a)
{
    std::set<Config> cur;
    for (const auto& q : a.initial)
        cur.insert({q, {}});
    return cur;
}

inline std::set<Config> advance(const Automaton& a, const std::set<Config>& cur, const Letter& letter)
{
    std::set<Config> next;
    for (const auto& [q, m] : cur)
        for (const auto& t : a.transitions) {
            if (t.from != q || t.label.is_eps())
                continue;
            if (auto m2 = read(t.label, letter, m)) {
                release(a, t.to, *m2);
                next.insert({t.to, std::move(*m2)});
            }
        }
    return eps_closure(a, std::move(next));
}

inline std::set<Config> advance(const MultiAutomaton& a, const std::set<Config>& cur, const Letter& letter)
{
    std::set<Config> next;
    for (const auto& [q, m] : cur)
        for (const auto& t : a.transitions) {
            if (t.from != q)
                continue;
            std::optional<Mem> m2 = m;
            for (const auto& l : t.labels)
                if (m2)
                    m2 = read(l, letter, *m2);
            if (m2) {
                release(a, t.to, *m2);
                next.insert({t.to, std::move(*m2)});
            }
        }
    return next;
}

template <class A>
bool any_accepting(const A& a, const std::set<Config>& cur)
{
    for (const auto& [q, m] : cur)
        if (a.accepting.count(q))
            return true;
    return false;
}

template <class A>
bool accepts(const A& a, const Word& w)
{
    std::set<Config> cur = start(a);
    for (const auto& letter : w) {
        cur = advance(a, cur, letter);
        if (cur.empty())
            return false;
    }
    return any_accepting(a, cur);
}

/// Every word over `pool` up to `max_len` letters.
inline void for_each_word(const std::vector<Letter>& pool, std::size_t max_len,
                          const std::function<void(const Word&)>& f)
{
    Word w;
    std::function<void()> rec = [&] {
        f(w);
        if (w.size() == max_len)
            return;
        for (const auto& l : pool) {
            w.push_back(l);
            rec();
            w.pop_back();
        }
    };
    rec();
}

/// Accepted words over `pool` up to `max_len`, by a depth-first walk that
/// carries the configuration set and drops dead prefixes.
template <class A>
std::set<Word> sample(const A& a, const std::vector<Letter>& pool, std::size_t max_len)
{
    std::set<Word> out;
    Word w;
    std::function<void(const std::set<Config>&)> rec = [&](const std::set<Config>& cur) {
        if (any_accepting(a, cur))
            out.insert(w);
        if (w.size() == max_len)
            return;
        for (const auto& l : pool) {
            std::set<Config> next = advance(a, cur, l);
            if (next.empty())
                continue;
            w.push_back(l);
            rec(next);
            w.pop_back();
        }
    };
    const std::set<Config> s = start(a);
    if (!s.empty())
        rec(s);
    return out;
}

/// Largest number of distinct runs alive after any prefix of `w`, counting
/// runs as paths (no merging of equal configurations).
inline std::size_t max_live_runs(const Automaton& a, const Word& w)
{
    std::map<Config, std::size_t> cur;
    for (const auto& q : a.initial)
        cur[{q, {}}] += 1;
    std::size_t best = 0;
    for (const auto& [c, n] : cur)
        best += n;
    for (const auto& letter : w) {
        std::map<Config, std::size_t> next;
        for (const auto& [c, n] : cur)
            for (const auto& t : a.transitions) {
                if (t.from != c.first)
                    continue;
                if (auto m2 = read(t.label, letter, c.second)) {
                    release(a, t.to, *m2);
                    next[{t.to, std::move(*m2)}] += n;
                }
            }
        cur = std::move(next);
        std::size_t total = 0;
        for (const auto& [c, n] : cur)
            total += n;
        best = std::max(best, total);
    }
    return best;
}

/// The syntactic characterization, checked directly: one initial state, and
/// no state reachable in the graph has two outgoing transitions on the same
/// letter or two outgoing transitions one of which reads a variable.
inline bool syntactically_deterministic(const Automaton& a)
{
    if (a.initial.size() > 1)
        return false;
    std::set<StateId> seen(a.initial.begin(), a.initial.end());
    std::vector<StateId> todo(a.initial.begin(), a.initial.end());
    while (!todo.empty()) {
        const StateId q = todo.back();
        todo.pop_back();
        std::vector<Label> out;
        for (const auto& t : a.transitions)
            if (t.from == q) {
                out.push_back(t.label);
                if (seen.insert(t.to).second)
                    todo.push_back(t.to);
            }
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j)
                if (out[i].is_var() || out[j].is_var() || out[i] == out[j])
                    return false;
    }
    return true;
}

/// Closed forms of the two example languages.
inline bool doubled_pairs(const Word& w)
{
    if (w.size() % 2)
        return false;
    for (std::size_t i = 0; i < w.size(); i += 2)
        if (w[i] != w[i + 1])
            return false;
    return true;
}

inline bool has_repeat(const Word& w)
{
    std::set<Letter> seen;
    for (const auto& l : w)
        if (!seen.insert(l).second)
            return true;
    return false;
}

inline bool subset(const std::set<Word>& a, const std::set<Word>& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline std::vector<Letter> letters(std::initializer_list<const char*> xs)
{
    std::vector<Letter> out;
    for (const char* x : xs)
        out.emplace_back(x);
    return out;
}

/// {uv : u in a, v in b, |uv| <= max_len}.
inline std::set<Word> concat_words(const std::set<Word>& a, const std::set<Word>& b, std::size_t max_len)
{
    std::set<Word> out;
    for (const auto& u : a)
        for (const auto& v : b)
            if (u.size() + v.size() <= max_len) {
                Word w = u;
                w.insert(w.end(), v.begin(), v.end());
                out.insert(std::move(w));
            }
    return out;
}

/// Concatenations of any number of words of `a`, up to `max_len` letters.
inline std::set<Word> star_words(const std::set<Word>& a, std::size_t max_len)
{
    std::set<Word> out{Word{}};
    std::vector<Word> frontier{Word{}};
    while (!frontier.empty()) {
        std::vector<Word> next;
        for (const auto& u : frontier)
            for (const auto& v : a) {
                if (v.empty() || u.size() + v.size() > max_len)
                    continue;
                Word w = u;
                w.insert(w.end(), v.begin(), v.end());
                if (out.insert(w).second)
                    next.push_back(std::move(w));
            }
        frontier = std::move(next);
    }
    return out;
}

inline std::set<Word> set_union(const std::set<Word>& a, const std::set<Word>& b)
{
    std::set<Word> out = a;
    out.insert(b.begin(), b.end());
    return out;
}

inline std::set<Word> set_intersection(const std::set<Word>& a, const std::set<Word>& b)
{
    std::set<Word> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

}  // namespace fva::oracle

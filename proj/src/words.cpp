#include "fva/words.hpp"

#include <sstream>
#include <unordered_set>

#include "fva/indexed.hpp"

namespace fva {

using detail::Config;
using detail::IndexedAutomaton;
using detail::LetterTable;

namespace {

Configuration to_configuration(const IndexedAutomaton& ia, const LetterTable& letters, const Config& c)
{
    Configuration out{ia.state_names[c.state], {}};
    for (std::size_t i = 0; i < c.mem.size(); ++i)
        if (c.mem[i] != detail::kFree)
            out.memory.emplace(ia.vars[i], letters.at(c.mem[i]));
    return out;
}

Config from_configuration(const IndexedAutomaton& ia, LetterTable& letters, const Configuration& c)
{
    Config out{ia.state_index.at(c.state), ia.empty_memory()};
    for (const auto& [x, l] : c.memory)
        out.mem[ia.var_index.at(x)] = letters.intern(l);
    return out;
}

struct SearchKey {
    std::size_t pos;
    Config config;
    friend bool operator==(const SearchKey&, const SearchKey&) = default;
};

struct SearchKeyHash {
    std::size_t operator()(const SearchKey& k) const noexcept
    {
        return detail::ConfigHash{}(k.config) * 31u + k.pos;
    }
};

// Reachability of (|w|, accepting) in the graph of (position, configuration).
class MembershipSearch {
public:
    MembershipSearch(const IndexedAutomaton& ia, std::vector<int> word) : ia_(ia), word_(std::move(word)) {}

    bool run(std::vector<std::pair<int, Config>>& path)
    {
        for (int q : ia_.initial_list) {
            Config c{q, ia_.empty_memory()};
            path.clear();
            path.emplace_back(-2, c);
            if (dfs(0, c, path))
                return true;
        }
        return false;
    }

private:
    // path entries: (letter id consumed, or -1 for epsilon, -2 for start; config)
    bool dfs(std::size_t pos, Config c, std::vector<std::pair<int, Config>>& path)
    {
        if (!visited_.insert(SearchKey{pos, c}).second)
            return false;
        if (pos == word_.size() && ia_.accepting[c.state])
            return true;
        detail::Memory mem;
        for (int eid : ia_.out[c.state]) {
            const detail::Edge& e = ia_.edges[eid];
            if (e.is_eps()) {
                Config next{e.to, c.mem};
                detail::release(next.mem, ia_.refresh[e.to]);
                path.emplace_back(-1, next);
                if (dfs(pos, next, path))
                    return true;
                path.pop_back();
                continue;
            }
            if (pos == word_.size())
                continue;
            if (!detail::fire(ia_, e, c.mem, word_[pos], mem))
                continue;
            Config next{e.to, mem};
            path.emplace_back(word_[pos], next);
            if (dfs(pos + 1, std::move(next), path))
                return true;
            path.pop_back();
        }
        return false;
    }

    const IndexedAutomaton& ia_;
    std::vector<int> word_;
    std::unordered_set<SearchKey, SearchKeyHash> visited_;
};

template <class A>
MembershipResult membership_impl(const A& a, const Word& w)
{
    LetterTable letters;
    IndexedAutomaton ia = detail::index_automaton(a, letters);
    std::vector<int> ids;
    ids.reserve(w.size());
    for (const auto& l : w)
        ids.push_back(letters.intern(l));
    MembershipSearch search(ia, std::move(ids));
    std::vector<std::pair<int, Config>> path;
    MembershipResult result;
    if (!search.run(path))
        return result;
    result.accepted = true;
    Run run;
    run.start = to_configuration(ia, letters, path.front().second);
    for (std::size_t i = 1; i < path.size(); ++i) {
        RunStep step;
        if (path[i].first >= 0)
            step.consumed = letters.at(path[i].first);
        step.config = to_configuration(ia, letters, path[i].second);
        run.steps.push_back(std::move(step));
    }
    result.witness = std::move(run);
    return result;
}

template <class A>
std::set<Word> sample_impl(const A& a, const std::vector<Letter>& pool, std::size_t max_len)
{
    LetterTable letters;
    IndexedAutomaton ia = detail::index_automaton(a, letters);
    std::vector<int> pool_ids;
    for (const auto& l : pool)
        pool_ids.push_back(letters.intern(l));

    std::set<Word> out;
    Word prefix;
    auto rec = [&](auto&& self, const std::vector<Config>& configs) -> void {
        for (const Config& c : configs)
            if (ia.accepting[c.state]) {
                out.insert(prefix);
                break;
            }
        if (prefix.size() == max_len)
            return;
        for (std::size_t i = 0; i < pool_ids.size(); ++i) {
            std::vector<Config> next = detail::step_set(ia, configs, pool_ids[i]);
            if (next.empty())
                continue;
            prefix.push_back(pool[i]);
            self(self, next);
            prefix.pop_back();
        }
    };
    std::vector<Config> start = detail::initial_configs(ia);
    if (!start.empty())
        rec(rec, start);
    return out;
}

template <class A>
bool nonempty_impl(const A& a)
{
    std::multimap<StateId, StateId> edges;
    for (const auto& t : a.transitions)
        edges.emplace(t.from, t.to);
    std::set<StateId> seen = a.initial;
    std::vector<StateId> stack(a.initial.begin(), a.initial.end());
    while (!stack.empty()) {
        StateId s = std::move(stack.back());
        stack.pop_back();
        if (a.accepting.contains(s))
            return true;
        auto [lo, hi] = edges.equal_range(s);
        for (auto it = lo; it != hi; ++it)
            if (seen.insert(it->second).second)
                stack.push_back(it->second);
    }
    return false;
}

}  // namespace

std::set<Configuration> step(const Automaton& a, const Configuration& c, const Letter& letter)
{
    LetterTable letters;
    IndexedAutomaton ia = detail::index_automaton(a, letters);
    const int lid = letters.intern(letter);
    Config from = from_configuration(ia, letters, c);
    std::set<Configuration> out;
    detail::Memory mem;
    for (int eid : ia.out[from.state]) {
        const detail::Edge& e = ia.edges[eid];
        if (detail::fire(ia, e, from.mem, lid, mem))
            out.insert(to_configuration(ia, letters, Config{e.to, mem}));
    }
    return out;
}

MembershipResult membership(const Automaton& a, const Word& w) { return membership_impl(a, w); }

MembershipResult membership_n(const MultiAutomaton& a, const Word& w) { return membership_impl(a, w); }

bool replay_run(const Automaton& a, const Word& w, const Run& run)
{
    if (!a.initial.contains(run.start.state) || !run.start.memory.empty())
        return false;
    Configuration cur = run.start;
    std::size_t pos = 0;
    for (const RunStep& s : run.steps) {
        if (s.consumed) {
            if (pos >= w.size() || w[pos] != *s.consumed)
                return false;
            if (!step(a, cur, *s.consumed).contains(s.config))
                return false;
            ++pos;
        } else {
            bool ok = false;
            for (const auto& t : a.transitions) {
                if (t.from != cur.state || !t.label.is_eps() || t.to != s.config.state)
                    continue;
                Memory m = cur.memory;
                for (const auto& x : a.refreshed_at(t.to))
                    m.erase(x);
                ok = ok || m == s.config.memory;
            }
            if (!ok)
                return false;
        }
        cur = s.config;
    }
    return pos == w.size() && a.accepting.contains(cur.state);
}

bool nonempty(const Automaton& a) { return nonempty_impl(a); }
bool nonempty(const MultiAutomaton& a) { return nonempty_impl(a); }

std::set<Word> sample_language(const Automaton& a, const std::vector<Letter>& pool, std::size_t max_len)
{
    return sample_impl(a, pool, max_len);
}

std::set<Word> sample_language(const MultiAutomaton& a, const std::vector<Letter>& pool,
                               std::size_t max_len)
{
    return sample_impl(a, pool, max_len);
}

std::vector<Letter> default_pool(const Automaton& a, std::size_t extra)
{
    std::set<Letter> used = a.letters();
    std::vector<Letter> pool(used.begin(), used.end());
    for (auto& l : mint_letters(used, a.variables.size() + 1 + extra))
        pool.push_back(std::move(l));
    return pool;
}

Word parse_word(const std::string& text)
{
    std::istringstream in(text);
    Word w;
    std::string tok;
    while (in >> tok) {
        if (tok == kEmptyWordToken)
            continue;
        if (!is_valid_letter_symbol(tok))
            throw Error("invalid letter '" + tok + "' in word");
        w.emplace_back(tok);
    }
    return w;
}

std::string format_word(const Word& w)
{
    if (w.empty())
        return kEmptyWordToken;
    std::string out;
    for (const auto& l : w)
        out += (out.empty() ? "" : " ") + l.str();
    return out;
}

}  // namespace fva

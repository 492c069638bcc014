#pragma once

// Integer-indexed views of automata used by the search and game engines.
// Not part of the stable surface.

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "fva/core.hpp"

namespace fva::detail {

using VarMask = std::uint64_t;
inline constexpr int kFree = -1;
inline constexpr std::size_t kMaxVariables = 64;

class LetterTable {
public:
    int intern(const Letter& l);
    /// -1 when absent.
    int find(const Letter& l) const;
    const Letter& at(int id) const { return letters_.at(static_cast<std::size_t>(id)); }
    std::size_t size() const noexcept { return letters_.size(); }

private:
    std::map<Letter, int> ids_;
    std::vector<Letter> letters_;
};

struct Atom {
    enum class Kind : std::uint8_t { letter, var, eps };
    Kind kind;
    int id;  // letter id or variable index

    bool is_letter() const { return kind == Kind::letter; }
    bool is_var() const { return kind == Kind::var; }
    bool is_eps() const { return kind == Kind::eps; }
};

struct Edge {
    int from;
    int to;
    Polarity polarity;
    std::vector<Atom> atoms;  // arity components; a single eps atom for epsilon edges
    bool is_eps() const { return atoms.size() == 1 && atoms[0].is_eps(); }
};

/// Memory: for each variable index either kFree or a letter id.
using Memory = std::vector<int>;

struct IndexedAutomaton {
    std::vector<StateId> state_names;
    std::map<StateId, int> state_index;
    std::vector<Variable> vars;
    std::map<Variable, int> var_index;
    std::vector<char> initial;
    std::vector<char> accepting;
    std::vector<int> initial_list;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> out;  // edge ids per source, canonical label order
    std::vector<VarMask> refresh;       // variables released on entry to each state
    std::size_t arity = 1;
    bool has_eps = false;

    std::size_t num_states() const { return state_names.size(); }
    std::size_t num_vars() const { return vars.size(); }
    Memory empty_memory() const { return Memory(vars.size(), kFree); }
};

IndexedAutomaton index_automaton(const Automaton& a, LetterTable& letters);
IndexedAutomaton index_automaton(const MultiAutomaton& a, LetterTable& letters);

inline void release(Memory& m, VarMask mask)
{
    for (std::size_t i = 0; mask != 0; ++i, mask >>= 1)
        if (mask & 1)
            m[i] = kFree;
}

/// Fires `e` from memory `m` on input letter `letter`. On success writes the
/// post-memory (refresh at the target applied) into `out`.
bool fire(const IndexedAutomaton& a, const Edge& e, const Memory& m, int letter, Memory& out);

struct Config {
    int state;
    Memory mem;

    friend bool operator==(const Config&, const Config&) = default;
    friend auto operator<=>(const Config&, const Config&) = default;
};

struct ConfigHash {
    std::size_t operator()(const Config& c) const noexcept
    {
        std::size_t h = std::hash<int>{}(c.state);
        for (int v : c.mem)
            h = h * 1000003u ^ std::hash<int>{}(v + 7);
        return h;
    }
};

/// Epsilon-closure of a configuration set (sorted, unique on return).
void eps_close(const IndexedAutomaton& a, std::vector<Config>& configs);

/// One letter step from a configuration set, epsilon-closure included.
std::vector<Config> step_set(const IndexedAutomaton& a, const std::vector<Config>& configs, int letter);

/// Initial configuration set (closed).
std::vector<Config> initial_configs(const IndexedAutomaton& a);

}  // namespace fva::detail

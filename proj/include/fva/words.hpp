#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fva/core.hpp"

namespace fva {

/// Partial assignment of variables to letters.
using Memory = std::map<Variable, Letter>;

struct Configuration {
    StateId state;
    Memory memory;

    friend bool operator==(const Configuration&, const Configuration&) = default;
    friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

struct RunStep {
    std::optional<Letter> consumed;  // empty for an epsilon move
    Configuration config;
};

struct Run {
    Configuration start;
    std::vector<RunStep> steps;
};

struct MembershipResult {
    bool accepted = false;
    std::optional<Run> witness;

    explicit operator bool() const noexcept { return accepted; }
};

/// Successors of `c` on one letter through non-epsilon transitions.
std::set<Configuration> step(const Automaton& a, const Configuration& c, const Letter& letter);

/// Depth-first search over (position, configuration); the witness is the
/// first accepting run in canonical label order.
MembershipResult membership(const Automaton& a, const Word& w);
MembershipResult membership_n(const MultiAutomaton& a, const Word& w);

/// Checks that `run` is a run of `a` on `w` that starts empty in an initial
/// state, ends accepting and follows the transition relation step by step.
bool replay_run(const Automaton& a, const Word& w, const Run& run);

/// Label-blind reachability from an initial to an accepting state.
bool nonempty(const Automaton& a);
bool nonempty(const MultiAutomaton& a);

/// Exactly the words over `pool` of length <= max_len that are accepted.
std::set<Word> sample_language(const Automaton& a, const std::vector<Letter>& pool, std::size_t max_len);
std::set<Word> sample_language(const MultiAutomaton& a, const std::vector<Letter>& pool,
                               std::size_t max_len);

/// Letters of `a` plus |X|+1+extra minted letters.
std::vector<Letter> default_pool(const Automaton& a, std::size_t extra = 0);

/// Whitespace separated letters; `@empty` is the empty word.
Word parse_word(const std::string& text);
std::string format_word(const Word& w);

}  // namespace fva

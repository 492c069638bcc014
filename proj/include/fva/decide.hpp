#pragma once

#include <cstddef>
#include <optional>

#include "fva/core.hpp"

namespace fva {

struct UniversalityResult {
    bool universal = false;
    /// When not universal: a length n such that any word of n pairwise
    /// distinct letters outside the automaton's letters is rejected.
    std::optional<std::size_t> rejected_length;
    /// Distinct subsets of free-variable states explored.
    std::size_t explored = 0;

    explicit operator bool() const noexcept { return universal; }
};

/// L(a) = all words. Tracks which variables are free, keeps only moves on
/// free variables, and runs the resulting one-letter automaton until its
/// subset sequence either loses acceptance or repeats.
UniversalityResult universal(const Automaton& a);

/// A word on which `a` is certainly rejected when `r` reports non-universal.
Word rejected_word(const Automaton& a, const UniversalityResult& r);

struct DeterminismResult {
    bool deterministic = true;
    std::optional<StateId> offender;  // an accessible state with conflicting transitions
    std::string reason;

    explicit operator bool() const noexcept { return deterministic; }
};

/// At most one run per word: one initial state, and no accessible state
/// with two outgoing transitions on the same letter or with a variable
/// transition beside another transition.
DeterminismResult is_deterministic(const Automaton& a);

/// Universality for deterministic automata by walking the unique lasso of
/// variable transitions. Throws NotDeterministic.
bool dfva_universal(const Automaton& d);

struct SimulationOptions {
    /// Letters offered to the attacker on top of the automata's letters and
    /// the minted fresh ones.
    std::size_t extra_letters = 0;
    std::size_t position_cap = 1'000'000;
};

struct SimulationResult {
    bool simulates = false;
    std::size_t positions = 0;
    std::size_t pool_size = 0;

    explicit operator bool() const noexcept { return simulates; }
};

/// Whether b simulates a: a safety game in which the attacker moves a on a
/// letter from a finite pool and the defender answers with b on the same
/// letter; an accepting a-state must be matched by an accepting b-state.
SimulationResult fva_simulates(const Automaton& a, const Automaton& b, const SimulationOptions& options = {});

/// L(a) ⊆ L(d) for deterministic d, decided as simulation of trim(a) by d.
/// Throws NotDeterministic.
bool contains_dfva(const Automaton& a, const Automaton& d, const SimulationOptions& options = {});

enum class ContainmentDirection { fva_in_fa, fa_in_fva };

/// Containment between an FVA and a finite automaton `f` (no variables).
/// Throws NotFiniteAutomaton.
bool fa_containment(const Automaton& a, const Automaton& f, ContainmentDirection direction);

/// Minted letters used as attacker choices beyond the automata's letters:
/// one per ordered variable pair across the two sides, one per variable,
/// and one more, so a letter unseen by both memories is always available.
std::vector<Letter> pair_letters(const std::set<Variable>& xs, const std::set<Variable>& ys,
                                 const std::set<Letter>& used);

}  // namespace fva

#pragma once

#include <cstddef>

#include "fva/core.hpp"

namespace fva {

// Closure constructions. Inputs are validated; binary operations rename
// variables apart and prefix states with `1.` / `2.` before combining.

/// Disjoint union.
Automaton union_of(const Automaton& a, const Automaton& b);

/// a's accepting states are wired to b's initial states by epsilon, then
/// the epsilon transitions are eliminated.
Automaton concat(const Automaton& a, const Automaton& b);

/// Kleene star. A fresh seam state is initial and accepting, leads to the
/// initial states by epsilon and is reached from accepting states by
/// epsilon; every variable is refreshed at the seam so no binding survives
/// from one iteration to the next.
Automaton star(const Automaton& a);

struct EliminationStats {
    std::size_t result_states = 0;
    std::size_t state_bound = 0;  // |Q| * 2^|X|
};

/// Removes epsilon transitions. A non-epsilon transition p -a-> q followed by
/// an epsilon path q ~> r is replaced by p -a-> (r, R) where R is every
/// variable refreshed along the path; (r, R) behaves as r but releases R.
Automaton eliminate_eps(const Automaton& e, EliminationStats* stats = nullptr);

/// Cartesian product as a 2-FVA; a pair refreshes a variable when its
/// component does. Only pairs reachable from initial pairs are built.
MultiAutomaton product2(const Automaton& a, const Automaton& b);

struct ReduceOptions {
    std::size_t state_cap = 1'000'000;
};

/// n-FVA to FVA. States pair an n-FVA state with a partition map from
/// variables to classes 1..|Sigma_A|+|X| (letter classes first), extended
/// lazily: a variable gets a class when it is first read and loses it when
/// refreshed. A tuple fires when all its components agree on one class; the
/// FVA reads the class letter or the class variable `k<i>`, which is
/// refreshed wherever its class is empty.
Automaton reduce_nfva(const MultiAutomaton& a, const ReduceOptions& options = {});

/// trim(reduce_nfva(product2(a, b))).
Automaton intersect(const Automaton& a, const Automaton& b, const ReduceOptions& options = {});

}  // namespace fva

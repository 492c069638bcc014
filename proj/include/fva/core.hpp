#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fva {

/// Reserved tokens of the external format.
inline constexpr const char* kEpsilonToken = "@eps";
inline constexpr const char* kEmptyWordToken = "@empty";

/// A letter of the infinite alphabet. The universe of letters is all
/// non-empty whitespace-free strings that do not collide with the reserved
/// tokens or the `$` variable prefix.
class Letter {
public:
    Letter() = default;
    explicit Letter(std::string symbol) : symbol_(std::move(symbol)) {}

    const std::string& str() const noexcept { return symbol_; }

    friend bool operator==(const Letter&, const Letter&) = default;
    friend auto operator<=>(const Letter&, const Letter&) = default;

private:
    std::string symbol_;
};

/// A variable name. Serialized with a `$` prefix; stored without it.
class Variable {
public:
    Variable() = default;
    explicit Variable(std::string name) : name_(std::move(name)) {}

    const std::string& str() const noexcept { return name_; }

    friend bool operator==(const Variable&, const Variable&) = default;
    friend auto operator<=>(const Variable&, const Variable&) = default;

private:
    std::string name_;
};

struct Epsilon {
    friend bool operator==(const Epsilon&, const Epsilon&) = default;
    friend auto operator<=>(const Epsilon&, const Epsilon&) = default;
};

using StateId = std::string;
using Word = std::vector<Letter>;

enum class Polarity { none, send, recv };

const char* polarity_symbol(Polarity p);

/// A transition annotation. The alternative order (letter, variable, epsilon)
/// is also the canonical tie-breaking order used by witness search.
class Label {
public:
    using Atom = std::variant<Letter, Variable, Epsilon>;

    Label() : atom_(Epsilon{}) {}
    Label(Atom atom, Polarity polarity = Polarity::none)
        : atom_(std::move(atom)), polarity_(polarity) {}

    static Label letter(std::string s, Polarity p = Polarity::none) { return {Letter(std::move(s)), p}; }
    static Label var(std::string s, Polarity p = Polarity::none) { return {Variable(std::move(s)), p}; }
    static Label eps() { return {Epsilon{}, Polarity::none}; }
    static Label send(Atom a) { return {std::move(a), Polarity::send}; }
    static Label recv(Atom a) { return {std::move(a), Polarity::recv}; }

    const Atom& atom() const noexcept { return atom_; }
    Polarity polarity() const noexcept { return polarity_; }

    bool is_letter() const noexcept { return std::holds_alternative<Letter>(atom_); }
    bool is_var() const noexcept { return std::holds_alternative<Variable>(atom_); }
    bool is_eps() const noexcept { return std::holds_alternative<Epsilon>(atom_); }
    const Letter& as_letter() const { return std::get<Letter>(atom_); }
    const Variable& as_var() const { return std::get<Variable>(atom_); }

    /// Human-readable form: `a`, `$x`, `@eps`, prefixed with `!`/`?` if polarized.
    std::string to_string() const;

    friend bool operator==(const Label&, const Label&) = default;
    friend auto operator<=>(const Label&, const Label&) = default;

private:
    Atom atom_;
    Polarity polarity_ = Polarity::none;
};

struct Transition {
    StateId from;
    Label label;
    StateId to;

    friend bool operator==(const Transition&, const Transition&) = default;
    friend auto operator<=>(const Transition&, const Transition&) = default;
};

enum class AutomatonType { fva, cfva, eps_fva };

const char* type_name(AutomatonType t);

/// An FVA, a communicating FVA or an FVA with epsilon transitions,
/// distinguished by `type`. Values are plain data; constructions return new
/// automata.
struct Automaton {
    AutomatonType type = AutomatonType::fva;
    std::set<Variable> variables;
    std::set<StateId> states;
    std::set<StateId> initial;
    std::set<StateId> accepting;
    std::set<Transition> transitions;
    /// The refreshing function: variable -> states where it is released.
    std::map<Variable, std::set<StateId>> refresh;

    /// Letters occurring on transitions.
    std::set<Letter> letters() const;
    /// Variables refreshed on entry to `state`.
    std::set<Variable> refreshed_at(const StateId& state) const;

    void add_transition(StateId from, Label label, StateId to);

    friend bool operator==(const Automaton&, const Automaton&) = default;
};

using Fva = Automaton;
using Cfva = Automaton;
using EpsFva = Automaton;

struct MultiTransition {
    StateId from;
    std::vector<Label> labels;
    StateId to;

    friend bool operator==(const MultiTransition&, const MultiTransition&) = default;
    friend auto operator<=>(const MultiTransition&, const MultiTransition&) = default;
};

/// n-FVA: every transition reads an n-tuple of labels that must all denote
/// the input letter under one substitution.
struct MultiAutomaton {
    std::size_t arity = 1;
    std::set<Variable> variables;
    std::set<StateId> states;
    std::set<StateId> initial;
    std::set<StateId> accepting;
    std::set<MultiTransition> transitions;
    std::map<Variable, std::set<StateId>> refresh;

    std::set<Letter> letters() const;

    friend bool operator==(const MultiAutomaton&, const MultiAutomaton&) = default;
};

using NFva = MultiAutomaton;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotDeterministic : public Error {
public:
    explicit NotDeterministic(const std::string& state)
        : Error("automaton is not deterministic (offending state '" + state + "')"), state_(state) {}
    const std::string& state() const noexcept { return state_; }

private:
    std::string state_;
};

class NotFiniteAutomaton : public Error {
public:
    NotFiniteAutomaton() : Error("expected a finite automaton (no variables)") {}
};

/// A configurable size cap was hit.
class CapExceeded : public Error {
public:
    CapExceeded(std::string cap, std::size_t limit)
        : Error("cap '" + cap + "' exceeded (limit " + std::to_string(limit) + ")"),
          cap_(std::move(cap)), limit_(limit) {}
    const std::string& cap() const noexcept { return cap_; }
    std::size_t limit() const noexcept { return limit_; }

private:
    std::string cap_;
    std::size_t limit_;
};

class InvalidAutomaton : public Error {
public:
    explicit InvalidAutomaton(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

// ---------------------------------------------------------------------------
// Validation and variable hygiene

bool is_valid_letter_symbol(const std::string& s);
bool is_valid_token(const std::string& s);

/// Every definitional violation, each naming the offending element.
std::vector<std::string> validate(const Automaton& a);
std::vector<std::string> validate(const MultiAutomaton& a);

/// Throws InvalidAutomaton when validate() reports anything.
void require_valid(const Automaton& a);
void require_valid(const MultiAutomaton& a);

/// A letter not in `used`: the first of `#f0, #f1, ...` that is free.
Letter mint_letter(const std::set<Letter>& used);
/// `count` distinct letters outside `used`.
std::vector<Letter> mint_letters(const std::set<Letter>& used, std::size_t count);

/// Renames variables of `a` according to `mapping` (unmapped ones are kept).
Automaton rename_variables(const Automaton& a, const std::map<Variable, Variable>& mapping);
MultiAutomaton rename_variables(const MultiAutomaton& a, const std::map<Variable, Variable>& mapping);

/// Copies of `a` and `b` with disjoint variable sets. `a` is never touched;
/// clashing variables of `b` get primed names.
std::pair<Automaton, Automaton> rename_apart(const Automaton& a, const Automaton& b);

/// Prefixes every state id of `a`.
Automaton prefix_states(const Automaton& a, const std::string& prefix);

/// Restriction to states that are reachable from an initial state and reach
/// an accepting state, ignoring label semantics.
Automaton trim(const Automaton& a);

/// Label-blind reachability from the initial states.
std::set<StateId> accessible_states(const Automaton& a);

}  // namespace fva

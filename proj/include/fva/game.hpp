#pragma once

// The ground-simulation game between a client CFVA and a service CFVA,
// with substitutions drawn from a finite letter pool.

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fva/arena.hpp"
#include "fva/core.hpp"

namespace fva {

/// Ground substitution: variables bound to letters.
using Substitution = std::map<Variable, Letter>;

struct GamePosition {
    enum class Kind { abelard, eloise, relay };
    Kind kind = Kind::abelard;
    StateId client_state;
    Substitution client;
    StateId service_state;
    Substitution service;
    /// Eloise positions: the substitution and polarized label of the request.
    Substitution pending;
    std::optional<Label> request;

    /// Stable textual key, e.g. `A|p0{}|q0{x=a}`.
    std::string key() const;

    friend bool operator==(const GamePosition&, const GamePosition&) = default;
    friend auto operator<=>(const GamePosition&, const GamePosition&) = default;
};

struct GameMove {
    enum class Kind {
        client_receive,  // the client takes ?a; Eloise must send
        client_send,     // the client sends !a, free variables instantiated
        match_send,      // Eloise receives the client's message in the service
        match_receive,   // Eloise sends from the service to the client
        sync,            // two service components exchange a message internally
        relay,           // the step into a marked client move
    };
    Kind kind;
    std::optional<Transition> client;
    std::optional<Transition> service;
    std::optional<Transition> service_peer;  // receiving side of a sync
    std::optional<Letter> value;             // the letter that travels

    friend bool operator==(const GameMove&, const GameMove&) = default;
    friend auto operator<=>(const GameMove&, const GameMove&) = default;
};

const char* move_kind_name(GameMove::Kind k);

struct GameOptions {
    std::size_t pool_extra = 0;
    std::size_t position_cap = 1'000'000;
    /// Component index of each service transition; required by the two
    /// variants below.
    std::map<Transition, int> component_of;
    /// While a request is pending, Eloise may let two different components
    /// exchange one message.
    bool internal_sync = false;
    /// Eloise moves on transitions of this component pass through a fresh
    /// Abelard position that is marked for the Büchi condition.
    std::optional<int> monitored_component;
};

class Game {
public:
    /// Builds every position reachable from the initial Abelard position.
    /// Throws InvalidAutomaton, or CapExceeded("game.position_cap").
    static Game build(const Cfva& client, const Cfva& service, const GameOptions& options = {});

    const Arena& arena() const { return arena_; }
    std::size_t size() const { return arena_.size(); }
    int initial() const { return 0; }
    const GamePosition& position(int id) const { return positions_.at(static_cast<std::size_t>(id)); }
    /// Parallel to arena().succ[id].
    const std::vector<GameMove>& moves(int id) const { return moves_.at(static_cast<std::size_t>(id)); }
    const std::vector<Letter>& pool() const { return pool_; }
    /// The renamed-apart automata the game was built on.
    const Cfva& client() const { return client_; }
    const Cfva& service() const { return service_; }
    /// Positions marked for the Büchi condition: relay positions when a
    /// component is monitored, otherwise every Abelard position.
    const std::vector<char>& marked() const { return marked_; }
    /// -1 when absent.
    int find(const std::string& key) const;

private:
    Arena arena_;
    std::vector<GamePosition> positions_;
    std::vector<std::vector<GameMove>> moves_;
    std::vector<Letter> pool_;
    Cfva client_;
    Cfva service_;
    std::vector<char> marked_;
    std::map<std::string, int> by_key_;
    friend class GameBuilder;
};

/// Eloise's chosen move at one position.
struct StrategyEntry {
    int position;
    int move;  // index into Game::moves(position)
};

struct GameSolution {
    bool eloise_wins = false;
    /// Eloise positions reachable when she follows her strategy, in
    /// canonical position order; empty when she loses.
    std::vector<StrategyEntry> strategy;
    /// When Abelard wins: a play from the start along which Eloise is
    /// stranded (safety) or kept away from marked positions (Büchi, ending
    /// where a position repeats). Pairs of (position, move index).
    std::vector<StrategyEntry> refusal;
    /// Per position: the move Eloise's strategy or Abelard's refutation
    /// takes there, -1 when unused.
    std::vector<int> choice;
    std::vector<char> eloise_region;
};

enum class WinningCondition { safety, buchi };

GameSolution solve(const Game& g, WinningCondition condition = WinningCondition::safety);

struct GsimResult {
    bool simulates = false;
    std::shared_ptr<const Game> game;
    GameSolution solution;

    explicit operator bool() const noexcept { return simulates; }
};

/// client ⪯ service.
GsimResult gsimulates(const Cfva& client, const Cfva& service, const GameOptions& options = {},
                      WinningCondition condition = WinningCondition::safety);

/// The relay CFVA used to observe a whole community: p0 -?x-> p1 -!x-> p0
/// and p0 -!x-> p2 -?x-> p0, with x refreshed at p0.
Cfva monitor_cfva();

}  // namespace fva

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fva/core.hpp"
#include "fva/game.hpp"

namespace fva {

struct Product {
    Cfva automaton;
    /// Components whose move a product transition is; a transition can stand
    /// for moves of several components when their labels coincide.
    std::map<Transition, std::set<std::size_t>> components;
    std::size_t arity = 0;
};

/// Interleaving product: states are tuples `(q1,q2,...)`, exactly one
/// coordinate moves per transition, and a component variable is refreshed at
/// every tuple whose coordinate refreshes it. Variables must already be
/// disjoint. An empty list gives the one-state product `()` with no moves.
/// Throws CapExceeded("product.state_cap").
Product async_product(const std::vector<Cfva>& services, std::size_t state_cap = 100'000);

/// Copies of the client and the services with pairwise disjoint variables;
/// the client keeps its names.
std::pair<Cfva, std::vector<Cfva>> separate_variables(const Cfva& client, const std::vector<Cfva>& services);

/// Flattens a message `tag(arg, ...)` into consecutive transitions through
/// fresh intermediate states: the tag letter, then each argument, all with
/// the message's polarity. Intermediate states are named `from~tag~to.k`
/// and, like every CFVA state, accepting.
void add_message(Cfva& a, const StateId& from, Polarity polarity, const std::string& tag,
                 const std::vector<Label::Atom>& args, const StateId& to);

struct OrchestratorEntry {
    GamePosition position;
    GameMove move;
    std::optional<std::size_t> component;  // service answering, if any
};

struct Orchestrator {
    Cfva client;
    std::vector<Cfva> services;
    std::vector<std::string> service_names;  // for reports; `service<i>` by default
    Product product;
    std::vector<Letter> pool;
    std::size_t pool_extra = 0;
    std::vector<OrchestratorEntry> entries;
    std::size_t positions = 0;
};

struct RefusalStep {
    GamePosition position;
    GameMove move;
};

struct Refusal {
    /// The play Abelard forces; the client moves along it form the losing
    /// client path, and it ends at a position where Eloise cannot answer.
    std::vector<RefusalStep> play;
    std::vector<std::string> client_path;
    GamePosition stuck;
    std::size_t positions = 0;
};

struct SynthesisResult {
    std::optional<Orchestrator> orchestrator;
    std::optional<Refusal> refusal;

    explicit operator bool() const noexcept { return orchestrator.has_value(); }
};

/// client ⪯ async_product(services), with the winning strategy turned into
/// a delegation table or the losing play turned into a refusal.
SynthesisResult synthesize(const Cfva& client, const std::vector<Cfva>& services, const GameOptions& options = {});

nlohmann::json position_to_json(const GamePosition& p);
nlohmann::json move_to_json(const GameMove& m);
nlohmann::json to_json(const Orchestrator& o);
nlohmann::json to_json(const Refusal& r);
Orchestrator orchestrator_from_json(const nlohmann::json& j);

/// One client message of a session: polarity (optional), tag and arguments.
struct TraceMessage {
    std::optional<Polarity> polarity;
    Letter tag;
    std::vector<Letter> args;
    std::string text;
};

/// `!Create_Cart(c1)`, `?Fail`, `Search(i1)`; blank lines and `#` comments
/// are skipped.
std::vector<TraceMessage> parse_trace(const std::string& text);

struct Delegation {
    std::size_t step;  // 1-based message index
    std::string message;
    /// Service answering each primitive step of the message, in order.
    std::vector<std::size_t> components;
    std::vector<Transition> transitions;
};

class TraceDiverged : public Error {
public:
    TraceDiverged(std::size_t step, std::string position, const std::string& why)
        : Error("trace diverged at step " + std::to_string(step) + ": " + why + " (position " + position + ")"),
          step_(step), position_(std::move(position)) {}
    std::size_t step() const noexcept { return step_; }
    const std::string& position() const noexcept { return position_; }

private:
    std::size_t step_;
    std::string position_;
};

/// Executes an orchestrator on a concrete client session. Concrete letters
/// outside the automata are mapped onto the game's spare pool letters as
/// they appear. Throws TraceDiverged.
class Replayer {
public:
    explicit Replayer(const Orchestrator& o);
    std::vector<Delegation> run(const std::vector<TraceMessage>& trace) const;
    const Game& game() const { return game_; }
    /// Index of Eloise's move at `position`, -1 outside the strategy.
    int strategy_at(int position) const
    {
        auto it = strategy_.find(position);
        return it == strategy_.end() ? -1 : it->second;
    }

private:
    Orchestrator orchestrator_;
    Game game_;
    std::map<int, int> strategy_;  // Eloise position -> move index
};

std::vector<Delegation> replay(const Orchestrator& o, const std::vector<TraceMessage>& trace);

}  // namespace fva

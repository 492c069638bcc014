#pragma once

// Explicit two-player game graphs and their solvers. A player who cannot
// move loses; infinite plays are decided by the winning condition.

#include <cstdint>
#include <vector>

namespace fva {

enum class Player : std::uint8_t { eloise, abelard };

inline Player opponent(Player p) { return p == Player::eloise ? Player::abelard : Player::eloise; }

struct Arena {
    std::vector<Player> owner;
    /// Successors in the order the caller considers canonical; strategies
    /// prefer earlier entries.
    std::vector<std::vector<int>> succ;
    std::vector<std::vector<int>> pred;

    int add_node(Player p);
    void add_edge(int from, int to);
    std::size_t size() const { return owner.size(); }
};

struct Attractor {
    std::vector<char> in;
    /// Round at which a node joined; -1 outside. Every attracted node of the
    /// attracting player has a successor of smaller rank, and every attracted
    /// opponent node has only such successors (within the subgame).
    std::vector<int> rank;
};

/// Nodes from which `p` forces a visit to `target` or strands the opponent,
/// playing inside `within` (all nodes when null).
Attractor attractor(const Arena& g, Player p, const std::vector<char>& target,
                    const std::vector<char>* within = nullptr);

struct Solution {
    std::vector<char> eloise_wins;
    /// For Eloise nodes: the chosen successor while winning. For Abelard nodes
    /// Eloise loses from: a successor that keeps Eloise losing. -1 elsewhere.
    std::vector<int> choice;
    /// Abelard's attractor ranks on his winning region; only meaningful for
    /// safety games, where they bound the length of a refusal.
    std::vector<int> rank;
};

/// Eloise must avoid `bad` forever.
Solution solve_safety(const Arena& g, const std::vector<char>& bad);

/// Eloise must visit `accepting` infinitely often. An accepting node where
/// Eloise is stuck does not count.
Solution solve_buchi(const Arena& g, const std::vector<char>& accepting);

}  // namespace fva

#include "fva/arena.hpp"

#include <deque>

namespace fva {

int Arena::add_node(Player p)
{
    owner.push_back(p);
    succ.emplace_back();
    pred.emplace_back();
    return static_cast<int>(owner.size()) - 1;
}

void Arena::add_edge(int from, int to)
{
    succ[static_cast<std::size_t>(from)].push_back(to);
    pred[static_cast<std::size_t>(to)].push_back(from);
}

Attractor attractor(const Arena& g, Player p, const std::vector<char>& target, const std::vector<char>* within)
{
    const std::size_t n = g.size();
    auto inside = [&](std::size_t v) { return within == nullptr || (*within)[v]; };
    Attractor a{std::vector<char>(n, 0), std::vector<int>(n, -1)};
    std::vector<int> count(n, 0);
    std::deque<int> queue;
    auto add = [&](std::size_t v, int rank) {
        a.in[v] = 1;
        a.rank[v] = rank;
        queue.push_back(static_cast<int>(v));
    };
    for (std::size_t v = 0; v < n; ++v) {
        if (!inside(v))
            continue;
        for (int w : g.succ[v])
            if (inside(static_cast<std::size_t>(w)))
                ++count[v];
        if (target[v] || (g.owner[v] != p && count[v] == 0))
            add(v, 0);
    }
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : g.pred[static_cast<std::size_t>(u)]) {
            const auto vi = static_cast<std::size_t>(v);
            if (!inside(vi) || a.in[vi])
                continue;
            if (g.owner[vi] == p || --count[vi] == 0)
                add(vi, a.rank[static_cast<std::size_t>(u)] + 1);
        }
    }
    return a;
}

namespace {

// Earliest successor satisfying `ok`, preferring the smallest rank when
// ranks are given.
template <class Ok>
int pick(const Arena& g, std::size_t v, Ok ok, const std::vector<int>* rank = nullptr)
{
    int best = -1;
    for (int w : g.succ[v]) {
        if (!ok(static_cast<std::size_t>(w)))
            continue;
        if (best < 0)
            best = w;
        else if (rank && (*rank)[static_cast<std::size_t>(w)] < (*rank)[static_cast<std::size_t>(best)])
            best = w;
        if (!rank)
            break;
    }
    return best;
}

}  // namespace

Solution solve_safety(const Arena& g, const std::vector<char>& bad)
{
    const std::size_t n = g.size();
    Attractor attr = attractor(g, Player::abelard, bad);
    Solution s{std::vector<char>(n, 0), std::vector<int>(n, -1), attr.rank};
    for (std::size_t v = 0; v < n; ++v)
        s.eloise_wins[v] = !attr.in[v];
    for (std::size_t v = 0; v < n; ++v) {
        if (g.owner[v] == Player::eloise)
            s.choice[v] = s.eloise_wins[v] ? pick(g, v, [&](std::size_t w) { return !attr.in[w]; })
                                           : pick(g, v, [](std::size_t) { return true; });
        else if (!s.eloise_wins[v])
            s.choice[v] = pick(g, v, [&](std::size_t w) { return attr.in[w] != 0; }, &attr.rank);
    }
    return s;
}

Solution solve_buchi(const Arena& g, const std::vector<char>& accepting)
{
    const std::size_t n = g.size();
    std::vector<char> goal(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        goal[v] = accepting[v] && !(g.owner[v] == Player::eloise && g.succ[v].empty());

    std::vector<char> alive(n, 1);
    Attractor reach;
    for (;;) {
        std::vector<char> target(n, 0);
        for (std::size_t v = 0; v < n; ++v) {
            bool can_move = g.owner[v] == Player::abelard;
            for (int w : g.succ[v])
                can_move = can_move || alive[static_cast<std::size_t>(w)];
            target[v] = alive[v] && goal[v] && can_move;
        }
        reach = attractor(g, Player::eloise, target, &alive);
        std::vector<char> trap(n, 0);
        bool any = false;
        for (std::size_t v = 0; v < n; ++v) {
            trap[v] = alive[v] && !reach.in[v];
            any = any || trap[v];
        }
        if (!any)
            break;
        Attractor lost = attractor(g, Player::abelard, trap, &alive);
        for (std::size_t v = 0; v < n; ++v)
            if (lost.in[v])
                alive[v] = 0;
    }

    Solution s{alive, std::vector<int>(n, -1), reach.rank};
    for (std::size_t v = 0; v < n; ++v) {
        if (g.owner[v] == Player::eloise) {
            if (!alive[v])
                s.choice[v] = pick(g, v, [](std::size_t) { return true; });
            else if (reach.rank[v] > 0)
                s.choice[v] = pick(g, v, [&](std::size_t w) { return alive[w] && reach.rank[w] < reach.rank[v]; },
                                   &reach.rank);
            else
                s.choice[v] = pick(g, v, [&](std::size_t w) { return alive[w] != 0; });
        } else if (!alive[v]) {
            s.choice[v] = pick(g, v, [&](std::size_t w) { return !alive[w]; });
        }
    }
    return s;
}

}  // namespace fva

#include "fva/game.hpp"

#include <algorithm>
#include <deque>

#include "fva/decide.hpp"
#include "fva/indexed.hpp"

namespace fva {

using detail::Atom;
using detail::IndexedAutomaton;
using detail::LetterTable;
using detail::Memory;

const char* move_kind_name(GameMove::Kind k)
{
    switch (k) {
    case GameMove::Kind::client_receive:
        return "client-receive";
    case GameMove::Kind::client_send:
        return "client-send";
    case GameMove::Kind::match_send:
        return "match-send";
    case GameMove::Kind::match_receive:
        return "match-receive";
    case GameMove::Kind::sync:
        return "sync";
    case GameMove::Kind::relay:
        return "relay";
    }
    return "?";
}

namespace {

std::string subst_text(const Substitution& s)
{
    std::string out = "{";
    bool first = true;
    for (const auto& [x, l] : s) {
        out += (first ? "" : ",") + x.str() + "=" + l.str();
        first = false;
    }
    return out + "}";
}

}  // namespace

std::string GamePosition::key() const
{
    static const char* tags[] = {"A", "E", "R"};
    std::string k = std::string(tags[static_cast<int>(kind)]) + "|" + client_state + subst_text(client) + "|" +
                    service_state + subst_text(service);
    if (request)
        k += "|" + subst_text(pending) + request->to_string();
    return k;
}

int Game::find(const std::string& key) const
{
    auto it = by_key_.find(key);
    return it == by_key_.end() ? -1 : it->second;
}

namespace {

struct RawPosition {
    GamePosition::Kind kind;
    int q1;
    Memory s1;
    int q2;
    Memory s2;
    Memory pending;
    int edge = -1;  // client edge carrying the request

    friend auto operator<=>(const RawPosition&, const RawPosition&) = default;
};

}  // namespace

class GameBuilder {
public:
    GameBuilder(Game& g, const GameOptions& options) : g_(g), options_(options) {}

    void run(const Cfva& client_in, const Cfva& service_in)
    {
        require_valid(client_in);
        require_valid(service_in);
        if (client_in.type != AutomatonType::cfva || service_in.type != AutomatonType::cfva)
            throw Error("the simulation game needs two cfva automata");
        auto [client, service] = rename_apart(client_in, service_in);
        if (!options_.component_of.empty() && service != service_in)
            throw Error("service variables must be disjoint from the client's when components are given");
        g_.client_ = client;
        g_.service_ = service;

        std::set<Letter> used = client.letters();
        for (const auto& l : service.letters())
            used.insert(l);
        std::vector<Letter> pool(used.begin(), used.end());
        for (const auto& l : pair_letters(client.variables, service.variables, used)) {
            used.insert(l);
            pool.push_back(l);
        }
        for (auto& l : mint_letters(used, options_.pool_extra))
            pool.push_back(std::move(l));
        std::sort(pool.begin(), pool.end());
        for (const auto& l : pool)
            pool_ids_.push_back(letters_.intern(l));
        g_.pool_ = pool;

        c_ = detail::index_automaton(client, letters_);
        s_ = detail::index_automaton(service, letters_);
        client_edges_.assign(client.transitions.begin(), client.transitions.end());
        // Eloise positions only depend on the request label; equal labels
        // share the first edge carrying them so their positions coincide.
        for (std::size_t i = 0; i < client_edges_.size(); ++i) {
            std::size_t j = 0;
            while (client_edges_[j].label != client_edges_[i].label)
                ++j;
            request_of_.push_back(static_cast<int>(j));
        }
        service_edges_.assign(service.transitions.begin(), service.transitions.end());
        for (const auto& t : service_edges_) {
            auto it = options_.component_of.find(t);
            component_.push_back(it == options_.component_of.end() ? -1 : it->second);
        }
        if ((options_.internal_sync || options_.monitored_component) && options_.component_of.empty())
            throw Error("component indices are required for the choreography variants");

        node(RawPosition{GamePosition::Kind::abelard, c_.initial_list.front(), c_.empty_memory(),
                         s_.initial_list.front(), s_.empty_memory(), {}, -1});
        while (!work_.empty()) {
            const int id = work_.front();
            work_.pop_front();
            expand(id);
        }
        finish();
    }

private:
    int node(RawPosition p)
    {
        auto it = ids_.find(p);
        if (it != ids_.end())
            return it->second;
        const int id = static_cast<int>(raws_.size());
        if (raws_.size() >= options_.position_cap)
            throw CapExceeded("game.position_cap", options_.position_cap);
        ids_.emplace(p, id);
        raws_.push_back(std::move(p));
        out_.emplace_back();
        work_.push_back(id);
        return id;
    }

    // The letter an atom denotes under `m`, or -1 for a free variable.
    static int value(const Atom& a, const Memory& m)
    {
        return a.is_letter() ? a.id : m[static_cast<std::size_t>(a.id)];
    }

    std::vector<int> candidates(const Atom& a, const Memory& m) const
    {
        const int v = value(a, m);
        return v >= 0 ? std::vector<int>{v} : pool_ids_;
    }

    GameMove make(GameMove::Kind k, int client_edge, int service_edge, int letter) const
    {
        GameMove m{k, std::nullopt, std::nullopt, std::nullopt, std::nullopt};
        if (client_edge >= 0)
            m.client = client_edges_[static_cast<std::size_t>(client_edge)];
        if (service_edge >= 0)
            m.service = service_edges_[static_cast<std::size_t>(service_edge)];
        if (letter >= 0)
            m.value = letters_.at(letter);
        return m;
    }

    void link(int from, RawPosition to, GameMove move)
    {
        const int target = node(std::move(to));
        out_[static_cast<std::size_t>(from)].emplace_back(target, std::move(move));
    }

    // An Eloise answer on a service edge; routed through a relay position
    // when that edge belongs to the monitored component.
    void answer(int from, const RawPosition& to, int service_edge, GameMove move)
    {
        if (options_.monitored_component &&
            component_[static_cast<std::size_t>(service_edge)] == *options_.monitored_component) {
            RawPosition relay = to;
            relay.kind = GamePosition::Kind::relay;
            link(from, relay, std::move(move));
            return;
        }
        link(from, to, std::move(move));
    }

    void expand(int id)
    {
        const RawPosition p = raws_[static_cast<std::size_t>(id)];
        Memory next;
        switch (p.kind) {
        case GamePosition::Kind::relay: {
            RawPosition to = p;
            to.kind = GamePosition::Kind::abelard;
            link(id, to, GameMove{GameMove::Kind::relay, {}, {}, {}, {}});
            break;
        }
        case GamePosition::Kind::abelard:
            for (int eid : c_.out[static_cast<std::size_t>(p.q1)]) {
                const detail::Edge& e = c_.edges[static_cast<std::size_t>(eid)];
                const Atom& alpha = e.atoms[0];
                const int req = request_of_[static_cast<std::size_t>(eid)];
                if (e.polarity == Polarity::recv) {
                    Memory s1 = p.s1;
                    detail::release(s1, c_.refresh[static_cast<std::size_t>(e.to)]);
                    link(id, RawPosition{GamePosition::Kind::eloise, e.to, s1, p.q2, p.s2, p.s1, req},
                         make(GameMove::Kind::client_receive, eid, -1, -1));
                    continue;
                }
                for (int v : candidates(alpha, p.s1)) {
                    Memory pending = p.s1;
                    if (alpha.is_var())
                        pending[static_cast<std::size_t>(alpha.id)] = v;
                    Memory s1 = pending;
                    detail::release(s1, c_.refresh[static_cast<std::size_t>(e.to)]);
                    link(id, RawPosition{GamePosition::Kind::eloise, e.to, s1, p.q2, p.s2, pending, req},
                         make(GameMove::Kind::client_send, eid, -1, v));
                }
            }
            break;
        case GamePosition::Kind::eloise: {
            const detail::Edge& request = c_.edges[static_cast<std::size_t>(p.edge)];
            const Atom& alpha = request.atoms[0];
            for (int eid : s_.out[static_cast<std::size_t>(p.q2)]) {
                const detail::Edge& e = s_.edges[static_cast<std::size_t>(eid)];
                if (request.polarity == Polarity::send) {
                    if (e.polarity != Polarity::recv)
                        continue;
                    const int v = value(alpha, p.pending);
                    if (detail::fire(s_, e, p.s2, v, next))
                        answer(id, RawPosition{GamePosition::Kind::abelard, p.q1, p.s1, e.to, next, {}, -1}, eid,
                               make(GameMove::Kind::match_send, -1, eid, v));
                    continue;
                }
                if (e.polarity != Polarity::send)
                    continue;
                for (int v : candidates(e.atoms[0], p.s2)) {
                    if (!detail::fire(s_, e, p.s2, v, next))
                        continue;
                    Memory s1 = p.s1;
                    const int expected = value(alpha, p.pending);
                    if (expected >= 0 && expected != v)
                        continue;
                    if (expected < 0)
                        s1[static_cast<std::size_t>(alpha.id)] = v;
                    detail::release(s1, c_.refresh[static_cast<std::size_t>(p.q1)]);
                    answer(id, RawPosition{GamePosition::Kind::abelard, p.q1, s1, e.to, next, {}, -1}, eid,
                           make(GameMove::Kind::match_receive, -1, eid, v));
                }
            }
            if (options_.internal_sync)
                expand_sync(id, p);
            break;
        }
        }
    }

    void expand_sync(int id, const RawPosition& p)
    {
        Memory mid, next;
        for (int eid : s_.out[static_cast<std::size_t>(p.q2)]) {
            const detail::Edge& send = s_.edges[static_cast<std::size_t>(eid)];
            if (send.polarity != Polarity::send)
                continue;
            for (int v : candidates(send.atoms[0], p.s2)) {
                if (!detail::fire(s_, send, p.s2, v, mid))
                    continue;
                for (int rid : s_.out[static_cast<std::size_t>(send.to)]) {
                    const detail::Edge& recv = s_.edges[static_cast<std::size_t>(rid)];
                    if (recv.polarity != Polarity::recv ||
                        component_[static_cast<std::size_t>(rid)] == component_[static_cast<std::size_t>(eid)])
                        continue;
                    if (!detail::fire(s_, recv, mid, v, next))
                        continue;
                    GameMove m = make(GameMove::Kind::sync, -1, eid, v);
                    m.service_peer = service_edges_[static_cast<std::size_t>(rid)];
                    RawPosition to = p;
                    to.q2 = recv.to;
                    to.s2 = next;
                    link(id, to, std::move(m));
                }
            }
        }
    }

    Substitution to_subst(const IndexedAutomaton& ia, const Memory& m) const
    {
        Substitution s;
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] >= 0)
                s.emplace(ia.vars[i], letters_.at(m[i]));
        return s;
    }

    void finish()
    {
        const std::size_t n = raws_.size();
        g_.positions_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const RawPosition& r = raws_[i];
            GamePosition& gp = g_.positions_[i];
            gp.kind = r.kind;
            gp.client_state = c_.state_names[static_cast<std::size_t>(r.q1)];
            gp.client = to_subst(c_, r.s1);
            gp.service_state = s_.state_names[static_cast<std::size_t>(r.q2)];
            gp.service = to_subst(s_, r.s2);
            if (r.kind == GamePosition::Kind::eloise) {
                gp.pending = to_subst(c_, r.pending);
                gp.request = client_edges_[static_cast<std::size_t>(r.edge)].label;
            }
            g_.by_key_.emplace(gp.key(), static_cast<int>(i));
            g_.arena_.add_node(r.kind == GamePosition::Kind::eloise ? Player::eloise : Player::abelard);
        }
        g_.moves_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto& edges = out_[i];
            std::sort(edges.begin(), edges.end(), [&](const auto& x, const auto& y) {
                if (x.first != y.first)
                    return raws_[static_cast<std::size_t>(x.first)] < raws_[static_cast<std::size_t>(y.first)];
                return x.second < y.second;
            });
            for (std::size_t k = 0; k < edges.size(); ++k) {
                if (k > 0 && edges[k].first == edges[k - 1].first)
                    continue;
                g_.arena_.add_edge(static_cast<int>(i), edges[k].first);
                g_.moves_[i].push_back(edges[k].second);
            }
        }
        g_.marked_.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            g_.marked_[i] = options_.monitored_component ? raws_[i].kind == GamePosition::Kind::relay
                                                         : raws_[i].kind == GamePosition::Kind::abelard;
    }

    Game& g_;
    const GameOptions& options_;
    LetterTable letters_;
    std::vector<int> pool_ids_;
    IndexedAutomaton c_;
    IndexedAutomaton s_;
    std::vector<Transition> client_edges_;
    std::vector<int> request_of_;
    std::vector<Transition> service_edges_;
    std::vector<int> component_;
    std::map<RawPosition, int> ids_;
    std::vector<RawPosition> raws_;
    std::vector<std::vector<std::pair<int, GameMove>>> out_;
    std::deque<int> work_;
};

Game Game::build(const Cfva& client, const Cfva& service, const GameOptions& options)
{
    Game g;
    GameBuilder(g, options).run(client, service);
    return g;
}

namespace {

int move_index(const Game& g, int from, int to)
{
    const auto& succ = g.arena().succ[static_cast<std::size_t>(from)];
    auto it = std::find(succ.begin(), succ.end(), to);
    return it == succ.end() ? -1 : static_cast<int>(it - succ.begin());
}

}  // namespace

GameSolution solve(const Game& g, WinningCondition condition)
{
    const Arena& arena = g.arena();
    const std::size_t n = arena.size();
    const Solution s = condition == WinningCondition::safety ? solve_safety(arena, std::vector<char>(n, 0))
                                                             : solve_buchi(arena, g.marked());
    GameSolution out;
    out.eloise_region = s.eloise_wins;
    out.eloise_wins = n > 0 && s.eloise_wins[0];
    out.choice.assign(n, -1);
    for (std::size_t v = 0; v < n; ++v)
        if (s.choice[v] >= 0)
            out.choice[v] = move_index(g, static_cast<int>(v), s.choice[v]);

    if (out.eloise_wins) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        std::vector<int> eloise;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            const auto vi = static_cast<std::size_t>(v);
            std::vector<int> next;
            if (arena.owner[vi] == Player::eloise) {
                eloise.push_back(v);
                next.push_back(s.choice[vi]);
            } else {
                next = arena.succ[vi];
            }
            for (int w : next)
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    stack.push_back(w);
                }
        }
        std::sort(eloise.begin(), eloise.end(), [&](int x, int y) { return g.position(x) < g.position(y); });
        for (int v : eloise)
            out.strategy.push_back({v, out.choice[static_cast<std::size_t>(v)]});
    } else if (n > 0) {
        std::vector<char> seen(n, 0);
        int v = 0;
        while (!seen[static_cast<std::size_t>(v)] && out.choice[static_cast<std::size_t>(v)] >= 0) {
            seen[static_cast<std::size_t>(v)] = 1;
            const int m = out.choice[static_cast<std::size_t>(v)];
            out.refusal.push_back({v, m});
            v = arena.succ[static_cast<std::size_t>(v)][static_cast<std::size_t>(m)];
        }
    }
    return out;
}

GsimResult gsimulates(const Cfva& client, const Cfva& service, const GameOptions& options,
                      WinningCondition condition)
{
    GsimResult r;
    auto game = std::make_shared<Game>(Game::build(client, service, options));
    r.solution = solve(*game, condition);
    r.simulates = r.solution.eloise_wins;
    r.game = std::move(game);
    return r;
}

Cfva monitor_cfva()
{
    Cfva m;
    m.type = AutomatonType::cfva;
    m.states = {"p0", "p1", "p2"};
    m.initial = {"p0"};
    m.accepting = m.states;
    m.variables = {Variable("x")};
    m.add_transition("p0", Label::recv(Variable("x")), "p1");
    m.add_transition("p1", Label::send(Variable("x")), "p0");
    m.add_transition("p0", Label::send(Variable("x")), "p2");
    m.add_transition("p2", Label::recv(Variable("x")), "p0");
    m.refresh[Variable("x")] = {"p0"};
    return m;
}

}  // namespace fva

#include <catch_amalgamated.hpp>

#include <random>

#include "fva/compose.hpp"
#include "fva/json_io.hpp"
#include "support/examples.hpp"
#include "support/random.hpp"

using namespace fva;
namespace ex = fva::examples;

namespace {

std::vector<StateId> coordinates(const StateId& tuple)
{
    std::vector<StateId> out;
    std::string cur;
    for (char c : tuple.substr(1, tuple.size() - 2)) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (tuple.size() > 2)
        out.push_back(cur);
    return out;
}

const std::vector<Cfva>& shop()
{
    static const std::vector<Cfva> s{ex::cart_service(), ex::search_service()};
    return s;
}

struct Walk {
    std::vector<TraceMessage> trace;
    std::vector<std::vector<Transition>> answers;
};

bool live(const Letter& l, const GamePosition& p)
{
    for (const Substitution* s : {&p.client, &p.service, &p.pending})
        for (const auto& [x, v] : *s)
            if (v == l)
                return true;
    return false;
}

/// A session drawn by letting the client move at random and the strategy
/// answer; spare pool letters get fresh concrete names when first bound.
Walk random_session(const Replayer& r, std::mt19937_64& rng, std::size_t messages)
{
    const Game& g = r.game();
    std::set<Letter> alphabet = g.client().letters();
    for (const auto& l : g.service().letters())
        alphabet.insert(l);
    Walk w;
    std::map<Letter, Letter> concrete;
    std::size_t minted = 0;
    int pos = g.initial();
    for (;;) {
        const auto& moves = g.moves(pos);
        const bool boundary = g.position(pos).client_state.find('~') == std::string::npos;
        if (boundary && (w.trace.size() == messages || moves.empty()))
            break;
        const std::size_t k = std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng);
        const GameMove& m = moves[k];
        const int e = g.arena().succ[static_cast<std::size_t>(pos)][k];
        const GameMove& reply = g.moves(e).at(static_cast<std::size_t>(r.strategy_at(e)));
        const Letter abstract = m.kind == GameMove::Kind::client_send ? *m.value : *reply.value;
        Letter token = abstract;
        if (!alphabet.contains(abstract)) {
            if (!live(abstract, g.position(pos)))
                concrete[abstract] = Letter("item" + std::to_string(++minted));
            token = concrete.at(abstract);
        }
        if (m.client->from.find('~') == std::string::npos) {
            TraceMessage msg;
            msg.polarity = m.client->label.polarity();
            msg.tag = token;
            msg.text = (msg.polarity == Polarity::send ? "!" : "?") + token.str();
            w.trace.push_back(msg);
            w.answers.emplace_back();
        } else {
            w.trace.back().args.push_back(token);
        }
        w.answers.back().push_back(*reply.service);
        pos = g.arena().succ[static_cast<std::size_t>(e)][static_cast<std::size_t>(r.strategy_at(e))];
        if (g.position(pos).kind == GamePosition::Kind::relay)
            pos = g.arena().succ[static_cast<std::size_t>(pos)].front();
    }
    return w;
}

}  // namespace

TEST_CASE("the product of one service is that service up to names")
{
    const Product p = async_product({ex::search_service()});
    CHECK(p.arity == 1);
    CHECK(p.automaton.states.size() == ex::search_service().states.size());
    CHECK(p.automaton.transitions.size() == ex::search_service().transitions.size());
    CHECK(p.automaton.initial == std::set<StateId>{"(r0)"});
}

TEST_CASE("the empty product is one idle state")
{
    const Product p = async_product({});
    CHECK(p.automaton.states == std::set<StateId>{"()"});
    CHECK(p.automaton.transitions.empty());
}

TEST_CASE("cart and search interleave freely")
{
    auto [client, services] = separate_variables(ex::cart_client(), shop());
    const Product p = async_product(services);
    std::size_t base = 0;
    for (const auto& q : p.automaton.states)
        if (q.find('~') == std::string::npos)
            ++base;
    CHECK(base == 4);
    CHECK(p.automaton.states.size() ==
          services[0].states.size() * services[1].states.size());
    CHECK(validate(p.automaton).empty());
}

TEST_CASE("each product move is a move of the components it names")
{
    auto [client, services] = separate_variables(ex::cart_client(), shop());
    const Product p = async_product(services);
    for (const auto& t : p.automaton.transitions) {
        const auto from = coordinates(t.from);
        const auto to = coordinates(t.to);
        REQUIRE(p.components.contains(t));
        for (std::size_t i : p.components.at(t)) {
            CHECK(services[i].transitions.contains(Transition{from[i], t.label, to[i]}));
            for (std::size_t j = 0; j < from.size(); ++j)
                if (j != i)
                    CHECK(from[j] == to[j]);
        }
    }
}

TEST_CASE("a component variable is refreshed wherever its coordinate refreshes it")
{
    auto [client, services] = separate_variables(ex::cart_client(), shop());
    const Product p = async_product(services);
    for (const auto& q : p.automaton.states) {
        const auto c = coordinates(q);
        for (std::size_t i = 0; i < services.size(); ++i)
            for (const auto& x : services[i].variables)
                CHECK(p.automaton.refreshed_at(q).contains(x) == services[i].refreshed_at(c[i]).contains(x));
    }
}

TEST_CASE("separated services share no variables with the client or each other")
{
    auto [client, services] = separate_variables(ex::cart_client(), {ex::cart_service(), ex::cart_service()});
    CHECK(client == ex::cart_client());
    std::set<Variable> seen = client.variables;
    for (const auto& s : services)
        for (const auto& x : s.variables)
            CHECK(seen.insert(x).second);
}

TEST_CASE("messages flatten into tag then argument steps")
{
    Cfva a = ex::cfva_shell({"y"}, {"p0", "p1"});
    add_message(a, "p0", Polarity::send, "Add", {Variable("y"), Letter("k")}, "p1");
    CHECK(a.transitions == std::set<Transition>{
                               {"p0", Label::send(Letter("Add")), "p0~Add~p1.1"},
                               {"p0~Add~p1.1", Label::send(Variable("y")), "p0~Add~p1.2"},
                               {"p0~Add~p1.2", Label::send(Letter("k")), "p1"},
                           });
    CHECK(a.accepting == a.states);
}

TEST_CASE("the shopping client is served by cart and search together")
{
    const auto r = synthesize(ex::cart_client(), shop());
    REQUIRE(r.orchestrator);
    CHECK_FALSE(r.refusal);
    CHECK_FALSE(r.orchestrator->entries.empty());
    for (const auto& e : r.orchestrator->entries)
        CHECK(e.component);
}

TEST_CASE("cart alone cannot answer a search")
{
    const auto r = synthesize(ex::cart_client(), {ex::cart_service()});
    REQUIRE(r.refusal);
    CHECK_FALSE(r.orchestrator);
    const auto& path = r.refusal->client_path;
    REQUIRE_FALSE(path.empty());
    CHECK(path.front() == "!Create_Cart");
    CHECK(path.back() == "!Search");
    CHECK(r.refusal->stuck.kind == GamePosition::Kind::eloise);
}

TEST_CASE("no services refuses the first client move")
{
    const auto r = synthesize(ex::cart_client(), {});
    REQUIRE(r.refusal);
    CHECK(r.refusal->client_path == std::vector<std::string>{"!Create_Cart"});
}

TEST_CASE("a session is delegated step by step")
{
    const auto r = synthesize(ex::cart_client(), shop());
    REQUIRE(r.orchestrator);
    const auto d = replay(*r.orchestrator, parse_trace("!Create_Cart(c1)\n!Search(i1)\n?Num(i1)\n"));
    REQUIRE(d.size() == 3);
    CHECK(d[0].components == std::vector<std::size_t>{0, 0});
    CHECK(d[1].components == std::vector<std::size_t>{1, 1});
    CHECK(d[2].components == std::vector<std::size_t>{1, 1});
    CHECK(d[2].message == "?Num(i1)");
}

TEST_CASE("an empty session delegates nothing")
{
    const auto r = synthesize(ex::cart_client(), shop());
    REQUIRE(r.orchestrator);
    CHECK(replay(*r.orchestrator, {}).empty());
}

TEST_CASE("an unknown message diverges where it appears")
{
    const auto r = synthesize(ex::cart_client(), shop());
    REQUIRE(r.orchestrator);
    try {
        replay(*r.orchestrator, parse_trace("!Checkout(c1)"));
        FAIL("expected divergence");
    } catch (const TraceDiverged& e) {
        CHECK(e.step() == 1);
    }
    try {
        replay(*r.orchestrator, parse_trace("!Create_Cart(c1)\n!Search(i1)\n?Num(i2)"));
        FAIL("expected divergence");
    } catch (const TraceDiverged& e) {
        CHECK(e.step() == 3);
    }
}

TEST_CASE("trace syntax")
{
    const auto t = parse_trace("# comment\n\n!A(x, y) ?B\nC\n");
    REQUIRE(t.size() == 3);
    CHECK(t[0].polarity == Polarity::send);
    CHECK(t[0].args == std::vector<Letter>{Letter("x"), Letter("y")});
    CHECK(t[1].polarity == Polarity::recv);
    CHECK_FALSE(t[2].polarity);
    CHECK_THROWS_AS(parse_trace("!A(x"), ParseError);
    CHECK_THROWS_AS(parse_trace("!A($x)"), ParseError);
}

TEST_CASE("orchestrators round-trip through json")
{
    const auto r = synthesize(ex::cart_client(), shop());
    REQUIRE(r.orchestrator);
    const auto j = to_json(*r.orchestrator);
    const Orchestrator back = orchestrator_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.entries.size() == r.orchestrator->entries.size());
    CHECK(replay(back, parse_trace("!Create_Cart(c1)")).size() == 1);
}

TEST_CASE("random conformant sessions never diverge")
{
    const auto r = synthesize(ex::cart_client(), shop());
    REQUIRE(r.orchestrator);
    const Replayer replayer(*r.orchestrator);
    std::mt19937_64 rng(61);
    std::size_t steps = 0;
    for (int round = 0; round < 100; ++round) {
        const Walk w = random_session(replayer, rng, 12);
        std::vector<Delegation> d;
        REQUIRE_NOTHROW(d = replayer.run(w.trace));
        REQUIRE(d.size() == w.trace.size());
        for (std::size_t i = 0; i < d.size(); ++i)
            CHECK(d[i].transitions == w.answers[i]);
        steps += d.size();
    }
    CHECK(steps > 500);
}

#include "fva/compose.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include "fva/json_io.hpp"

namespace fva {

using nlohmann::json;

Product async_product(const std::vector<Cfva>& services, std::size_t state_cap)
{
    for (const auto& s : services)
        require_valid(s);
    Product p;
    p.arity = services.size();
    Cfva& out = p.automaton;
    out.type = AutomatonType::cfva;
    for (const auto& s : services)
        out.variables.insert(s.variables.begin(), s.variables.end());

    std::vector<std::multimap<StateId, const Transition*>> edges(services.size());
    for (std::size_t i = 0; i < services.size(); ++i)
        for (const auto& t : services[i].transitions)
            edges[i].emplace(t.from, &t);

    using Tuple = std::vector<StateId>;
    auto name = [](const Tuple& t) {
        std::string s = "(";
        for (std::size_t i = 0; i < t.size(); ++i)
            s += (i ? "," : "") + t[i];
        return s + ")";
    };
    Tuple start;
    for (const auto& s : services)
        start.push_back(*s.initial.begin());
    std::set<Tuple> seen{start};
    std::deque<Tuple> work{start};
    out.initial.insert(name(start));
    while (!work.empty()) {
        const Tuple t = std::move(work.front());
        work.pop_front();
        const StateId from = name(t);
        out.states.insert(from);
        for (std::size_t i = 0; i < services.size(); ++i) {
            for (const auto& x : services[i].refreshed_at(t[i]))
                out.refresh[x].insert(from);
            auto [lo, hi] = edges[i].equal_range(t[i]);
            for (auto it = lo; it != hi; ++it) {
                Tuple next = t;
                next[i] = it->second->to;
                Transition tr{from, it->second->label, name(next)};
                out.transitions.insert(tr);
                p.components[tr].insert(i);
                if (seen.insert(next).second) {
                    if (seen.size() > state_cap)
                        throw CapExceeded("product.state_cap", state_cap);
                    work.push_back(std::move(next));
                }
            }
        }
    }
    out.accepting = out.states;
    return p;
}

std::pair<Cfva, std::vector<Cfva>> separate_variables(const Cfva& client, const std::vector<Cfva>& services)
{
    Automaton taken;
    taken.variables = client.variables;
    std::vector<Cfva> out;
    for (const auto& s : services) {
        Cfva renamed = rename_apart(taken, s).second;
        taken.variables.insert(renamed.variables.begin(), renamed.variables.end());
        out.push_back(std::move(renamed));
    }
    return {client, std::move(out)};
}

void add_message(Cfva& a, const StateId& from, Polarity polarity, const std::string& tag,
                 const std::vector<Label::Atom>& args, const StateId& to)
{
    std::vector<Label> labels{Label(Letter(tag), polarity)};
    for (const auto& arg : args)
        labels.emplace_back(arg, polarity);
    StateId cur = from;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        const StateId next = k + 1 == labels.size() ? to : from + "~" + tag + "~" + to + "." + std::to_string(k + 1);
        a.add_transition(cur, labels[k], next);
        a.accepting.insert(cur);
        a.accepting.insert(next);
        cur = next;
    }
}

namespace {

std::optional<std::size_t> component_of(const Product& p, const GameMove& m)
{
    if (!m.service)
        return std::nullopt;
    auto it = p.components.find(*m.service);
    if (it == p.components.end() || it->second.empty())
        return std::nullopt;
    return *it->second.begin();
}

std::string describe_client_move(const GameMove& m)
{
    std::string s = m.client->label.to_string();
    if (m.kind == GameMove::Kind::client_send && m.value && m.client->label.is_var())
        s += "=" + m.value->str();
    return s;
}

GameOptions with_components(GameOptions options, const Product& p)
{
    options.component_of.clear();
    for (const auto& [t, cs] : p.components)
        options.component_of.emplace(t, static_cast<int>(*cs.begin()));
    return options;
}

}  // namespace

SynthesisResult synthesize(const Cfva& client_in, const std::vector<Cfva>& services_in, const GameOptions& options)
{
    require_valid(client_in);
    auto [client, services] = separate_variables(client_in, services_in);
    Product product = async_product(services);
    const GsimResult r = gsimulates(client, product.automaton, with_components(options, product));
    const Game& g = *r.game;

    SynthesisResult out;
    if (r.simulates) {
        Orchestrator o;
        o.client = client;
        o.services = services;
        for (std::size_t i = 0; i < services.size(); ++i)
            o.service_names.push_back("service" + std::to_string(i));
        o.pool = g.pool();
        o.pool_extra = options.pool_extra;
        o.positions = g.size();
        for (const auto& e : r.solution.strategy) {
            const GameMove& m = g.moves(e.position)[static_cast<std::size_t>(e.move)];
            o.entries.push_back({g.position(e.position), m, component_of(product, m)});
        }
        o.product = std::move(product);
        out.orchestrator = std::move(o);
        return out;
    }
    Refusal ref;
    ref.positions = g.size();
    int last = g.initial();
    for (const auto& step : r.solution.refusal) {
        const GameMove& m = g.moves(step.position)[static_cast<std::size_t>(step.move)];
        ref.play.push_back({g.position(step.position), m});
        if (m.client)
            ref.client_path.push_back(describe_client_move(m));
        last = g.arena().succ[static_cast<std::size_t>(step.position)][static_cast<std::size_t>(step.move)];
    }
    ref.stuck = g.position(last);
    out.refusal = std::move(ref);
    return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json subst_json(const Substitution& s)
{
    json j = json::object();
    for (const auto& [x, l] : s)
        j[x.str()] = l.str();
    return j;
}

Substitution subst_from_json(const json& j)
{
    Substitution s;
    for (auto it = j.begin(); it != j.end(); ++it)
        s.emplace(Variable(it.key()), Letter(it.value().get<std::string>()));
    return s;
}

json transition_json(const Transition& t)
{
    return json{{"from", t.from}, {"label", label_to_json(t.label)}, {"to", t.to}};
}

Transition transition_from_json(const json& j, const std::string& where)
{
    return Transition{j.at("from").get<std::string>(), label_from_json(j.at("label"), where + "/label"),
                      j.at("to").get<std::string>()};
}

const char* kind_tag(GamePosition::Kind k)
{
    switch (k) {
    case GamePosition::Kind::abelard:
        return "abelard";
    case GamePosition::Kind::eloise:
        return "eloise";
    case GamePosition::Kind::relay:
        return "relay";
    }
    return "?";
}

json position_json(const GamePosition& p)
{
    json j{{"key", p.key()},
           {"player", kind_tag(p.kind)},
           {"client", {{"state", p.client_state}, {"subst", subst_json(p.client)}}},
           {"service", {{"state", p.service_state}, {"subst", subst_json(p.service)}}}};
    if (p.request)
        j["pending"] = {{"subst", subst_json(p.pending)}, {"label", label_to_json(*p.request)}};
    return j;
}

GamePosition position_from_json(const json& j)
{
    GamePosition p;
    const std::string player = j.at("player").get<std::string>();
    p.kind = player == "eloise" ? GamePosition::Kind::eloise
             : player == "relay" ? GamePosition::Kind::relay
                                 : GamePosition::Kind::abelard;
    p.client_state = j.at("client").at("state").get<std::string>();
    p.client = subst_from_json(j.at("client").at("subst"));
    p.service_state = j.at("service").at("state").get<std::string>();
    p.service = subst_from_json(j.at("service").at("subst"));
    if (auto it = j.find("pending"); it != j.end()) {
        p.pending = subst_from_json(it->at("subst"));
        p.request = label_from_json(it->at("label"), "#/pending/label");
    }
    return p;
}

json move_json(const GameMove& m)
{
    json j{{"kind", move_kind_name(m.kind)}};
    if (m.client)
        j["client"] = transition_json(*m.client);
    if (m.service)
        j["service"] = transition_json(*m.service);
    if (m.service_peer)
        j["service_peer"] = transition_json(*m.service_peer);
    if (m.value)
        j["value"] = m.value->str();
    return j;
}

GameMove move_from_json(const json& j)
{
    static const GameMove::Kind kinds[] = {GameMove::Kind::client_receive, GameMove::Kind::client_send,
                                           GameMove::Kind::match_send,     GameMove::Kind::match_receive,
                                           GameMove::Kind::sync,           GameMove::Kind::relay};
    GameMove m{GameMove::Kind::relay, {}, {}, {}, {}};
    const std::string kind = j.at("kind").get<std::string>();
    bool known = false;
    for (auto k : kinds)
        if (kind == move_kind_name(k)) {
            m.kind = k;
            known = true;
        }
    if (!known)
        throw ParseError("#/strategy", "unknown move kind '" + kind + "'");
    if (auto it = j.find("client"); it != j.end())
        m.client = transition_from_json(*it, "#/strategy/client");
    if (auto it = j.find("service"); it != j.end())
        m.service = transition_from_json(*it, "#/strategy/service");
    if (auto it = j.find("service_peer"); it != j.end())
        m.service_peer = transition_from_json(*it, "#/strategy/service_peer");
    if (auto it = j.find("value"); it != j.end())
        m.value = Letter(it->get<std::string>());
    return m;
}

}  // namespace

json position_to_json(const GamePosition& p) { return position_json(p); }
json move_to_json(const GameMove& m) { return move_json(m); }

json to_json(const Orchestrator& o)
{
    json services = json::array();
    for (const auto& s : o.services)
        services.push_back(to_json(s));
    json pool = json::array();
    for (const auto& l : o.pool)
        pool.push_back(l.str());
    json strategy = json::array();
    for (const auto& e : o.entries) {
        json entry{{"position", position_json(e.position)}, {"move", move_json(e.move)}};
        if (e.component)
            entry["component"] = *e.component;
        strategy.push_back(std::move(entry));
    }
    return json{{"client", to_json(o.client)},
                {"services", services},
                {"service_names", o.service_names},
                {"pool", pool},
                {"pool_extra", o.pool_extra},
                {"positions", o.positions},
                {"strategy", strategy}};
}

json to_json(const Refusal& r)
{
    json play = json::array();
    for (const auto& s : r.play)
        play.push_back(json{{"position", position_json(s.position)}, {"move", move_json(s.move)}});
    return json{{"play", play},
                {"client_path", r.client_path},
                {"stuck", position_json(r.stuck)},
                {"positions", r.positions}};
}

Orchestrator orchestrator_from_json(const json& j)
{
    auto automaton = [](const json& a, const std::string& where) {
        AnyAutomaton any = automaton_from_json(a);
        if (!std::holds_alternative<Automaton>(any))
            throw ParseError(where, "expected a cfva");
        return std::get<Automaton>(std::move(any));
    };
    try {
        Orchestrator o;
        o.client = automaton(j.at("client"), "#/client");
        for (std::size_t i = 0; i < j.at("services").size(); ++i)
            o.services.push_back(automaton(j.at("services")[i], "#/services/" + std::to_string(i)));
        for (const auto& l : j.at("pool"))
            o.pool.emplace_back(l.get<std::string>());
        for (std::size_t i = 0; i < o.services.size(); ++i)
            o.service_names.push_back("service" + std::to_string(i));
        if (auto it = j.find("service_names"); it != j.end() && it->size() == o.services.size())
            o.service_names = it->get<std::vector<std::string>>();
        o.pool_extra = j.value("pool_extra", std::size_t{0});
        o.positions = j.value("positions", std::size_t{0});
        for (const auto& e : j.at("strategy")) {
            OrchestratorEntry entry{position_from_json(e.at("position")), move_from_json(e.at("move")), std::nullopt};
            if (auto it = e.find("component"); it != e.end())
                entry.component = it->get<std::size_t>();
            o.entries.push_back(std::move(entry));
        }
        o.product = async_product(o.services);
        return o;
    } catch (const json::exception& e) {
        throw ParseError("#", std::string("malformed orchestrator: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Replay

std::vector<TraceMessage> parse_trace(const std::string& text)
{
    std::vector<TraceMessage> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos)
            end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos && line.find_first_not_of(" \t") == hash)
            continue;
        std::size_t i = 0;
        auto where = [&] { return "line " + std::to_string(line_no); };
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
                ++i;
            if (i >= line.size())
                break;
            TraceMessage m;
            const std::size_t start = i;
            if (line[i] == '!' || line[i] == '?') {
                m.polarity = line[i] == '!' ? Polarity::send : Polarity::recv;
                ++i;
            }
            std::string tag;
            while (i < line.size() && line[i] != '(' && !std::isspace(static_cast<unsigned char>(line[i])))
                tag += line[i++];
            if (tag.empty() || !is_valid_letter_symbol(tag))
                throw ParseError(where(), "invalid message tag '" + tag + "'");
            m.tag = Letter(tag);
            if (i < line.size() && line[i] == '(') {
                const std::size_t close = line.find(')', i);
                if (close == std::string::npos)
                    throw ParseError(where(), "missing ')'");
                std::string inner = line.substr(i + 1, close - i - 1);
                std::string arg;
                auto flush = [&] {
                    if (arg.empty() || !is_valid_letter_symbol(arg))
                        throw ParseError(where(), "invalid argument '" + arg + "'");
                    m.args.emplace_back(arg);
                    arg.clear();
                };
                for (char c : inner) {
                    if (c == ',')
                        flush();
                    else if (!std::isspace(static_cast<unsigned char>(c)))
                        arg += c;
                }
                if (!inner.empty())
                    flush();
                i = close + 1;
            }
            m.text = line.substr(start, i - start);
            out.push_back(std::move(m));
        }
        if (end == text.size())
            break;
    }
    return out;
}

Replayer::Replayer(const Orchestrator& o)
    : orchestrator_(o),
      game_(Game::build(o.client, o.product.automaton,
                        with_components(GameOptions{o.pool_extra, 1'000'000, {}, false, {}}, o.product)))
{
    for (const auto& e : o.entries) {
        const int id = game_.find(e.position.key());
        if (id < 0)
            throw Error("orchestrator position " + e.position.key() + " is not a position of its game");
        const auto& moves = game_.moves(id);
        auto it = std::find(moves.begin(), moves.end(), e.move);
        if (it == moves.end())
            throw Error("orchestrator move at " + e.position.key() + " is not legal");
        strategy_[id] = static_cast<int>(it - moves.begin());
    }
}

namespace {

// Concrete letters of a session against the abstract pool of the game.
class LetterMap {
public:
    explicit LetterMap(std::set<Letter> alphabet, std::vector<Letter> pool)
        : alphabet_(std::move(alphabet)), pool_(std::move(pool)) {}

    /// The pool letter standing for `concrete` in `p`, or nothing if a new
    /// one has to be allocated.
    std::optional<Letter> abstract(const Letter& concrete, const GamePosition& p) const
    {
        if (alphabet_.contains(concrete))
            return concrete;
        auto it = to_pool_.find(concrete);
        if (it != to_pool_.end() && live(it->second, p))
            return it->second;
        return std::nullopt;
    }

    /// The concrete letter a pool letter currently stands for.
    std::optional<Letter> concrete(const Letter& abstract, const GamePosition& p) const
    {
        if (alphabet_.contains(abstract))
            return abstract;
        auto it = from_pool_.find(abstract);
        if (it != from_pool_.end() && live(abstract, p))
            return it->second;
        return std::nullopt;
    }

    /// Whether `abstract` may be bound to a new concrete letter in `p`.
    bool spare(const Letter& abstract, const GamePosition& p) const
    {
        return !alphabet_.contains(abstract) && !live(abstract, p);
    }

    void bind(const Letter& concrete, const Letter& abstract)
    {
        if (auto it = from_pool_.find(abstract); it != from_pool_.end())
            to_pool_.erase(it->second);
        if (auto it = to_pool_.find(concrete); it != to_pool_.end())
            from_pool_.erase(it->second);
        to_pool_[concrete] = abstract;
        from_pool_[abstract] = concrete;
    }

private:
    static bool live(const Letter& l, const GamePosition& p)
    {
        auto in = [&](const Substitution& s) {
            return std::any_of(s.begin(), s.end(), [&](const auto& kv) { return kv.second == l; });
        };
        return in(p.client) || in(p.service) || in(p.pending);
    }

    std::set<Letter> alphabet_;
    std::vector<Letter> pool_;
    std::map<Letter, Letter> to_pool_;
    std::map<Letter, Letter> from_pool_;
};

bool polarity_fits(const std::optional<Polarity>& want, const Transition& t)
{
    return !want || t.label.polarity() == *want;
}

}  // namespace

std::vector<Delegation> Replayer::run(const std::vector<TraceMessage>& trace) const
{
    std::set<Letter> alphabet = game_.client().letters();
    for (const auto& l : game_.service().letters())
        alphabet.insert(l);
    LetterMap letters(alphabet, game_.pool());
    const auto& succ = game_.arena().succ;

    int pos = game_.initial();
    std::vector<Delegation> out;
    for (std::size_t step = 1; step <= trace.size(); ++step) {
        const TraceMessage& msg = trace[step - 1];
        Delegation d{step, msg.text, {}, {}};
        std::vector<Letter> tokens{msg.tag};
        tokens.insert(tokens.end(), msg.args.begin(), msg.args.end());
        for (const Letter& token : tokens) {
            const GamePosition& here = game_.position(pos);
            const auto& moves = game_.moves(pos);
            const std::optional<Letter> known = letters.abstract(token, here);
            int chosen = -1;
            int answer_pos = -1;
            int answer = -1;
            std::optional<std::pair<Letter, Letter>> binding;
            for (std::size_t k = 0; k < moves.size() && chosen < 0; ++k) {
                const GameMove& m = moves[k];
                if (!m.client || !polarity_fits(msg.polarity, *m.client))
                    continue;
                const int e = succ[static_cast<std::size_t>(pos)][k];
                auto s = strategy_.find(e);
                if (m.kind == GameMove::Kind::client_send) {
                    if (known ? *m.value != *known : !letters.spare(*m.value, here))
                        continue;
                    if (!known)
                        binding.emplace(token, *m.value);
                } else {
                    if (s == strategy_.end())
                        continue;
                    const GameMove& reply = game_.moves(e)[static_cast<std::size_t>(s->second)];
                    const std::optional<Letter> sent = letters.concrete(*reply.value, game_.position(e));
                    if (sent ? *sent != token : (known || !letters.spare(*reply.value, here)))
                        continue;
                    if (!sent)
                        binding.emplace(token, *reply.value);
                }
                chosen = static_cast<int>(k);
                answer_pos = e;
                answer = s == strategy_.end() ? -1 : s->second;
            }
            if (chosen < 0)
                throw TraceDiverged(step, here.key(), "no client move for '" + token.str() + "'");
            if (answer < 0)
                throw TraceDiverged(step, game_.position(answer_pos).key(), "the orchestrator has no answer");
            if (binding)
                letters.bind(binding->first, binding->second);
            const GameMove& reply = game_.moves(answer_pos)[static_cast<std::size_t>(answer)];
            auto c = orchestrator_.product.components.find(*reply.service);
            d.components.push_back(c == orchestrator_.product.components.end() ? 0 : *c->second.begin());
            d.transitions.push_back(*reply.service);
            pos = succ[static_cast<std::size_t>(answer_pos)][static_cast<std::size_t>(answer)];
            if (game_.position(pos).kind == GamePosition::Kind::relay)
                pos = succ[static_cast<std::size_t>(pos)].front();
        }
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<Delegation> replay(const Orchestrator& o, const std::vector<TraceMessage>& trace)
{
    return Replayer(o).run(trace);
}

}  // namespace fva

#include "fva/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <ostream>

#include "fva/closure.hpp"
#include "fva/compose.hpp"
#include "fva/decide.hpp"
#include "fva/game.hpp"
#include "fva/json_io.hpp"
#include "fva/words.hpp"

namespace fva {

using nlohmann::json;

namespace {

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kFail = 2;

struct Settings {
    bool json_only = false;
    bool timing = false;
    std::string output;
};

struct Outcome {
    int code = kYes;
    json report = json::object();
    std::string text;  // human summary
    std::optional<std::string> artifact;  // document written to -o or stdout
};

json memory_json(const Memory& m)
{
    json j = json::object();
    for (const auto& [x, l] : m)
        j[x.str()] = l.str();
    return j;
}

json run_json(const Run& r)
{
    json steps = json::array();
    for (const auto& s : r.steps)
        steps.push_back(json{{"letter", s.consumed ? json(s.consumed->str()) : json(nullptr)},
                             {"state", s.config.state},
                             {"memory", memory_json(s.config.memory)}});
    return json{{"start", {{"state", r.start.state}, {"memory", memory_json(r.start.memory)}}}, {"steps", steps}};
}

Automaton load_fva(const std::string& path)
{
    AnyAutomaton any = load_any(path);
    if (!std::holds_alternative<Automaton>(any))
        throw ParseError(path, "expected an fva, cfva or eps-fva, not an nfva");
    return std::get<Automaton>(std::move(any));
}

std::vector<Letter> parse_pool(const std::string& text)
{
    std::vector<Letter> pool;
    std::string cur;
    auto flush = [&] {
        if (cur.empty())
            return;
        if (!is_valid_letter_symbol(cur))
            throw Error("invalid pool letter '" + cur + "'");
        pool.emplace_back(cur);
        cur.clear();
    };
    for (char c : text) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c)))
            flush();
        else
            cur += c;
    }
    flush();
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
}

std::string verdict_text(bool v, const char* yes, const char* no) { return v ? yes : no; }

json word_list(const std::set<Word>& words)
{
    json out = json::array();
    for (const auto& w : words)
        out.push_back(format_word(w));
    return out;
}

Outcome automaton_result(const Automaton& a, const std::string& what)
{
    Outcome o;
    o.report["verdict"] = "ok";
    o.report["states"] = a.states.size();
    o.report["transitions"] = a.transitions.size();
    o.text = what + ": " + std::to_string(a.states.size()) + " states, " + std::to_string(a.transitions.size()) +
             " transitions";
    o.artifact = serialize(a);
    return o;
}

json strategy_json(const Game& g, const GameSolution& s)
{
    json entries = json::array();
    for (const auto& e : s.strategy)
        entries.push_back(json{{"position", position_to_json(g.position(e.position))},
                               {"move", move_to_json(g.moves(e.position)[static_cast<std::size_t>(e.move)])}});
    json refusal = json::array();
    for (const auto& e : s.refusal)
        refusal.push_back(json{{"position", position_to_json(g.position(e.position))},
                               {"move", move_to_json(g.moves(e.position)[static_cast<std::size_t>(e.move)])}});
    json pool = json::array();
    for (const auto& l : g.pool())
        pool.push_back(l.str());
    json j{{"winner", s.eloise_wins ? "eloise" : "abelard"}, {"positions", g.size()}, {"pool", pool}};
    if (s.eloise_wins)
        j["strategy"] = entries;
    else
        j["refusal"] = refusal;
    return j;
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

}  // namespace

int run_cli(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args = args_in;
    if (!args.empty() && args.front() == "op")
        args.erase(args.begin());

    CLI::App app{"Fresh-variable automata toolkit"};
    app.name("fva");
    app.require_subcommand(1, 1);
    Settings settings;
    app.add_flag("--json", settings.json_only, "print only the JSON report on stdout");
    app.add_flag("--timing", settings.timing, "add wall-clock time to the report");

    std::function<Outcome()> action;
    std::vector<std::string> files;
    std::string file;
    std::string word_text, pool_text, direction = "fa-in-fva", trace_path;
    std::size_t max_len = 5, pool_extra = 0;
    bool buchi = false;

    auto sub = [&](const char* name, const char* help) {
        CLI::App* s = app.add_subcommand(name, help);
        s->fallthrough();
        return s;
    };
    auto with_output = [&](CLI::App* s) { s->add_option("-o,--output", settings.output, "output file"); };

    CLI::App* c_validate = sub("validate", "check an automaton against its definition");
    c_validate->add_option("automaton", file, "automaton JSON")->required();
    c_validate->callback([&] {
        action = [&] {
            AnyAutomaton any = load_any(file);
            std::vector<std::string> v = std::visit([](const auto& a) { return validate(a); }, any);
            Outcome o;
            o.code = v.empty() ? kYes : kNo;
            o.report["verdict"] = v.empty() ? "valid" : "invalid";
            o.report["violations"] = v;
            o.text = v.empty() ? "valid" : "invalid";
            for (const auto& line : v)
                o.text += "\n  " + line;
            return o;
        };
    });

    CLI::App* c_member = sub("member", "membership of a word (letters separated by spaces, @empty for none)");
    c_member->add_option("automaton", file, "automaton JSON")->required();
    c_member->add_option("word", word_text, "the word")->required();
    c_member->callback([&] {
        action = [&] {
            AnyAutomaton any = load_any(file);
            const Word w = parse_word(word_text);
            MembershipResult r = std::holds_alternative<Automaton>(any)
                                     ? membership(std::get<Automaton>(any), w)
                                     : membership_n(std::get<MultiAutomaton>(any), w);
            Outcome o;
            o.code = r.accepted ? kYes : kNo;
            o.report["verdict"] = r.accepted ? "accepted" : "rejected";
            o.report["word"] = format_word(w);
            if (r.witness)
                o.report["witness"] = run_json(*r.witness);
            o.text = verdict_text(r.accepted, "accepted", "rejected");
            if (r.witness) {
                o.text += "\n  " + r.witness->start.state;
                for (const auto& s : r.witness->steps)
                    o.text += (s.consumed ? " -" + s.consumed->str() + "-> " : " -@eps-> ") + s.config.state;
            }
            return o;
        };
    });

    CLI::App* c_empty = sub("empty", "language emptiness");
    c_empty->add_option("automaton", file, "automaton JSON")->required();
    c_empty->callback([&] {
        action = [&] {
            AnyAutomaton any = load_any(file);
            const bool ne = std::visit([](const auto& a) { return nonempty(a); }, any);
            Outcome o;
            o.code = ne ? kNo : kYes;
            o.report["verdict"] = ne ? "nonempty" : "empty";
            o.text = ne ? "nonempty" : "empty";
            return o;
        };
    });

    CLI::App* c_universal = sub("universal", "does the automaton accept every word");
    c_universal->add_option("automaton", file, "automaton JSON")->required();
    c_universal->callback([&] {
        action = [&] {
            const Automaton a = load_fva(file);
            UniversalityResult r = universal(a);
            Outcome o;
            o.code = r.universal ? kYes : kNo;
            o.report["verdict"] = r.universal ? "universal" : "not-universal";
            o.text = r.universal ? "universal" : "not universal";
            if (r.rejected_length) {
                const Word w = rejected_word(a, r);
                o.report["rejected_length"] = *r.rejected_length;
                o.report["rejected_word"] = format_word(w);
                o.text += "\n  rejected: " + format_word(w);
            }
            return o;
        };
    });

    CLI::App* c_det = sub("deterministic", "syntactic determinism check");
    c_det->add_option("automaton", file, "automaton JSON")->required();
    c_det->callback([&] {
        action = [&] {
            DeterminismResult r = is_deterministic(load_fva(file));
            Outcome o;
            o.code = r.deterministic ? kYes : kNo;
            o.report["verdict"] = r.deterministic ? "deterministic" : "nondeterministic";
            o.text = r.deterministic ? "deterministic" : "nondeterministic";
            if (r.offender) {
                o.report["offender"] = *r.offender;
                o.report["reason"] = r.reason;
                o.text += "\n  state " + *r.offender + ": " + r.reason;
            }
            return o;
        };
    });

    auto binary_op = [&](const char* name, const char* help, std::function<Automaton(const Automaton&, const Automaton&)> f) {
        CLI::App* s = sub(name, help);
        s->add_option("automata", files, "two automaton JSON files")->required()->expected(2);
        with_output(s);
        s->callback([&, f, name = std::string(name)] {
            action = [&, f, name] { return automaton_result(f(load_fva(files[0]), load_fva(files[1])), name); };
        });
    };
    auto unary_op = [&](const char* name, const char* help, std::function<Automaton(const Automaton&)> f) {
        CLI::App* s = sub(name, help);
        s->add_option("automaton", file, "automaton JSON")->required();
        with_output(s);
        s->callback([&, f, name = std::string(name)] {
            action = [&, f, name] { return automaton_result(f(load_fva(file)), name); };
        });
    };
    binary_op("union", "language union", [](const Automaton& a, const Automaton& b) { return union_of(a, b); });
    binary_op("concat", "language concatenation", [](const Automaton& a, const Automaton& b) { return concat(a, b); });
    binary_op("intersect", "language intersection",
              [](const Automaton& a, const Automaton& b) { return intersect(a, b); });
    unary_op("star", "Kleene star", [](const Automaton& a) { return star(a); });
    unary_op("elim-eps", "remove epsilon transitions", [](const Automaton& a) { return eliminate_eps(a); });

    CLI::App* c_reduce = sub("reduce", "turn an nfva into an fva");
    c_reduce->add_option("automaton", file, "nfva JSON")->required();
    with_output(c_reduce);
    c_reduce->callback([&] {
        action = [&] {
            AnyAutomaton any = load_any(file);
            if (std::holds_alternative<Automaton>(any))
                return automaton_result(std::get<Automaton>(any), "reduce");
            return automaton_result(reduce_nfva(std::get<MultiAutomaton>(any)), "reduce");
        };
    });

    CLI::App* c_cdfva = sub("contains-dfva", "L(a) included in L(d) for deterministic d");
    c_cdfva->add_option("automata", files, "a.json d.json")->required()->expected(2);
    c_cdfva->callback([&] {
        action = [&] {
            const bool r = contains_dfva(load_fva(files[0]), load_fva(files[1]));
            Outcome o;
            o.code = r ? kYes : kNo;
            o.report["verdict"] = r ? "contained" : "not-contained";
            o.text = r ? "contained" : "not contained";
            return o;
        };
    });

    CLI::App* c_fa = sub("fa-contain", "containment between an fva and a finite automaton");
    c_fa->add_option("automata", files, "fva.json fa.json")->required()->expected(2);
    c_fa->add_option("--direction", direction, "fva-in-fa or fa-in-fva")
        ->check(CLI::IsMember({"fva-in-fa", "fa-in-fva"}));
    c_fa->callback([&] {
        action = [&] {
            const auto dir = direction == "fva-in-fa" ? ContainmentDirection::fva_in_fa : ContainmentDirection::fa_in_fva;
            const bool r = fa_containment(load_fva(files[0]), load_fva(files[1]), dir);
            Outcome o;
            o.code = r ? kYes : kNo;
            o.report["verdict"] = r ? "contained" : "not-contained";
            o.report["direction"] = direction;
            o.text = r ? "contained" : "not contained";
            return o;
        };
    });

    CLI::App* c_sim = sub("sim", "does the second automaton simulate the first");
    c_sim->add_option("automata", files, "a.json b.json")->required()->expected(2);
    c_sim->callback([&] {
        action = [&] {
            SimulationResult r = fva_simulates(load_fva(files[0]), load_fva(files[1]));
            Outcome o;
            o.code = r.simulates ? kYes : kNo;
            o.report["verdict"] = r.simulates ? "simulates" : "does-not-simulate";
            o.report["positions"] = r.positions;
            o.text = verdict_text(r.simulates, "simulates", "does not simulate");
            return o;
        };
    });

    CLI::App* c_gsim = sub("gsim", "ground simulation of a client cfva by a service cfva");
    c_gsim->add_option("automata", files, "client.json service.json")->required()->expected(2);
    c_gsim->add_option("--pool-extra", pool_extra, "additional fresh letters in the pool");
    c_gsim->add_flag("--buchi", buchi, "require infinitely many client moves");
    with_output(c_gsim);
    c_gsim->callback([&] {
        action = [&] {
            GameOptions opt;
            opt.pool_extra = pool_extra;
            GsimResult r = gsimulates(load_fva(files[0]), load_fva(files[1]), opt,
                                      buchi ? WinningCondition::buchi : WinningCondition::safety);
            Outcome o;
            o.code = r.simulates ? kYes : kNo;
            json doc = strategy_json(*r.game, r.solution);
            o.report["verdict"] = r.simulates ? "simulates" : "does-not-simulate";
            o.report["positions"] = r.game->size();
            o.report["strategy_entries"] = r.solution.strategy.size();
            if (!r.simulates)
                o.report["refusal"] = doc["refusal"];
            o.text = verdict_text(r.simulates, "eloise wins: client is simulated", "abelard wins: client is not simulated");
            o.text += "\n  positions: " + std::to_string(r.game->size());
            o.artifact = doc.dump(2) + "\n";
            return o;
        };
    });

    CLI::App* c_compose = sub("compose", "synthesize an orchestrator for a client and services");
    c_compose->add_option("automata", files, "client.json service.json ...")->required()->expected(1, -1);
    c_compose->add_option("--pool-extra", pool_extra, "additional fresh letters in the pool");
    with_output(c_compose);
    c_compose->callback([&] {
        action = [&] {
            const Cfva client = load_fva(files[0]);
            std::vector<Cfva> services;
            std::vector<std::string> names;
            for (std::size_t i = 1; i < files.size(); ++i) {
                services.push_back(load_fva(files[i]));
                names.push_back(stem(files[i]));
            }
            GameOptions opt;
            opt.pool_extra = pool_extra;
            SynthesisResult r = synthesize(client, services, opt);
            Outcome o;
            if (r.orchestrator) {
                r.orchestrator->service_names = names;
                o.report["verdict"] = "orchestrator";
                o.report["positions"] = r.orchestrator->positions;
                o.report["strategy_entries"] = r.orchestrator->entries.size();
                o.text = "orchestrator found (" + std::to_string(r.orchestrator->entries.size()) + " entries)";
                o.artifact = to_json(*r.orchestrator).dump(2) + "\n";
            } else {
                o.code = kNo;
                o.report["verdict"] = "refusal";
                o.report["refusal"] = to_json(*r.refusal);
                o.text = "refusal; losing client path:";
                for (const auto& m : r.refusal->client_path)
                    o.text += " " + m;
            }
            return o;
        };
    });

    CLI::App* c_replay = sub("replay", "run an orchestrator on a client session");
    c_replay->add_option("orchestrator", file, "orchestrator JSON")->required();
    c_replay->add_option("trace", trace_path, "trace file, one or more messages per line")->required();
    c_replay->callback([&] {
        action = [&] {
            json j;
            const std::string text = read_file(file);
            try {
                j = json::parse(text);
            } catch (const json::parse_error& e) {
                throw ParseError(file + " (byte " + std::to_string(e.byte) + ")", "malformed JSON");
            }
            const Orchestrator orch = orchestrator_from_json(j);
            const auto trace = parse_trace(read_file(trace_path));
            Outcome o;
            try {
                const auto ds = replay(orch, trace);
                json list = json::array();
                for (const auto& d : ds) {
                    json names = json::array();
                    for (auto c : d.components)
                        names.push_back(c < orch.service_names.size() ? orch.service_names[c] : std::to_string(c));
                    list.push_back(json{{"step", d.step}, {"message", d.message}, {"services", names},
                                        {"components", d.components}});
                    o.text += (o.text.empty() ? "" : "\n") + std::to_string(d.step) + ". " + d.message + " -> ";
                    for (std::size_t k = 0; k < names.size(); ++k)
                        o.text += (k ? "," : "") + names[k].get<std::string>();
                }
                o.report["verdict"] = "delegated";
                o.report["delegations"] = list;
                if (ds.empty())
                    o.text = "empty session";
            } catch (const TraceDiverged& e) {
                o.code = kNo;
                o.report["verdict"] = "diverged";
                o.report["step"] = e.step();
                o.report["position"] = e.position();
                o.report["reason"] = e.what();
                o.text = e.what();
            }
            return o;
        };
    });

    CLI::App* c_sample = sub("sample", "accepted words over a pool up to a length");
    c_sample->add_option("automaton", file, "automaton JSON")->required();
    c_sample->add_option("--pool", pool_text, "comma separated letters (default: automaton letters plus fresh ones)");
    c_sample->add_option("--max-len", max_len, "maximal word length")->capture_default_str();
    c_sample->callback([&] {
        action = [&] {
            AnyAutomaton any = load_any(file);
            std::set<Word> words;
            std::vector<Letter> pool;
            if (std::holds_alternative<Automaton>(any)) {
                const Automaton& a = std::get<Automaton>(any);
                pool = pool_text.empty() ? default_pool(a) : parse_pool(pool_text);
                words = sample_language(a, pool, max_len);
            } else {
                const MultiAutomaton& a = std::get<MultiAutomaton>(any);
                if (pool_text.empty()) {
                    std::set<Letter> used = a.letters();
                    pool.assign(used.begin(), used.end());
                    for (auto& l : mint_letters(used, a.variables.size() + 1))
                        pool.push_back(std::move(l));
                } else {
                    pool = parse_pool(pool_text);
                }
                words = sample_language(a, pool, max_len);
            }
            Outcome o;
            json pj = json::array();
            for (const auto& l : pool)
                pj.push_back(l.str());
            o.report["verdict"] = "ok";
            o.report["pool"] = pj;
            o.report["max_len"] = max_len;
            o.report["words"] = word_list(words);
            o.report["count"] = words.size();
            for (const auto& w : words)
                o.text += (o.text.empty() ? "" : "\n") + format_word(w);
            if (words.empty())
                o.text = "(no words)";
            return o;
        };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kFail;
    }

    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = action();
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << "\n";
        if (settings.json_only)
            out << json{{"verdict", "error"}, {"error", e.what()}, {"cap", e.cap()}}.dump(2) << "\n";
        return kFail;
    } catch (const InvalidAutomaton& e) {
        err << "error: " << e.what() << "\n";
        if (settings.json_only)
            out << json{{"verdict", "error"}, {"error", e.what()}, {"violations", e.violations()}}.dump(2) << "\n";
        return kFail;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        if (settings.json_only)
            out << json{{"verdict", "error"}, {"error", e.what()}}.dump(2) << "\n";
        return kFail;
    }
    o.report["command"] = args;
    if (settings.timing)
        o.report["timing_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    if (o.artifact && !settings.output.empty()) {
        try {
            write_file(settings.output, *o.artifact);
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return kFail;
        }
        o.report["output"] = settings.output;
    }
    if (settings.json_only) {
        if (o.artifact && settings.output.empty())
            o.report["result"] = json::parse(*o.artifact);
        out << o.report.dump(2) << "\n";
    } else if (o.artifact && settings.output.empty()) {
        out << *o.artifact;
    } else {
        out << o.text << "\n";
    }
    return o.code;
}

}  // namespace fva

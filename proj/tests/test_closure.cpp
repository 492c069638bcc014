#include <catch_amalgamated.hpp>

#include "fva/closure.hpp"
#include "fva/words.hpp"
#include "support/differential.hpp"
#include "support/examples.hpp"

using namespace fva;
namespace ex = fva::examples;

namespace {

std::set<Word> words(std::initializer_list<const char*> ws)
{
    std::set<Word> out;
    for (const char* w : ws)
        out.insert(parse_word(w));
    return out;
}

const std::vector<Letter> ab = oracle::letters({"a", "b"});
const std::vector<Letter> abc = oracle::letters({"a", "b", "c"});

bool has_eps(const Automaton& a)
{
    for (const auto& t : a.transitions)
        if (t.label.is_eps())
            return true;
    return false;
}

}  // namespace

TEST_CASE("union of the example automata")
{
    const Fva u = union_of(ex::doubling(), ex::repeat_last());
    CHECK(validate(u).empty());
    CHECK(oracle::sample(u, ab, 4) ==
          oracle::set_union(oracle::sample(ex::doubling(), ab, 4), oracle::sample(ex::repeat_last(), ab, 4)));
    CHECK(oracle::sample(union_of(ex::doubling(), ex::empty_language()), abc, 4) == oracle::sample(ex::doubling(), abc, 4));
    CHECK(oracle::sample(union_of(ex::doubling(), ex::doubling()), abc, 4) == oracle::sample(ex::doubling(), abc, 4));
}

TEST_CASE("concatenation of two single letters")
{
    const Fva c = concat(ex::word_automaton({"a"}), ex::word_automaton({"b"}));
    CHECK_FALSE(has_eps(c));
    CHECK(c.type == AutomatonType::fva);
    CHECK(oracle::sample(c, ab, 3) == words({"a b"}));
}

TEST_CASE("concatenation keeps the two memories apart")
{
    // x x then x x: the second copy must be free to pick a new letter.
    const Fva c = concat(ex::doubling(), ex::doubling());
    CHECK(oracle::accepts(c, parse_word("a a b b")));
    CHECK(oracle::sample(c, abc, 4) == oracle::sample(ex::doubling(), abc, 4));
}

TEST_CASE("star of the empty language is the empty word")
{
    CHECK(oracle::sample(star(ex::empty_language()), abc, 4) == words({"@empty"}));
}

TEST_CASE("star of a refreshed one-variable step accepts everything")
{
    Fva a;
    a.states = {"q0", "qf"};
    a.initial = {"q0"};
    a.accepting = {"qf"};
    a.add_transition("q0", Label::var("x"), "qf");
    a.refresh[Variable("x")] = {"qf"};
    std::set<Word> all;
    oracle::for_each_word(ab, 3, [&](const Word& w) { all.insert(w); });
    CHECK(oracle::sample(star(a), ab, 3) == all);
}

TEST_CASE("star releases bindings between iterations")
{
    // x never refreshed inside one iteration: L = { z | z any letter }.
    Fva a;
    a.states = {"q0", "qf"};
    a.initial = {"q0"};
    a.accepting = {"qf"};
    a.add_transition("q0", Label::var("x"), "qf");
    const Fva s = star(a);
    CHECK(oracle::accepts(s, parse_word("a b c")));
    CHECK(oracle::sample(s, abc, 3) == oracle::star_words(oracle::sample(a, abc, 3), 3));
}

TEST_CASE("single epsilon from initial to accepting")
{
    Fva e;
    e.type = AutomatonType::eps_fva;
    e.states = {"q0", "q1"};
    e.initial = {"q0"};
    e.accepting = {"q1"};
    e.add_transition("q0", Label::eps(), "q1");
    const Fva f = eliminate_eps(e);
    CHECK_FALSE(has_eps(f));
    CHECK(oracle::sample(f, abc, 3) == words({"@empty"}));
}

TEST_CASE("epsilon after a letter")
{
    Fva e;
    e.type = AutomatonType::eps_fva;
    e.variables = {Variable("x")};
    e.states = {"q0", "q1", "q2"};
    e.initial = {"q0"};
    e.accepting = {"q2"};
    e.add_transition("q0", Label::letter("a"), "q1");
    e.add_transition("q1", Label::eps(), "q2");
    e.refresh[Variable("x")] = {"q1", "q2"};
    CHECK(oracle::sample(eliminate_eps(e), abc, 3) == words({"a"}));
}

TEST_CASE("refreshing along an epsilon path is remembered")
{
    // q0 -x-> q1 -eps-> r (refreshes x) -eps-> q1 ... the loop through r
    // frees x, so x x differs from x r x.
    Fva e;
    e.type = AutomatonType::eps_fva;
    e.variables = {Variable("x")};
    e.states = {"q0", "q1", "r", "f"};
    e.initial = {"q0"};
    e.accepting = {"f"};
    e.add_transition("q0", Label::var("x"), "q1");
    e.add_transition("q1", Label::eps(), "r");
    e.add_transition("r", Label::eps(), "q1");
    e.add_transition("q1", Label::var("x"), "f");
    e.refresh[Variable("x")] = {"r"};
    EliminationStats stats;
    const Fva f = eliminate_eps(e, &stats);
    CHECK(oracle::sample(f, abc, 3) == oracle::sample(e, abc, 3));
    CHECK(oracle::accepts(f, parse_word("a b")));
    CHECK(stats.result_states <= stats.state_bound);
}

TEST_CASE("epsilon-free input keeps its language")
{
    testing::Gen gen(31);
    for (int round = 0; round < 100; ++round) {
        const Fva a = gen.fva();
        const auto pool = testing::differential_pool(a);
        CHECK(oracle::sample(eliminate_eps(a), pool, 4) == oracle::sample(a, pool, 4));
    }
}

TEST_CASE("product of the examples")
{
    const NFva p = product2(ex::doubling(), ex::repeat_last());
    CHECK(p.arity == 2);
    CHECK(oracle::accepts(p, parse_word("a a")));
    CHECK_FALSE(oracle::accepts(p, parse_word("a b")));
    CHECK(membership_n(p, parse_word("a a")).accepted);
}

TEST_CASE("product with a universal loop keeps the verdict")
{
    testing::Gen gen(32);
    for (int round = 0; round < 100; ++round) {
        const Fva a = gen.fva();
        const NFva p = product2(a, ex::refreshed_loop());
        const auto pool = testing::differential_pool(a, nullptr);
        for (int k = 0; k < 10; ++k) {
            const Word w = gen.word(pool, 5);
            CHECK(oracle::accepts(p, w) == oracle::accepts(a, w));
        }
    }
}

TEST_CASE("reduction of the 2-fva example gives (a z)^n")
{
    const Fva f = reduce_nfva(ex::two_fva());
    CHECK(validate(f).empty());
    const auto got = oracle::sample(f, abc, 6);
    CHECK(got == oracle::sample(ex::two_fva(), abc, 6));
    std::set<Word> want;
    for (const char* z : {"a", "b", "c"})
        for (int n = 0; n <= 3; ++n) {
            Word w;
            for (int i = 0; i < n; ++i) {
                w.emplace_back("a");
                w.emplace_back(z);
            }
            want.insert(w);
        }
    CHECK(got == want);
}

TEST_CASE("reduction of an arity-one n-fva copies it")
{
    NFva n;
    n.arity = 1;
    n.variables = {Variable("x")};
    n.states = {"p0", "p1"};
    n.initial = {"p0"};
    n.accepting = {"p0"};
    n.transitions.insert({"p0", {Label::var("x")}, "p1"});
    n.transitions.insert({"p1", {Label::var("x")}, "p0"});
    n.refresh[Variable("x")] = {"p0"};
    const Fva f = reduce_nfva(n);
    CHECK(f.states.size() == 2);
    CHECK(oracle::sample(f, abc, 5) == oracle::sample(ex::doubling(), abc, 5));
}

TEST_CASE("reduced product equals the intersection of samples")
{
    const Fva r = reduce_nfva(product2(ex::doubling(), ex::repeat_last()));
    CHECK(oracle::sample(r, ab, 4) ==
          oracle::set_intersection(oracle::sample(ex::doubling(), ab, 4), oracle::sample(ex::repeat_last(), ab, 4)));
}

TEST_CASE("reduction refuses to exceed its state cap")
{
    ReduceOptions tight;
    tight.state_cap = 1;
    CHECK_THROWS_AS(reduce_nfva(ex::two_fva(), tight), CapExceeded);
}

TEST_CASE("intersection of the examples")
{
    const Fva i = intersect(ex::doubling(), ex::repeat_last());
    CHECK(oracle::sample(i, ab, 4) ==
          oracle::set_intersection(oracle::sample(ex::doubling(), ab, 4), oracle::sample(ex::repeat_last(), ab, 4)));
    CHECK(oracle::sample(intersect(ex::doubling(), ex::doubling()), abc, 4) == oracle::sample(ex::doubling(), abc, 4));
    CHECK(oracle::sample(intersect(ex::doubling(), ex::empty_language()), abc, 4).empty());
    CHECK(trim(intersect(ex::doubling(), ex::empty_language())).states.empty());
}

TEST_CASE("intersection output is trimmed")
{
    testing::Gen gen(33);
    for (int round = 0; round < 50; ++round) {
        const Fva i = intersect(gen.fva({}, "s"), gen.fva({}, "t"));
        CHECK(trim(i) == i);
    }
}

TEST_CASE("constructions agree with set operations on random automata")
{
    testing::Gen gen(34);
    testing::ClosureTally tally;
    for (int round = 0; round < 100; ++round)
        testing::closure_round(gen, tally, 4);
    INFO((tally.mismatches.empty() ? std::string() : tally.mismatches.front()));
    CHECK(tally.mismatches.empty());
    CHECK(tally.checks == 700);
}

#include <catch_amalgamated.hpp>

#include "fva/words.hpp"
#include "support/examples.hpp"
#include "support/oracle.hpp"
#include "support/random.hpp"

using namespace fva;
namespace ex = fva::examples;

namespace {

Configuration cfg(StateId q, Memory m = {}) { return {std::move(q), std::move(m)}; }

Memory bound(const char* x, const char* a) { return {{Variable(x), Letter(a)}}; }

}  // namespace

TEST_CASE("step binds a free variable and keeps it outside its refresh states")
{
    const Fva a = ex::doubling();
    CHECK(step(a, cfg("p0"), Letter("a")) == std::set<Configuration>{cfg("p1", bound("x", "a"))});
}

TEST_CASE("step on a bound variable needs the same letter")
{
    const Fva a = ex::doubling();
    CHECK(step(a, cfg("p1", bound("x", "a")), Letter("b")).empty());
}

TEST_CASE("step drops bindings refreshed at the target")
{
    const Fva a = ex::doubling();
    CHECK(step(a, cfg("p1", bound("x", "a")), Letter("a")) == std::set<Configuration>{cfg("p0")});
}

TEST_CASE("membership on the example languages")
{
    CHECK(membership(ex::doubling(), parse_word("a a b b")).accepted);
    CHECK_FALSE(membership(ex::doubling(), parse_word("a b")).accepted);
    CHECK(membership(ex::doubling(), parse_word("@empty")).accepted);
    CHECK(membership(ex::repeat_last(), parse_word("a b a")).accepted);
    CHECK_FALSE(membership(ex::repeat_last(), parse_word("a b c")).accepted);
}

TEST_CASE("witness runs replay")
{
    const Word w = parse_word("a a b b");
    const auto r = membership(ex::doubling(), w);
    REQUIRE(r.witness);
    CHECK(replay_run(ex::doubling(), w, *r.witness));
    CHECK(r.witness->steps.size() == 4);
    CHECK(r.witness->steps.back().config.state == "p0");
}

TEST_CASE("witnesses prefer letter labels")
{
    Fva a;
    a.states = {"s", "t", "u"};
    a.initial = {"s"};
    a.accepting = {"t", "u"};
    a.add_transition("s", Label::var("x"), "u");
    a.add_transition("s", Label::letter("a"), "t");
    const auto r = membership(a, parse_word("a"));
    REQUIRE(r.witness);
    CHECK(r.witness->steps.front().config.state == "t");
}

TEST_CASE("membership agrees with the reference semantics and witnesses replay")
{
    testing::Gen gen(21);
    std::size_t accepted = 0;
    for (int round = 0; round < 300; ++round) {
        const Fva a = gen.fva();
        const auto pool = default_pool(a);
        for (int k = 0; k < 20; ++k) {
            const Word w = gen.word(pool, 6);
            const auto r = membership(a, w);
            REQUIRE(r.accepted == oracle::accepts(a, w));
            if (r.accepted) {
                ++accepted;
                REQUIRE(r.witness);
                CHECK(replay_run(a, w, *r.witness));
            }
        }
    }
    CHECK(accepted > 100);
}

TEST_CASE("a run with a wrong letter does not replay")
{
    const Word w = parse_word("a a");
    auto r = membership(ex::doubling(), w);
    REQUIRE(r.witness);
    CHECK_FALSE(replay_run(ex::doubling(), parse_word("a b"), *r.witness));
}

TEST_CASE("eps-fva membership follows epsilon moves")
{
    Fva e;
    e.type = AutomatonType::eps_fva;
    e.states = {"q0", "q1", "q2"};
    e.initial = {"q0"};
    e.accepting = {"q2"};
    e.add_transition("q0", Label::letter("a"), "q1");
    e.add_transition("q1", Label::eps(), "q2");
    CHECK(membership(e, parse_word("a")).accepted);
    CHECK_FALSE(membership(e, parse_word("@empty")).accepted);
}

TEST_CASE("n-fva membership needs one letter for the whole tuple")
{
    const NFva n = ex::two_fva();
    CHECK(membership_n(n, parse_word("@empty")).accepted);
    CHECK(membership_n(n, parse_word("a b")).accepted);
    CHECK(membership_n(n, parse_word("a b a b")).accepted);
    CHECK_FALSE(membership_n(n, parse_word("a b a c")).accepted);
    CHECK_FALSE(membership_n(n, parse_word("b b")).accepted);
    CHECK_FALSE(membership_n(n, parse_word("a")).accepted);
}

TEST_CASE("n-fva membership agrees with the reference semantics")
{
    testing::Gen gen(22);
    for (int round = 0; round < 200; ++round) {
        const NFva n = gen.nfva(gen.range(1, 3));
        const auto pool = oracle::letters({"a", "b", "c", "d"});
        for (int k = 0; k < 10; ++k) {
            const Word w = gen.word(pool, 5);
            REQUIRE(membership_n(n, w).accepted == oracle::accepts(n, w));
        }
    }
}

TEST_CASE("nonemptiness is graph reachability")
{
    CHECK(nonempty(ex::doubling()));
    CHECK_FALSE(nonempty(ex::empty_language()));
    Fva one;
    one.states = {"q0", "qf"};
    one.initial = {"q0"};
    one.accepting = {"qf"};
    one.add_transition("q0", Label::var("x"), "qf");
    CHECK(nonempty(one));
    CHECK(membership(one, parse_word("hello")).accepted);
}

TEST_CASE("nonemptiness agrees with sampling on random automata")
{
    testing::Gen gen(23);
    for (int round = 0; round < 300; ++round) {
        const Fva a = gen.fva();
        // Every accepting path of at most |Q| steps is realized over this pool.
        const auto pool = default_pool(a, a.states.size());
        CHECK(nonempty(a) == !oracle::sample(a, pool, a.states.size()).empty());
    }
}

TEST_CASE("sample_language of the doubling automaton")
{
    const auto pool = oracle::letters({"a", "b"});
    std::set<Word> want;
    for (const char* w : {"@empty", "a a", "b b", "a a a a", "a a b b", "b b a a", "b b b b"})
        want.insert(parse_word(w));
    CHECK(sample_language(ex::doubling(), pool, 4) == want);
    CHECK(sample_language(ex::doubling(), pool, 1) == std::set<Word>{Word{}});
    CHECK(sample_language(ex::empty_language(), oracle::letters({"a"}), 3).empty());
}

TEST_CASE("sample_language matches the reference sampler")
{
    testing::Gen gen(24);
    for (int round = 0; round < 200; ++round) {
        const Fva a = gen.fva();
        const auto pool = default_pool(a);
        CHECK(sample_language(a, pool, 4) == oracle::sample(a, pool, 4));
    }
    for (int round = 0; round < 100; ++round) {
        const NFva n = gen.nfva();
        const auto pool = oracle::letters({"a", "b", "c"});
        CHECK(sample_language(n, pool, 4) == oracle::sample(n, pool, 4));
    }
}

TEST_CASE("membership is consistent with sampling over its own letters")
{
    testing::Gen gen(25);
    for (int round = 0; round < 100; ++round) {
        const Fva a = gen.fva();
        const auto pool = default_pool(a);
        const Word w = gen.word(pool, 5);
        std::set<Letter> letters(w.begin(), w.end());
        for (const auto& l : a.letters())
            letters.insert(l);
        const auto s = sample_language(a, {letters.begin(), letters.end()}, w.size());
        CHECK(membership(a, w).accepted == s.contains(w));
    }
}

TEST_CASE("words print and parse")
{
    CHECK(parse_word("  a   b ") == oracle::letters({"a", "b"}));
    CHECK(parse_word("@empty").empty());
    CHECK(format_word({}) == "@empty");
    CHECK(format_word(oracle::letters({"a", "b"})) == "a b");
}

TEST_CASE("default pool has the automaton letters and |X|+1 fresh ones")
{
    const auto pool = default_pool(ex::repeat_last());
    CHECK(pool.size() == 3);
    const auto p2 = default_pool(ex::single_a(), 2);
    CHECK(p2.size() == 4);
    CHECK(std::find(p2.begin(), p2.end(), Letter("#f0")) != p2.end());
}

TEST_CASE("the second example accepts exactly the words whose last letter occurred before")
{
    std::size_t accepted = 0;
    oracle::for_each_word(oracle::letters({"a", "b", "c"}), 5, [&](const Word& w) {
        const bool repeat = !w.empty() && std::find(w.begin(), w.end() - 1, w.back()) != w.end() - 1;
        REQUIRE(membership(ex::repeat_last(), w).accepted == repeat);
        accepted += repeat;
    });
    CHECK(accepted > 0);
    CHECK_FALSE(membership(ex::repeat_last(), parse_word("a a b")).accepted);
}

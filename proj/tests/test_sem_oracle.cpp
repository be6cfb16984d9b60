#include <doctest.h>

#include "futs/crosscheck.hpp"
#include "futs/sem_oracle.hpp"
#include "support/gen.hpp"

using namespace futs;

namespace {

struct Fixture {
    Model model;
    Fixture(Lang lang, const std::string& defs) : model(parse_model(lang, defs + "\ninit nil")) {}
    TermPtr t(const std::string& text) { return parse_term(model.lang, text, model.env); }
    std::string k(const std::string& text) { return t(text)->key; }
};

}  // namespace

TEST_CASE("PEPA derivations count separately") {
    Fixture fx(Lang::PEPA, "P = (b, 1).P");
    auto one = pepa_transitions(fx.model.env, fx.t("(a, 3/2).P"));
    REQUIRE(one.size() == 1);
    CHECK(one[0].action == "a");
    CHECK(one[0].rate == Rational(3, 2));
    CHECK(one[0].target->key == "P");
    CHECK(one[0].multiplicity == 1);

    auto two = pepa_transitions(fx.model.env, fx.t("(a, 3/2).P + (a, 3/2).P"));
    REQUIRE(two.size() == 1);
    CHECK(two[0].multiplicity == 2);
    CHECK(pepa_transitions(fx.model.env, fx.t("nil")).empty());

    CHECK(pepa_q(fx.model.env, fx.t("(a, 3/2).P"), {"P"}, "a") == Rational(3, 2));
    CHECK(pepa_q(fx.model.env, fx.t("(a, 3/2).P + (a, 3/2).P"), {"P"}, "a") == 3);
    CHECK(pepa_q(fx.model.env, fx.t("(a, 3/2).P"), {}, "a") == 0);
    // The right operand of a choice moves to its own derivative.
    auto right = pepa_transitions(fx.model.env, fx.t("(b, 1).nil + (a, 2).P"));
    REQUIRE(right.size() == 2);
    CHECK(right[0].target->key == "P");
}

TEST_CASE("syntactic apparent rate") {
    Fixture fx(Lang::PEPA, "P = (a, 2).P + (b, 1).nil");
    auto r = [&](const char* a, const char* s) { return pepa_apparent_rate(fx.model.env, a, *fx.t(s)); };
    CHECK(r("a", "(a, 3/2).nil") == Rational(3, 2));
    CHECK(r("a", "(a, 3/2).nil + (a, 2).nil") == Rational(7, 2));
    CHECK(r("b", "(a, 3/2).nil") == 0);
    CHECK(r("a", "P") == 2);
    CHECK(r("a", "P <a> (a, 5).nil") == 2);
    CHECK(r("a", "P <> (a, 5).nil") == 7);
}

TEST_CASE("PEPA cooperation rate") {
    Fixture fx(Lang::PEPA, "P = (a, 2).P");
    auto tr = pepa_transitions(fx.model.env, fx.t("P <a> ((a, 1).P + (a, 3).nil)"));
    REQUIRE(tr.size() == 2);
    // arf = min(2, 4) / (2 * 4)
    CHECK(tr[0].rate * tr[0].multiplicity + tr[1].rate * tr[1].multiplicity == 2);
}

TEST_CASE("IML transitions") {
    Fixture fx(Lang::IML, "P = a.P");
    auto ap = iml_transitions(fx.model.env, fx.t("a.P"));
    REQUIRE(ap.interactive.size() == 1);
    CHECK(ap.interactive[0].target->key == "P");
    CHECK(ap.markov.empty());
    auto rr = iml_transitions(fx.model.env, fx.t("3/2.P + 3/2.P"));
    REQUIRE(rr.markov.size() == 1);
    CHECK(rr.markov[0].multiplicity == 2);
    CHECK(iml_R(rr, {"P"}) == 3);
    CHECK_FALSE(iml_T(ap, "b", {"P"}));
    CHECK(iml_T(ap, "a", {"P"}));
    auto sync = iml_transitions(fx.model.env, fx.t("a.P |[a]| (a.nil + b.nil)"));
    // a synchronises, b interleaves
    REQUIRE(sync.interactive.size() == 2);
    CHECK(sync.interactive[0].action == "a");
    CHECK(sync.interactive[0].target->key == fx.k("P |[a]| nil"));
    CHECK(sync.interactive[1].target->key == fx.k("a.P |[a]| nil"));
}

TEST_CASE("TPC transitions") {
    Fixture fx(Lang::TPC, "P = a.P");
    auto tr = tpc_transitions(fx.model.env, fx.t("(3).P"));
    REQUIRE(tr.timed.size() == 3);
    CHECK(tr.timed[0].delay == 1);
    CHECK(tr.timed[0].target->key == "(2).P");
    CHECK(tr.timed[1].target->key == "(1).P");
    CHECK(tr.timed[2].target->key == "P");
    auto alt = tpc_transitions(fx.model.env, fx.t("(1).nil + (2).nil"));
    REQUIRE(alt.timed.size() == 1);
    CHECK(alt.timed[0].delay == 1);
    CHECK(alt.timed[0].target->key == fx.k("nil + (1).nil"));
    CHECK(tpc_transitions(fx.model.env, fx.t("a.P")).timed.empty());
    auto sum = tpc_transitions(fx.model.env, fx.t("(2).(5).nil"));
    CHECK(sum.timed.back().delay == 7);
    CHECK_THROWS_AS(tpc_transitions(fx.model.env, fx.t("(50).nil |[ ]| (50).nil"), 10), OracleError);
}

TEST_CASE("MAL transitions") {
    Fixture fx(Lang::MAL, "P = a.{1: P}\nP1 = a.{1: P1}\nP2 = b.{1: P2}\nQ = c.{1: Q}");
    auto act = mal_transitions(fx.model.env, fx.t("a.{1/2: P1 [] 1/2: P2}"));
    REQUIRE(act.probabilistic.size() == 1);
    CHECK(act.probabilistic[0].action == "a");
    CHECK(act.probabilistic[0].dist.serialize() == "[P1->1/2, P2->1/2]");
    auto par = mal_transitions(fx.model.env, fx.t("(a.{1: P}) |[a]| (a.{1: Q})"));
    REQUIRE(par.probabilistic.size() == 1);
    CHECK(par.probabilistic[0].dist.serialize() == "[" + fx.k("P |[a]| Q") + "->1]");
    auto delay = mal_transitions(fx.model.env, fx.t("3/2.P"));
    REQUIRE(delay.markov.size() == 1);
    CHECK(delay.markov[0].rate == Rational(3, 2));
    CHECK(delay.markov[0].multiplicity == 1);
    CHECK(mal_I(act, "a", {"[P1->1/2, P2->1/2]"}));
    CHECK_FALSE(mal_I(act, "b", {"[P1->1/2, P2->1/2]"}));
    CHECK(mal_M(delay, {"P"}) == Rational(3, 2));
}

TEST_CASE("FuTS and SOS agree on random models") {
    testing::Rng rng(99);
    for (auto lang : {Lang::PEPA, Lang::IML, Lang::TPC, Lang::MAL}) {
        CAPTURE(lang_name(lang));
        for (int i = 0; i < 30; ++i) {
            auto s = testing::random_sample(lang, rng, 300);
            CAPTURE(s.text);
            for (const auto& r : cross_check(s.model, s.futs)) {
                CAPTURE(r.name);
                CAPTURE(r.detail);
                REQUIRE(r.passed);
            }
        }
    }
}

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "futs/bisim.hpp"
#include "support/gen.hpp"

using namespace futs;

namespace {

FutsModel roots(Lang lang, const std::string& defs, std::vector<std::string> terms) {
    Model m = parse_model(lang, defs + "\ninit nil");
    std::vector<TermPtr> ts;
    for (const auto& t : terms) ts.push_back(parse_term(lang, t, m.env));
    return explore(m, ts);
}

FutsModel probabilistic() {
    std::ifstream in(std::string(FUTS_TEST_DATA) + "/probabilistic.json");
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize(ss.str());
}

}  // namespace

TEST_CASE("partitions are canonical") {
    auto p = Partition::canonical({7, 3, 7, 9});
    CHECK(p.block_of == std::vector<std::size_t>{0, 1, 0, 2});
    CHECK(p.count == 3);
    CHECK(partition_json(p) == R"({"blocks":[[0,2],[1],[3]]})");
    CHECK(Partition::single(3).count == 1);
    CHECK(Partition::discrete(3).count == 3);
    CHECK(partition_json(Partition::single(0)) == R"({"blocks":[]})");
}

TEST_CASE("refinement examples") {
    auto one = explore(parse_model(Lang::PEPA, "init nil"));
    CHECK(refine(one).count == 1);

    auto pepa = roots(Lang::PEPA, "", {"(a, 1).nil + (a, 1).nil", "(a, 2).nil"});
    REQUIRE(pepa.size() == 3);
    auto p = refine(pepa);
    CHECK(p.count == 2);
    CHECK(p.same_block(0, 1));
    CHECK_FALSE(p.same_block(0, 2));
    CHECK(p == brute_force(pepa));

    auto iml = roots(Lang::IML, "", {"a.nil + a.nil", "a.nil"});
    CHECK(bisimilar(iml, 0, 1));

    auto mult = roots(Lang::PEPA, "P = (a, 1).P", {"(a, 1).P", "(a, 1).P + (a, 1).P"});
    CHECK_FALSE(bisimilar(mult, 0, 1));
    CHECK(brute_force(mult) == refine(mult));

    auto f = probabilistic();
    CHECK_FALSE(bisimilar(f, 0, 1));
    CHECK(bisimilar(f, 2, 2));
    CHECK(refine(f) == brute_force(f));
}

TEST_CASE("nested refinement groups distributions by class") {
    // both coins move to bisimilar nil-like states, with different keys
    auto f = roots(Lang::MAL, "P = b.{1: P}\nQ = b.{1: Q}",
                   {"a.{1/2: P [] 1/2: Q}", "a.{1: P}", "a.{1/3: P [] 2/3: nil}"});
    auto p = refine(f);
    CHECK(p.same_block(0, 1));
    CHECK_FALSE(p.same_block(0, 2));
    CHECK(p == brute_force(f));
}

TEST_CASE("brute force limits") {
    testing::Rng rng(5);
    auto big = testing::random_raw_model(rng, kBruteForceLimit + 1);
    CHECK_THROWS_AS(brute_force(big), BisimError);
    auto two = testing::random_raw_model(rng, 2);
    for (auto& r : two.relations) r.trans = std::vector<std::map<std::size_t, FinFn>>(2);
    CHECK(brute_force(two).count == 1);
}

TEST_CASE("witness") {
    auto f = roots(Lang::PEPA, "P = (a, 1).P", {"(a, 1).P", "(a, 1).P + (a, 1).P"});
    auto w = distinguish(f, 0, 1);
    REQUIRE(w);
    CHECK(w->label == "a");
    CHECK(w->block.front() == '{');
    CHECK(w->block.find("P") != std::string::npos);
    CHECK(w->left == "1");
    CHECK(w->right == "2");
    CHECK_FALSE(distinguish(f, 0, 0));

    auto g = probabilistic();
    auto wg = distinguish(g, 0, 1);
    REQUIRE(wg);
    CHECK(wg->label == "b");
}

TEST_CASE("minimize") {
    auto pepa = roots(Lang::PEPA, "", {"(a, 1).nil + (a, 1).nil", "(a, 2).nil"});
    auto q = minimize(pepa, refine(pepa));
    CHECK(q.size() == 2);
    CHECK(refine(q) == Partition::discrete(2));

    auto minimal = explore(parse_model(Lang::IML, "X = a.Y\nY = b.X\ninit X"));
    auto mq = minimize(minimal, refine(minimal));
    CHECK(mq.size() == minimal.size());

    CHECK_THROWS_AS(minimize(pepa, Partition::single(3)), BisimError);
}

TEST_CASE("refine agrees with brute force and its serial twin") {
    testing::Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        FutsModel f;
        if (i % 2 == 0) {
            f = testing::random_raw_model(rng, 1 + i % kBruteForceLimit);
        } else {
            auto lang = static_cast<Lang>(i / 2 % 4);
            f = testing::random_sample(lang, rng, kBruteForceLimit).futs;
        }
        CAPTURE(serialize(f, Format::Json));
        RefineStats st, ss;
        auto p = refine(f, &st);
        CHECK(p == refine_serial(f, &ss));
        CHECK(st.rounds == ss.rounds);
        CHECK(st.rounds <= std::max<std::size_t>(f.size(), 1));
        CHECK(is_stable(f, p));
        CHECK(is_bisimulation(f, p));
        CHECK(p == brute_force(f));
    }
}

TEST_CASE("oracle partitions match on random models") {
    testing::Rng rng(13);
    for (auto lang : {Lang::PEPA, Lang::IML, Lang::TPC, Lang::MAL}) {
        for (int i = 0; i < 40; ++i) {
            auto s = testing::random_sample(lang, rng, 200);
            CAPTURE(s.text);
            CHECK(same_partition(s.futs, refine(s.futs), oracle_partition(s.model, 200)));
        }
    }
}

TEST_CASE("quotient images are bisimilar to their originals") {
    testing::Rng rng(17);
    for (int i = 0; i < 40; ++i) {
        auto s = testing::random_sample(static_cast<Lang>(i % 4), rng, 200);
        CAPTURE(s.text);
        auto p = refine(s.futs);
        auto q = minimize(s.futs, p);
        CHECK(q.size() == p.count);
        CHECK(refine(q).count == q.size());
        auto u = disjoint_union(s.futs, q);
        auto up = refine(u);
        for (std::size_t st = 0; st < s.futs.size(); ++st) {
            auto image = u.id_of("R:[" + s.futs.states[p.blocks()[p.block_of[st]].front()].key + "]");
            REQUIRE(image != kNoBlock);
            CHECK(up.same_block(u.id_of("L:" + s.futs.states[st].key), image));
        }
    }
}

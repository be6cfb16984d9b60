// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "futs/bisim.hpp"
#include "futs/cli.hpp"
#include "futs/crosscheck.hpp"
#include "support/gen.hpp"

using namespace futs;
using Clock = std::chrono::steady_clock;

namespace {

constexpr Lang kLangs[] = {Lang::PEPA, Lang::IML, Lang::TPC, Lang::MAL};

struct Outcome {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// One random corpus per language, reused by several criteria. Building it
// counts toward the totality budget.
std::vector<testing::Sample> corpus[4];

Outcome semiring_laws() {
    Outcome o;
    testing::Rng rng(1);
    for (auto tag : {SemiringTag::BOOL, SemiringTag::NNRAT, SemiringTag::NATSET}) {
        auto [zero, one] = sr_constants(tag);
        for (int i = 0; i < 1000; ++i) {
            auto a = testing::random_value(tag, rng), b = testing::random_value(tag, rng),
                 c = testing::random_value(tag, rng);
            bool laws = sr_add(sr_add(a, b), c) == sr_add(a, sr_add(b, c)) && sr_add(a, b) == sr_add(b, a) &&
                        sr_mul(sr_mul(a, b), c) == sr_mul(a, sr_mul(b, c)) &&
                        sr_mul(a, sr_add(b, c)) == sr_add(sr_mul(a, b), sr_mul(a, c)) &&
                        sr_mul(sr_add(a, b), c) == sr_add(sr_mul(a, c), sr_mul(b, c)) && sr_add(a, zero) == a &&
                        sr_mul(a, one) == a && sr_mul(one, a) == a && sr_mul(a, zero) == zero &&
                        sr_mul(zero, a) == zero;
            if (!laws) o.fail(std::string(tag_name(tag)) + " " + a.text() + " " + b.text() + " " + c.text());
        }
    }
    return o;
}

Outcome golden() {
    Outcome o;
    std::ifstream in(std::string(FUTS_TEST_DATA) + "/probabilistic.json");
    std::ostringstream ss;
    ss << in.rdbuf();
    auto f = deserialize(ss.str());
    const auto& r = f.relations.at(0);
    const char* expect_a[] = {"[s0->1/2, s1->1/2]", "[s1->1/2, s2->1/2]", "[s2->1/2, s3->1/2]", "[s0->1/2, s3->1/2]"};
    const char* expect_b[] = {"[]", "[s0->1/6, s2->1/2, s3->1/3]", "[]", "[]"};
    for (std::size_t s = 0; s < 4; ++s) {
        if (r.at(s, 0).serialize() != expect_a[s]) o.fail("a-continuation of s" + std::to_string(s));
        if (r.at(s, 1).serialize() != expect_b[s]) o.fail("b-continuation of s" + std::to_string(s));
        if (ff_oplus(r.at(s, 0)).as_rational() != 1) o.fail("a-continuation of s" + std::to_string(s) + " is not a distribution");
    }
    if (serialize(f, Format::Dot).find("s1 -> s0 [label=\"b / 1/6\"]") == std::string::npos) o.fail("DOT edge missing");
    return o;
}

void apply(Outcome& o, const testing::Sample& s, const std::function<CheckResult(const Model&, const FutsModel&)>& c) {
    auto r = c(s.model, s.futs);
    if (!r.passed) o.fail(r.name + ": " + r.detail + " in\n" + s.text);
}

Outcome totality(Lang lang) {
    Outcome o;
    testing::Rng rng(100 + static_cast<int>(lang));
    auto& c = corpus[static_cast<int>(lang)];
    for (int i = 0; i < 100; ++i) c.push_back(testing::random_sample(lang, rng, 2000));
    for (const auto& s : c) {
        for (const auto& rel : s.futs.relations) {
            if (rel.trans.size() != s.futs.size()) o.fail("transition table size");
            for (const auto& row : rel.trans)
                for (const auto& [li, fn] : row)
                    if (li >= rel.labels.size() || fn.is_zero()) o.fail("bad continuation entry");
        }
        apply(o, s, check_determinism);
    }
    return o;
}

Outcome apparent_rate() {
    Outcome o;
    for (const auto& s : corpus[0]) apply(o, s, check_apparent_rate);
    return o;
}

Outcome agreement() {
    Outcome o;
    for (const auto& s : corpus[0]) apply(o, s, check_rate_agreement);
    for (const auto& s : corpus[1]) {
        apply(o, s, check_interactive_agreement);
        apply(o, s, check_markov_agreement);
    }
    for (const auto& s : corpus[2]) {
        apply(o, s, check_interactive_agreement);
        apply(o, s, check_timed_agreement);
    }
    for (const auto& s : corpus[3]) {
        apply(o, s, check_interactive_agreement);
        apply(o, s, check_markov_agreement);
    }
    return o;
}

Outcome correspondence(Lang lang) {
    Outcome o;
    testing::Rng rng(200 + static_cast<int>(lang));
    for (int i = 0; i < 200; ++i) apply(o, testing::random_sample(lang, rng, 200), check_correspondence);
    return o;
}

Outcome brute_force_agreement() {
    Outcome o;
    testing::Rng rng(300);
    for (int i = 0; i < 500; ++i) {
        FutsModel f = i % 2 == 0 ? testing::random_raw_model(rng, 1 + i / 2 % kBruteForceLimit)
                                 : testing::random_sample(kLangs[i / 2 % 4], rng, kBruteForceLimit).futs;
        if (refine(f) != brute_force(f)) o.fail("partition mismatch on\n" + serialize(f, Format::Json));
    }
    return o;
}

Outcome structural() {
    Outcome o;
    for (const auto& s : corpus[2]) {
        apply(o, s, check_tick_singletons);
        apply(o, s, check_time_determinism);
        apply(o, s, check_md_descent);
    }
    for (const auto& s : corpus[3]) apply(o, s, check_distributions);
    return o;
}

Outcome multiplicity() {
    Outcome o;
    auto bisim = [](const std::string& ext, const std::string& model, const std::string& l, const std::string& r) {
        auto path = std::string(FUTS_TEST_DATA_OUT) + "/acceptance_multiplicity" + ext;
        std::ofstream(path) << model;
        std::ostringstream out, err;
        return std::pair{futs::cli::run({"bisim", path, "--left", l, "--right", r}, out, err), out.str()};
    };
    auto [pc, pout] = bisim(".pepa", "P = (a, 1).P\ninit P\n", "(a, 1).P + (a, 1).P", "(a, 1).P");
    if (pc != 1 || pout.rfind("NOT BISIMILAR\n", 0) != 0) o.fail("PEPA choice of twins: exit " + std::to_string(pc));
    auto [ic, iout] = bisim(".iml", "init nil\n", "a.nil + a.nil", "a.nil");
    if (ic != 0 || iout != "BISIMILAR\n") o.fail("IML choice of twins: exit " + std::to_string(ic));
    return o;
}

Outcome quotient() {
    Outcome o;
    testing::Rng rng(400);
    for (int i = 0; i < 100; ++i) {
        auto s = testing::random_sample(kLangs[i % 4], rng, 200);
        auto p = refine(s.futs);
        auto q = minimize(s.futs, p);
        if (refine(q).count != q.size()) o.fail("quotient refines further:\n" + s.text);
        auto u = disjoint_union(s.futs, q);
        auto up = refine(u);
        auto blocks = p.blocks();
        for (std::size_t st = 0; st < s.futs.size(); ++st) {
            auto image = u.id_of("R:[" + s.futs.states[blocks[p.block_of[st]].front()].key + "]");
            if (image == kNoBlock || !up.same_block(u.id_of("L:" + s.futs.states[st].key), image))
                o.fail("state " + s.futs.states[st].key + " differs from its image in\n" + s.text);
        }
    }
    return o;
}

// Runs `body` for each language under its own time budget.
Outcome per_language(Outcome (*body)(Lang), double budget) {
    Outcome o;
    for (auto lang : kLangs) {
        auto t0 = Clock::now();
        auto r = body(lang);
        double secs = seconds_since(t0);
        const std::string name(lang_name(lang));
        if (!r.ok) o.fail(name + ": " + r.detail);
        if (secs > budget) o.fail(name + " took " + std::to_string(secs) + " s");
        std::cout << "  " << name << " " << std::fixed << secs << " s" << std::endl;
    }
    return o;
}

}  // namespace

int main() {
    bool all = true;
    auto run = [&](int n, const std::string& name, double budget, const std::function<Outcome()>& body) {
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = body();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        double secs = seconds_since(t0);
        if (budget > 0 && secs > budget) o.fail("took " + std::to_string(secs) + " s, budget " + std::to_string(budget) + " s");
        all = all && o.ok;
        std::cout << (o.ok ? "PASS" : "FAIL") << " " << n << " " << name << " (" << std::fixed;
        std::cout.precision(2);
        std::cout << secs << " s)";
        if (!o.ok) std::cout << ": " << o.detail;
        std::cout << std::endl;
    };
    run(1, "semiring laws", 5, semiring_laws);
    run(2, "probabilistic golden model", 0, golden);
    run(3, "totality and determinism", 0, [] { return per_language(totality, 60); });
    run(4, "apparent rate", 0, apparent_rate);
    run(5, "semantics agreement", 0, agreement);
    run(6, "correspondence", 0, [] { return per_language(correspondence, 120); });
    run(7, "refine vs brute force", 60, brute_force_agreement);
    run(8, "structural properties", 0, structural);
    run(9, "multiplicity via bisim", 0, multiplicity);
    run(10, "quotient soundness", 0, quotient);
    return all ? 0 : 1;
}

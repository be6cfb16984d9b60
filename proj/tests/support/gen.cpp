#include "gen.hpp"

#include <vector>

namespace futs::testing {

namespace {

int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

const char* const kActions[] = {"a", "b", "c"};
const char* const kRates[] = {"1", "2", "1/2", "3"};

std::string action(Rng& rng) { return kActions[coin(rng, 0.85) ? pick(rng, 2) : 2]; }
Rational rate(Rng& rng) { return parse_rational(kRates[pick(rng, 4)]); }

std::vector<Branch> branches(Rng& rng, const std::function<TermPtr()>& sub) {
    switch (pick(rng, 4)) {
    case 0:
    case 1: return {{Rational(1), sub()}};
    case 2: return {{Rational(1, 2), sub()}, {Rational(1, 2), sub()}};
    default: return {{Rational(1, 3), sub()}, {Rational(2, 3), sub()}};
    }
}

struct SeqGen {
    Lang lang;
    Rng& rng;
    int consts;
    bool free_refs = false;  // allow unguarded references and Par anywhere

    TermPtr self(int i) const { return term::constant(lang, "X" + std::to_string(i)); }

    TermPtr prefix(int depth, bool under_action) {
        auto body = [&](bool act) { return gen(depth - 1, true, under_action || act); };
        switch (lang) {
        case Lang::PEPA: return term::rated_prefix(action(rng), rate(rng), body(true));
        case Lang::IML:
            if (coin(rng, 0.6)) return term::act_prefix(lang, action(rng), body(true));
            return term::rate_prefix(lang, rate(rng), body(false));
        case Lang::TPC:
            if (coin(rng, 0.6)) return term::act_prefix(lang, action(rng), body(true));
            return term::time_prefix(1 + pick(rng, 3), body(false));
        case Lang::MAL:
            if (coin(rng, 0.6)) {
                auto a = action(rng);
                return term::prob_prefix(a, branches(rng, [&] { return body(true); }));
            }
            return term::rate_prefix(lang, rate(rng), body(false));
        }
        return term::nil(lang);
    }

    TermPtr gen(int depth, bool guarded, bool under_action) {
        bool ref_ok = consts > 0 && (free_refs || (guarded && (lang != Lang::TPC || under_action)));
        if (depth <= 0) return ref_ok && coin(rng, 0.85) ? self(pick(rng, consts)) : term::nil(lang);
        int r = pick(rng, 10);
        if (r < 1 && coin(rng, 0.5)) return term::nil(lang);
        if (r < 3 && ref_ok) return self(pick(rng, consts));
        if (r < 5) return term::choice(gen(depth - 1, guarded, under_action), gen(depth - 1, guarded, under_action));
        if (r < 6 && free_refs) return term::par(sync_set(), gen(depth - 1, guarded, under_action), gen(depth - 1, guarded, under_action));
        return prefix(depth, under_action);
    }

    std::vector<std::string> sync_set() {
        std::vector<std::string> s;
        for (const char* a : kActions)
            if (coin(rng, 0.35)) s.push_back(a);
        return s;
    }
};

}  // namespace

TermPtr random_term(Lang lang, Rng& rng, int depth, int consts) {
    SeqGen g{lang, rng, consts, true};
    return g.gen(depth, false, false);
}

std::string random_model_text(Lang lang, Rng& rng) {
    const int consts = 1 + pick(rng, 4);
    SeqGen g{lang, rng, consts};
    std::string text = "-- generated\n";
    for (int i = 0; i < consts; ++i) text += "X" + std::to_string(i) + " = " + g.gen(3 + pick(rng, 2), false, false)->key + "\n";
    auto component = [&] { return coin(rng, 0.7) ? g.self(pick(rng, consts)) : g.gen(2, false, false); };
    TermPtr init = component();
    const int parts = coin(rng, 0.7) ? 1 + pick(rng, 3) : 0;
    for (int i = 0; i < parts; ++i) init = term::par(g.sync_set(), init, component());
    text += "init " + init->key + "\n";
    return text;
}

Sample random_sample(Lang lang, Rng& rng, std::size_t max_states, std::size_t min_states) {
    while (true) {
        auto text = random_model_text(lang, rng);
        Model m = parse_model(lang, text);
        try {
            auto f = explore(m, max_states);
            if (f.size() < min_states) continue;
            return {std::move(text), std::move(m), std::move(f)};
        } catch (const ExploreError&) {
        }
    }
}

SemiringValue random_value(SemiringTag tag, Rng& rng) {
    switch (tag) {
    case SemiringTag::BOOL: return SemiringValue::boolean(coin(rng, 0.5));
    case SemiringTag::NNRAT: {
        int num = pick(rng, 7), den = 1 + pick(rng, 4);
        return SemiringValue::rational(Rational(num, den));
    }
    case SemiringTag::NATSET: {
        if (coin(rng, 0.05)) return SemiringValue::natset(NatSet::top());
        std::vector<std::uint64_t> e;
        int n = pick(rng, 4);
        for (int i = 0; i < n; ++i) e.push_back(static_cast<std::uint64_t>(pick(rng, 6)));
        return SemiringValue::natset(NatSet(std::move(e)));
    }
    }
    return SemiringValue::boolean(false);
}

FutsModel random_raw_model(Rng& rng, std::size_t n) {
    FutsModel f;
    const int layout = pick(rng, 4);
    auto rel = [](std::vector<std::string> labels, SemiringTag tag, RelKind kind = RelKind::Simple) {
        Relation r;
        for (auto& l : labels) r.labels.push_back(StepLabel::act(l));
        r.semiring = tag;
        r.kind = kind;
        return r;
    };
    switch (layout) {
    case 0:
        f.language = "PEPA";
        f.relations = {rel({"a", "b"}, SemiringTag::NNRAT)};
        break;
    case 1:
        f.language = "IML";
        f.relations = {rel({"a", "b"}, SemiringTag::BOOL), rel({}, SemiringTag::NNRAT)};
        f.relations[1].labels = {StepLabel::delta()};
        break;
    case 2:
        f.language = "TPC";
        f.relations = {rel({"a"}, SemiringTag::BOOL), rel({}, SemiringTag::NATSET)};
        f.relations[1].labels = {StepLabel::tick()};
        break;
    default:
        f.language = "MAL";
        f.relations = {rel({"a", "b"}, SemiringTag::BOOL, RelKind::Nested), rel({}, SemiringTag::NNRAT)};
        f.relations[1].labels = {StepLabel::delta()};
        break;
    }
    for (std::size_t s = 0; s < n; ++s) f.add_state("s" + std::to_string(s), nullptr);
    auto target = [&] { return Key("s" + std::to_string(pick(rng, static_cast<int>(n)))); };
    auto small_value = [&](SemiringTag tag) {
        switch (tag) {
        case SemiringTag::BOOL: return SemiringValue::boolean(true);
        case SemiringTag::NNRAT: return SemiringValue::rational(parse_rational(kRates[pick(rng, 3)]));
        default: return SemiringValue::natset(NatSet::singleton(1 + pick(rng, 2)));
        }
    };
    for (auto& r : f.relations)
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t li = 0; li < r.labels.size(); ++li) {
                if (coin(rng, 0.45)) continue;
                std::vector<std::pair<Key, SemiringValue>> pairs;
                int k = 1 + pick(rng, 2);
                for (int i = 0; i < k; ++i) {
                    if (r.kind == RelKind::Simple) {
                        pairs.emplace_back(target(), small_value(r.semiring));
                        continue;
                    }
                    std::vector<std::pair<Key, SemiringValue>> mu;
                    if (coin(rng, 0.5)) {
                        mu.emplace_back(target(), SemiringValue::rational(1));
                    } else {
                        mu.emplace_back(target(), SemiringValue::rational(Rational(1, 2)));
                        mu.emplace_back(target(), SemiringValue::rational(Rational(1, 2)));
                    }
                    pairs.emplace_back(Key::of(ff_make(SemiringTag::NNRAT, std::move(mu))), SemiringValue::boolean(true));
                }
                auto fn = ff_make(r.semiring, std::move(pairs));
                if (!fn.is_zero()) r.trans[s].emplace(li, std::move(fn));
            }
    return f;
}

}  // namespace futs::testing

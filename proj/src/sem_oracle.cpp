#include "futs/sem_oracle.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace futs {

namespace {

const TermPtr& body_of(const Env& env, const Term& c) { return env.body(c.name); }

template <class Move, class KeyFn>
std::vector<Move> aggregate(std::vector<Move> moves, KeyFn key) {
    std::map<decltype(key(moves.front())), Move> acc;
    for (auto& m : moves) {
        auto k = key(m);
        auto [it, fresh] = acc.try_emplace(k, m);
        if (!fresh) it->second.multiplicity += m.multiplicity;
    }
    std::vector<Move> out;
    out.reserve(acc.size());
    for (auto& [k, m] : acc) out.push_back(std::move(m));
    return out;
}

std::vector<RatedMove> aggregate_rated(std::vector<RatedMove> v) {
    if (v.empty()) return v;
    return aggregate(std::move(v), [](const RatedMove& m) {
        return std::make_tuple(m.action, m.target->key, rational_text(m.rate));
    });
}

std::vector<DelayMove> aggregate_delay(std::vector<DelayMove> v) {
    if (v.empty()) return v;
    return aggregate(std::move(v), [](const DelayMove& m) { return std::make_tuple(m.target->key, rational_text(m.rate)); });
}

std::vector<ActMove> dedup_act(std::vector<ActMove> v) {
    std::sort(v.begin(), v.end(), [](const ActMove& a, const ActMove& b) {
        return std::tie(a.action, a.target->key) < std::tie(b.action, b.target->key);
    });
    v.erase(std::unique(v.begin(), v.end(),
                        [](const ActMove& a, const ActMove& b) {
                            return a.action == b.action && a.target->key == b.target->key;
                        }),
            v.end());
    return v;
}

// PEPA ---------------------------------------------------------------------

std::vector<RatedMove> pepa_raw(const Env& env, const TermPtr& p) {
    switch (p->kind) {
    case TermKind::Nil: return {};
    case TermKind::RatedPrefix: return {RatedMove{p->action, p->rate, p->left, 1}};
    case TermKind::Choice: {
        auto l = pepa_raw(env, p->left);
        auto r = pepa_raw(env, p->right);
        l.insert(l.end(), r.begin(), r.end());
        return aggregate_rated(std::move(l));
    }
    case TermKind::Const: return pepa_raw(env, body_of(env, *p));
    case TermKind::Par: {
        auto l = pepa_raw(env, p->left);
        auto r = pepa_raw(env, p->right);
        std::vector<RatedMove> out;
        for (const auto& m : l)
            if (!p->syncs_on(m.action)) out.push_back({m.action, m.rate, term::par(p->sync, m.target, p->right), m.multiplicity});
        for (const auto& m : r)
            if (!p->syncs_on(m.action)) out.push_back({m.action, m.rate, term::par(p->sync, p->left, m.target), m.multiplicity});
        std::map<std::string, Rational> arf_cache;
        for (const auto& x : l) {
            if (!p->syncs_on(x.action)) continue;
            auto it = arf_cache.find(x.action);
            if (it == arf_cache.end()) {
                Rational ra = pepa_apparent_rate(env, x.action, *p->left);
                Rational rb = pepa_apparent_rate(env, x.action, *p->right);
                Rational f = (sgn(ra) == 0 || sgn(rb) == 0) ? Rational(0) : Rational(std::min(ra, rb) / (ra * rb));
                it = arf_cache.emplace(x.action, f).first;
            }
            for (const auto& y : r) {
                if (y.action != x.action) continue;
                Rational rate = it->second * x.rate * y.rate;
                rate.canonicalize();
                out.push_back({x.action, rate, term::par(p->sync, x.target, y.target), x.multiplicity * y.multiplicity});
            }
        }
        return aggregate_rated(std::move(out));
    }
    default: throw ModelError("term " + p->key + " is not PEPA");
    }
}

}  // namespace

std::vector<RatedMove> pepa_transitions(const Env& env, const TermPtr& p) { return aggregate_rated(pepa_raw(env, p)); }

Rational pepa_q(const std::vector<RatedMove>& moves, const TargetSet& targets, const std::string& a) {
    Rational q = 0;
    for (const auto& m : moves)
        if (m.action == a && targets.count(m.target->key)) q += m.rate * m.multiplicity;
    q.canonicalize();
    return q;
}

Rational pepa_q(const Env& env, const TermPtr& p, const TargetSet& targets, const std::string& a) {
    return pepa_q(pepa_transitions(env, p), targets, a);
}

Rational pepa_apparent_rate(const Env& env, const std::string& a, const Term& p) {
    switch (p.kind) {
    case TermKind::RatedPrefix: return p.action == a ? p.rate : Rational(0);
    case TermKind::Choice: return pepa_apparent_rate(env, a, *p.left) + pepa_apparent_rate(env, a, *p.right);
    case TermKind::Par: {
        Rational l = pepa_apparent_rate(env, a, *p.left), r = pepa_apparent_rate(env, a, *p.right);
        if (p.syncs_on(a)) return std::min(l, r);
        return l + r;
    }
    case TermKind::Const: return pepa_apparent_rate(env, a, *body_of(env, p));
    default: return 0;
    }
}

// IML ----------------------------------------------------------------------

namespace {

ImlTransitions iml_raw(const Env& env, const TermPtr& p) {
    switch (p->kind) {
    case TermKind::Nil: return {};
    case TermKind::ActPrefix: return {{ActMove{p->action, p->left}}, {}};
    case TermKind::RatePrefix: return {{}, {DelayMove{p->rate, p->left, 1}}};
    case TermKind::Choice: {
        auto l = iml_raw(env, p->left);
        auto r = iml_raw(env, p->right);
        l.interactive.insert(l.interactive.end(), r.interactive.begin(), r.interactive.end());
        l.markov.insert(l.markov.end(), r.markov.begin(), r.markov.end());
        return l;
    }
    case TermKind::Const: return iml_raw(env, body_of(env, *p));
    case TermKind::Par: {
        auto l = iml_raw(env, p->left);
        auto r = iml_raw(env, p->right);
        ImlTransitions out;
        for (const auto& m : l.interactive)
            if (!p->syncs_on(m.action)) out.interactive.push_back({m.action, term::par(p->sync, m.target, p->right)});
        for (const auto& m : r.interactive)
            if (!p->syncs_on(m.action)) out.interactive.push_back({m.action, term::par(p->sync, p->left, m.target)});
        for (const auto& x : l.interactive)
            for (const auto& y : r.interactive)
                if (x.action == y.action && p->syncs_on(x.action))
                    out.interactive.push_back({x.action, term::par(p->sync, x.target, y.target)});
        for (const auto& m : l.markov) out.markov.push_back({m.rate, term::par(p->sync, m.target, p->right), m.multiplicity});
        for (const auto& m : r.markov) out.markov.push_back({m.rate, term::par(p->sync, p->left, m.target), m.multiplicity});
        return out;
    }
    default: throw ModelError("term " + p->key + " is not IML");
    }
}

}  // namespace

ImlTransitions iml_transitions(const Env& env, const TermPtr& p) {
    auto tr = iml_raw(env, p);
    tr.interactive = dedup_act(std::move(tr.interactive));
    tr.markov = aggregate_delay(std::move(tr.markov));
    return tr;
}

bool iml_T(const ImlTransitions& tr, const std::string& a, const TargetSet& targets) {
    return std::any_of(tr.interactive.begin(), tr.interactive.end(),
                       [&](const ActMove& m) { return m.action == a && targets.count(m.target->key); });
}

namespace {

Rational markov_sum(const std::vector<DelayMove>& moves, const TargetSet& targets) {
    Rational q = 0;
    for (const auto& m : moves)
        if (targets.count(m.target->key)) q += m.rate * m.multiplicity;
    q.canonicalize();
    return q;
}

}  // namespace

Rational iml_R(const ImlTransitions& tr, const TargetSet& targets) { return markov_sum(tr.markov, targets); }

// TPC ----------------------------------------------------------------------

namespace {

struct TpcRaw {
    const Env& env;
    std::size_t cap;

    void settle(std::vector<TimedMove>& v) const {
        std::sort(v.begin(), v.end(), [](const TimedMove& a, const TimedMove& b) {
            return std::tie(a.delay, a.target->key) < std::tie(b.delay, b.target->key);
        });
        v.erase(std::unique(v.begin(), v.end(),
                            [](const TimedMove& a, const TimedMove& b) {
                                return a.delay == b.delay && a.target->key == b.target->key;
                            }),
                v.end());
        if (v.size() > cap) throw OracleError("more than " + std::to_string(cap) + " timed transitions from one state");
    }

    std::vector<ActMove> actions(const TermPtr& p) const {
        switch (p->kind) {
        case TermKind::ActPrefix: return {ActMove{p->action, p->left}};
        case TermKind::Choice: {
            auto l = actions(p->left), r = actions(p->right);
            l.insert(l.end(), r.begin(), r.end());
            return l;
        }
        case TermKind::Const: return actions(body_of(env, *p));
        case TermKind::Par: {
            auto l = actions(p->left), r = actions(p->right);
            std::vector<ActMove> out;
            for (const auto& m : l)
                if (!p->syncs_on(m.action)) out.push_back({m.action, term::par(p->sync, m.target, p->right)});
            for (const auto& m : r)
                if (!p->syncs_on(m.action)) out.push_back({m.action, term::par(p->sync, p->left, m.target)});
            for (const auto& x : l)
                for (const auto& y : r)
                    if (x.action == y.action && p->syncs_on(x.action))
                        out.push_back({x.action, term::par(p->sync, x.target, y.target)});
            return out;
        }
        default: return {};
        }
    }

    std::vector<TimedMove> timed(const TermPtr& p) const {
        std::vector<TimedMove> out;
        switch (p->kind) {
        case TermKind::TimePrefix: {
            const auto n = p->delay;
            out.push_back({n, p->left});                                         // PRE
            for (std::uint64_t m = 1; m < n; ++m) out.push_back({m, term::time_prefix(n - m, p->left)});  // DEC
            for (const auto& t : timed(p->left)) out.push_back({n + t.delay, t.target});  // SUM
            break;
        }
        case TermKind::Choice:
        case TermKind::Par: {
            auto l = timed(p->left), r = timed(p->right);
            for (const auto& x : l)
                for (const auto& y : r)
                    if (x.delay == y.delay)
                        out.push_back({x.delay, p->kind == TermKind::Choice ? term::choice(x.target, y.target)
                                                                             : term::par(p->sync, x.target, y.target)});
            break;
        }
        case TermKind::Const: return timed(body_of(env, *p));
        default: break;
        }
        settle(out);
        return out;
    }
};

}  // namespace

TpcTransitions tpc_transitions(const Env& env, const TermPtr& p, std::size_t cap) {
    TpcRaw raw{env, cap};
    TpcTransitions tr;
    tr.interactive = dedup_act(raw.actions(p));
    tr.timed = raw.timed(p);
    raw.settle(tr.timed);
    return tr;
}

// MAL ----------------------------------------------------------------------

namespace {

ProbMove make_dist(std::string action, const std::vector<std::pair<TermPtr, Rational>>& branches) {
    std::vector<std::pair<Key, SemiringValue>> pairs;
    std::map<std::string, TermPtr> terms;
    for (const auto& [t, p] : branches) {
        pairs.emplace_back(Key(t->key), SemiringValue::rational(p));
        terms.emplace(t->key, t);
    }
    ProbMove m{std::move(action), ff_make(SemiringTag::NNRAT, std::move(pairs)), {}};
    for (auto& [k, t] : terms) m.support.push_back(t);
    return m;
}

std::vector<std::pair<TermPtr, Rational>> weighted(const ProbMove& m) {
    std::vector<std::pair<TermPtr, Rational>> out;
    for (const auto& t : m.support) out.emplace_back(t, ff_eval(m.dist, t->key).as_rational());
    return out;
}

MalTransitions mal_raw(const Env& env, const TermPtr& p) {
    switch (p->kind) {
    case TermKind::Nil: return {};
    case TermKind::ProbPrefix: {
        std::vector<std::pair<TermPtr, Rational>> bs;
        for (const auto& b : p->branches) bs.emplace_back(b.target, b.prob);
        return {{make_dist(p->action, bs)}, {}};
    }
    case TermKind::RatePrefix: return {{}, {DelayMove{p->rate, p->left, 1}}};
    case TermKind::Choice: {
        auto l = mal_raw(env, p->left);
        auto r = mal_raw(env, p->right);
        l.probabilistic.insert(l.probabilistic.end(), r.probabilistic.begin(), r.probabilistic.end());
        l.markov.insert(l.markov.end(), r.markov.begin(), r.markov.end());
        return l;
    }
    case TermKind::Const: return mal_raw(env, body_of(env, *p));
    case TermKind::Par: {
        auto l = mal_raw(env, p->left);
        auto r = mal_raw(env, p->right);
        MalTransitions out;
        auto lift = [&](const ProbMove& m, bool left_side) {
            std::vector<std::pair<TermPtr, Rational>> bs;
            for (auto& [t, q] : weighted(m))
                bs.emplace_back(left_side ? term::par(p->sync, t, p->right) : term::par(p->sync, p->left, t), q);
            return make_dist(m.action, bs);
        };
        for (const auto& m : l.probabilistic)
            if (!p->syncs_on(m.action)) out.probabilistic.push_back(lift(m, true));
        for (const auto& m : r.probabilistic)
            if (!p->syncs_on(m.action)) out.probabilistic.push_back(lift(m, false));
        for (const auto& x : l.probabilistic)
            for (const auto& y : r.probabilistic) {
                if (x.action != y.action || !p->syncs_on(x.action)) continue;
                std::vector<std::pair<TermPtr, Rational>> bs;
                for (auto& [s, qs] : weighted(x))
                    for (auto& [t, qt] : weighted(y)) bs.emplace_back(term::par(p->sync, s, t), qs * qt);
                out.probabilistic.push_back(make_dist(x.action, bs));
            }
        for (const auto& m : l.markov) out.markov.push_back({m.rate, term::par(p->sync, m.target, p->right), m.multiplicity});
        for (const auto& m : r.markov) out.markov.push_back({m.rate, term::par(p->sync, p->left, m.target), m.multiplicity});
        return out;
    }
    default: throw ModelError("term " + p->key + " is not MAL");
    }
}

}  // namespace

MalTransitions mal_transitions(const Env& env, const TermPtr& p) {
    auto tr = mal_raw(env, p);
    auto& pr = tr.probabilistic;
    std::sort(pr.begin(), pr.end(), [](const ProbMove& a, const ProbMove& b) {
        return std::tie(a.action, a.dist.serialize()) < std::tie(b.action, b.dist.serialize());
    });
    pr.erase(std::unique(pr.begin(), pr.end(),
                         [](const ProbMove& a, const ProbMove& b) { return a.action == b.action && a.dist == b.dist; }),
             pr.end());
    tr.markov = aggregate_delay(std::move(tr.markov));
    return tr;
}

bool mal_I(const MalTransitions& tr, const std::string& a, const TargetSet& dists) {
    return std::any_of(tr.probabilistic.begin(), tr.probabilistic.end(),
                       [&](const ProbMove& m) { return m.action == a && dists.count(m.dist.serialize()); });
}

Rational mal_M(const MalTransitions& tr, const TargetSet& targets) { return markov_sum(tr.markov, targets); }

}  // namespace futs

#include "futs/sem_futs.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace futs {

std::string StepLabel::text() const {
    switch (kind) {
    case Kind::Act: return action;
    case Kind::Delta: return "delta";
    case Kind::Tick: return "tick";
    }
    return "?";
}

Key StepContext::key_of(const TermPtr& t) {
    terms_.try_emplace(t->key, t);
    return Key(t->key);
}

TermPtr StepContext::term_of(std::string_view key) const {
    auto it = terms_.find(std::string(key));
    return it == terms_.end() ? nullptr : it->second;
}

const FinFn& StepContext::step(const TermPtr& t, const StepLabel& label) {
    std::string mk = t->key;
    mk += '\x1f';
    mk += label.text();
    if (label.kind == StepLabel::Kind::Act) mk += '!';  // keeps action "delta" apart from Delta
    if (auto it = memo_.find(mk); it != memo_.end()) return it->second;
    key_of(t);
    FinFn fn = compute(t, label);
    return memo_.emplace(std::move(mk), std::move(fn)).first->second;
}

FinFn StepContext::compute(const TermPtr& t, const StepLabel& label) {
    switch (t->lang) {
    case Lang::PEPA:
        if (label.kind != StepLabel::Kind::Act) throw ModelError("PEPA steps take action labels only");
        return pepa_step(*this, t, label.action);
    case Lang::IML: return iml_step(*this, t, label);
    case Lang::TPC: return tpc_step(*this, t, label);
    case Lang::MAL: return mal_step(*this, t, label);
    }
    throw ModelError("bad language");
}

namespace {

using Pairs = std::vector<std::pair<Key, SemiringValue>>;

FinFn single(SemiringTag tag, Key k, SemiringValue v) {
    Pairs p;
    p.emplace_back(std::move(k), std::move(v));
    return ff_make(tag, std::move(p));
}

TermPtr need(const StepContext& ctx, std::string_view key) {
    auto t = ctx.term_of(key);
    if (!t) throw ModelError("internal: unregistered term " + std::string(key));
    return t;
}

/// Syntactic parallel constructor lifted to continuation keys.
KeyConstructor par_ctor(StepContext& ctx, const std::vector<std::string>& sync) {
    return [&ctx, sync](const FnEntry& x, const FnEntry& y) {
        return ctx.key_of(term::par(sync, need(ctx, x.key), need(ctx, y.key)));
    };
}

/// (lhs op D_Q) + (D_P op rhs) for a simple-valued interleaving step.
FinFn interleave(StepContext& ctx, const Term& t, const FinFn& lhs, const FinFn& rhs) {
    auto ctor = par_ctor(ctx, t.sync);
    auto dq = ff_dirac(lhs.tag(), ctx.key_of(t.right));
    auto dp = ff_dirac(lhs.tag(), ctx.key_of(t.left));
    return ff_add(ff_lift_injective(ctor, lhs, dq), ff_lift_injective(ctor, dp, rhs));
}

}  // namespace

Rational arf(const FinFn& phi, const FinFn& psi) {
    Rational a = ff_oplus(phi).as_rational(), b = ff_oplus(psi).as_rational();
    if (sgn(a) == 0 || sgn(b) == 0) return 0;
    Rational r = std::min(a, b) / (a * b);
    r.canonicalize();
    return r;
}

FinFn pepa_step(StepContext& ctx, const TermPtr& p, const std::string& a) {
    const auto tag = SemiringTag::NNRAT;
    const auto act = StepLabel::act(a);
    switch (p->kind) {
    case TermKind::Nil: return FinFn(tag);
    case TermKind::RatedPrefix:
        if (p->action != a) return FinFn(tag);
        return single(tag, ctx.key_of(p->left), SemiringValue::rational(p->rate));
    case TermKind::Choice: return ff_add(ctx.step(p->left, act), ctx.step(p->right, act));
    case TermKind::Const: return ctx.step(ctx.body(*p), act);
    case TermKind::Par: {
        const auto& lhs = ctx.step(p->left, act);
        const auto& rhs = ctx.step(p->right, act);
        if (!p->syncs_on(a)) return interleave(ctx, *p, lhs, rhs);
        auto joint = ff_lift_injective(par_ctor(ctx, p->sync), lhs, rhs);
        return ff_scale(SemiringValue::rational(arf(lhs, rhs)), joint);
    }
    default: throw ModelError("term " + p->key + " is not PEPA");
    }
}

FinFn iml_step(StepContext& ctx, const TermPtr& p, const StepLabel& l) {
    const bool markov = l.kind == StepLabel::Kind::Delta;
    if (!markov && l.kind != StepLabel::Kind::Act) throw ModelError("IML steps take action or delta labels");
    const auto tag = markov ? SemiringTag::NNRAT : SemiringTag::BOOL;
    switch (p->kind) {
    case TermKind::Nil: return FinFn(tag);
    case TermKind::ActPrefix:
        if (markov || p->action != l.action) return FinFn(tag);
        return ff_dirac(tag, ctx.key_of(p->left));
    case TermKind::RatePrefix:
        if (!markov) return FinFn(tag);
        return single(tag, ctx.key_of(p->left), SemiringValue::rational(p->rate));
    case TermKind::Choice: return ff_add(ctx.step(p->left, l), ctx.step(p->right, l));
    case TermKind::Const: return ctx.step(ctx.body(*p), l);
    case TermKind::Par: {
        const auto& lhs = ctx.step(p->left, l);
        const auto& rhs = ctx.step(p->right, l);
        if (markov || !p->syncs_on(l.action)) return interleave(ctx, *p, lhs, rhs);
        return ff_lift_injective(par_ctor(ctx, p->sync), lhs, rhs);
    }
    default: throw ModelError("term " + p->key + " is not IML");
    }
}

FinFn tpc_time_prefix(StepContext& ctx, std::uint64_t n, const TermPtr& p, const FinFn& cont) {
    const auto tag = SemiringTag::NATSET;
    Pairs out;
    for (std::uint64_t m = 1; m < n; ++m)
        out.emplace_back(ctx.key_of(term::time_prefix(n - m, p)), SemiringValue::natset(NatSet::singleton(m)));
    out.emplace_back(ctx.key_of(p), SemiringValue::natset(NatSet::singleton(n)));
    for (const auto& e : cont.entries()) {
        std::vector<std::uint64_t> shifted;
        for (auto m : e.value.as_natset().elements()) shifted.push_back(n + m);
        out.emplace_back(Key(e.key), SemiringValue::natset(NatSet(std::move(shifted))));
    }
    return ff_make(tag, std::move(out));
}

FinFn tpc_boxed(StepContext& ctx, BoxKind kind, const FinFn& lhs, const FinFn& rhs,
                const std::vector<std::string>& sync) {
    if (kind == BoxKind::Parallel) return ff_lift_injective(par_ctor(ctx, sync), lhs, rhs);
    KeyConstructor plus = [&ctx](const FnEntry& x, const FnEntry& y) {
        return ctx.key_of(term::choice(need(ctx, x.key), need(ctx, y.key)));
    };
    return ff_lift_injective(plus, lhs, rhs);
}

FinFn tpc_step(StepContext& ctx, const TermPtr& p, const StepLabel& l) {
    const bool timed = l.kind == StepLabel::Kind::Tick;
    if (!timed && l.kind != StepLabel::Kind::Act) throw ModelError("TPC steps take action or tick labels");
    const auto tag = timed ? SemiringTag::NATSET : SemiringTag::BOOL;
    switch (p->kind) {
    case TermKind::Nil: return FinFn(tag);
    case TermKind::ActPrefix:
        if (timed || p->action != l.action) return FinFn(tag);
        return ff_dirac(tag, ctx.key_of(p->left));
    case TermKind::TimePrefix:
        if (!timed) return FinFn(tag);
        return tpc_time_prefix(ctx, p->delay, p->left, ctx.step(p->left, l));
    case TermKind::Choice:
        if (timed) return tpc_boxed(ctx, BoxKind::Choice, ctx.step(p->left, l), ctx.step(p->right, l));
        return ff_add(ctx.step(p->left, l), ctx.step(p->right, l));
    case TermKind::Const: return ctx.step(ctx.body(*p), l);
    case TermKind::Par: {
        const auto& lhs = ctx.step(p->left, l);
        const auto& rhs = ctx.step(p->right, l);
        if (timed) return tpc_boxed(ctx, BoxKind::Parallel, lhs, rhs, p->sync);
        if (!p->syncs_on(l.action)) return interleave(ctx, *p, lhs, rhs);
        return ff_lift_injective(par_ctor(ctx, p->sync), lhs, rhs);
    }
    default: throw ModelError("term " + p->key + " is not TPC");
    }
}

FinFn mal_nested_dirac(StepContext& ctx, const TermPtr& p) {
    return ff_dirac(SemiringTag::BOOL, Key::of(ff_dirac(SemiringTag::NNRAT, ctx.key_of(p))));
}

FinFn mal_nested_par(StepContext& ctx, const std::vector<std::string>& sync, const FinFn& lhs, const FinFn& rhs) {
    auto inner = par_ctor(ctx, sync);
    KeyConstructor outer = [inner](const FnEntry& x, const FnEntry& y) {
        return Key::of(ff_lift_injective(inner, *x.inner, *y.inner));
    };
    return ff_lift_injective(outer, lhs, rhs);
}

FinFn mal_step(StepContext& ctx, const TermPtr& p, const StepLabel& l) {
    const bool markov = l.kind == StepLabel::Kind::Delta;
    if (!markov && l.kind != StepLabel::Kind::Act) throw ModelError("MAL steps take action or delta labels");
    const auto tag = markov ? SemiringTag::NNRAT : SemiringTag::BOOL;
    switch (p->kind) {
    case TermKind::Nil: return FinFn(tag);
    case TermKind::ProbPrefix: {
        if (markov || p->action != l.action) return FinFn(tag);
        Pairs mu;
        for (const auto& b : p->branches) mu.emplace_back(ctx.key_of(b.target), SemiringValue::rational(b.prob));
        return ff_dirac(tag, Key::of(ff_make(SemiringTag::NNRAT, std::move(mu))));
    }
    case TermKind::RatePrefix:
        if (!markov) return FinFn(tag);
        return single(tag, ctx.key_of(p->left), SemiringValue::rational(p->rate));
    case TermKind::Choice: return ff_add(ctx.step(p->left, l), ctx.step(p->right, l));
    case TermKind::Const: return ctx.step(ctx.body(*p), l);
    case TermKind::Par: {
        const auto& lhs = ctx.step(p->left, l);
        const auto& rhs = ctx.step(p->right, l);
        if (markov) return interleave(ctx, *p, lhs, rhs);
        if (p->syncs_on(l.action)) return mal_nested_par(ctx, p->sync, lhs, rhs);
        return ff_add(mal_nested_par(ctx, p->sync, lhs, mal_nested_dirac(ctx, p->right)),
                      mal_nested_par(ctx, p->sync, mal_nested_dirac(ctx, p->left), rhs));
    }
    default: throw ModelError("term " + p->key + " is not MAL");
    }
}

std::uint64_t md(const Env& env, const Term& p) {
    switch (p.kind) {
    case TermKind::TimePrefix: return p.delay + md(env, *p.left);
    case TermKind::Choice:
    case TermKind::Par: return std::min(md(env, *p.left), md(env, *p.right));
    case TermKind::Const: return md(env, *env.body(p.name));
    default: return 0;
    }
}

}  // namespace futs

#include "futs/bisim.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <type_traits>
#include <unordered_map>

#include <json.hpp>

#include "futs/sem_oracle.hpp"

namespace futs {

Partition Partition::canonical(const std::vector<std::size_t>& raw) {
    Partition p;
    p.block_of.resize(raw.size());
    std::unordered_map<std::size_t, std::size_t> fresh;
    for (std::size_t s = 0; s < raw.size(); ++s) {
        auto [it, inserted] = fresh.try_emplace(raw[s], fresh.size());
        p.block_of[s] = it->second;
    }
    p.count = fresh.size();
    return p;
}

Partition Partition::discrete(std::size_t n) {
    std::vector<std::size_t> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = i;
    return canonical(raw);
}

std::vector<std::vector<std::size_t>> Partition::blocks() const {
    std::vector<std::vector<std::size_t>> out(count);
    for (std::size_t s = 0; s < block_of.size(); ++s) out[block_of[s]].push_back(s);
    return out;
}

std::string partition_json(const Partition& p) { return nlohmann::json{{"blocks", p.blocks()}}.dump(); }

namespace {

using InnerSums = std::map<std::string, SemiringValue>;

/// Nested continuation grouped by lifted inner class (the block-sum text of
/// each inner function), OR-folding the outer values.
InnerSums lifted_sums(const FinFn& fn, const BlockLookup& lookup) {
    InnerSums acc;
    for (const auto& e : fn.entries()) {
        auto cls = block_sums_text(ff_block_sums(*e.inner, lookup));
        auto [it, fresh] = acc.try_emplace(cls, e.value);
        if (!fresh) it->second = sr_add(it->second, e.value);
    }
    std::erase_if(acc, [](const auto& kv) { return kv.second.is_zero(); });
    return acc;
}

std::string lifted_text(const InnerSums& sums) {
    std::string out = "{";
    bool first = true;
    for (const auto& [cls, v] : sums) {
        if (!first) out += ',';
        first = false;
        out += cls + ":" + v.text();
    }
    return out + "}";
}

std::string label_signature(const FutsModel& f, const BlockLookup& lookup, std::size_t s, std::size_t r, std::size_t li) {
    const auto& rel = f.relations[r];
    const FinFn& fn = rel.at(s, li);
    if (fn.is_zero()) return {};
    if (rel.kind == RelKind::Nested) return lifted_text(lifted_sums(fn, lookup));
    return block_sums_text(ff_block_sums(fn, lookup));
}

std::vector<std::string> all_signatures(const FutsModel& f, const Partition& p, bool parallel) {
    std::vector<std::string> sigs(f.size());
    const long n = static_cast<long>(f.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
        for (long s = 0; s < n; ++s) sigs[s] = signature(f, p, static_cast<std::size_t>(s));
    } else {
        for (long s = 0; s < n; ++s) sigs[s] = signature(f, p, static_cast<std::size_t>(s));
    }
    return sigs;
}

Partition refine_impl(const FutsModel& f, RefineStats* stats, bool parallel) {
    Partition p = Partition::single(f.size());
    std::size_t rounds = 0;
    while (true) {
        ++rounds;
        Partition next = split(p, all_signatures(f, p, parallel));
        if (next.count == p.count) break;
        p = std::move(next);
    }
    if (stats) stats->rounds = rounds;
    return p;
}

}  // namespace

std::string signature(const FutsModel& f, const Partition& p, std::size_t state) {
    auto lookup = f.lookup(p.block_of);
    std::string sig;
    for (std::size_t r = 0; r < f.relations.size(); ++r)
        for (std::size_t li = 0; li < f.relations[r].labels.size(); ++li) {
            auto part = label_signature(f, lookup, state, r, li);
            if (part.empty()) continue;
            sig += std::to_string(r) + "." + std::to_string(li) + "=" + part + ";";
        }
    return sig;
}

Partition split(const Partition& p, const std::vector<std::string>& sigs) {
    std::map<std::pair<std::size_t, std::string_view>, std::size_t> ids;
    std::vector<std::size_t> raw(sigs.size());
    for (std::size_t s = 0; s < sigs.size(); ++s)
        raw[s] = ids.try_emplace({p.block_of[s], sigs[s]}, ids.size()).first->second;
    return Partition::canonical(raw);
}

Partition refine(const FutsModel& f, RefineStats* stats) { return refine_impl(f, stats, true); }
Partition refine_serial(const FutsModel& f, RefineStats* stats) { return refine_impl(f, stats, false); }

bool is_stable(const FutsModel& f, const Partition& p) { return split(p, all_signatures(f, p, false)).count == p.count; }

bool bisimilar(const FutsModel& f, std::size_t s1, std::size_t s2) {
    if (s1 >= f.size() || s2 >= f.size()) throw BisimError("invalid state id");
    return refine(f).same_block(s1, s2);
}

// ---------------------------------------------------------------------------
// Brute force

namespace {

/// Sum of fn over the keys whose state lies in block `b`.
SemiringValue class_sum(const FutsModel& f, const Partition& p, const FinFn& fn, std::size_t b) {
    auto total = SemiringValue::zero(fn.tag());
    for (const auto& e : fn.entries()) {
        auto id = f.id_of(e.key);
        if (id == kNoBlock) throw BisimError("unknown state " + e.key);
        if (p.block_of[id] == b) total = sr_add(total, e.value);
    }
    return total;
}

bool inner_equivalent(const FutsModel& f, const Partition& p, const FinFn& mu, const FinFn& nu) {
    for (std::size_t b = 0; b < p.count; ++b)
        if (!(class_sum(f, p, mu, b) == class_sum(f, p, nu, b))) return false;
    return true;
}

bool pair_ok(const FutsModel& f, const Partition& p, std::size_t s1, std::size_t s2) {
    for (const auto& rel : f.relations)
        for (std::size_t li = 0; li < rel.labels.size(); ++li) {
            const FinFn& x = rel.at(s1, li);
            const FinFn& y = rel.at(s2, li);
            if (rel.kind == RelKind::Simple) {
                for (std::size_t b = 0; b < p.count; ++b)
                    if (!(class_sum(f, p, x, b) == class_sum(f, p, y, b))) return false;
                continue;
            }
            std::vector<const FnEntry*> inner;
            for (const auto& e : x.entries()) inner.push_back(&e);
            for (const auto& e : y.entries()) inner.push_back(&e);
            for (const auto* mu : inner) {
                auto sx = SemiringValue::zero(x.tag()), sy = SemiringValue::zero(y.tag());
                for (const auto& e : x.entries())
                    if (inner_equivalent(f, p, *mu->inner, *e.inner)) sx = sr_add(sx, e.value);
                for (const auto& e : y.entries())
                    if (inner_equivalent(f, p, *mu->inner, *e.inner)) sy = sr_add(sy, e.value);
                if (!(sx == sy)) return false;
            }
        }
    return true;
}

}  // namespace

bool is_bisimulation(const FutsModel& f, const Partition& p) {
    for (std::size_t s1 = 0; s1 < f.size(); ++s1)
        for (std::size_t s2 = s1 + 1; s2 < f.size(); ++s2)
            if (p.same_block(s1, s2) && !pair_ok(f, p, s1, s2)) return false;
    return true;
}

Partition brute_force(const FutsModel& f) {
    const std::size_t n = f.size();
    if (n > kBruteForceLimit)
        throw BisimError("brute force is limited to " + std::to_string(kBruteForceLimit) + " states, got " +
                         std::to_string(n));
    if (n == 0) return Partition{};
    // Restricted growth strings enumerate each set partition exactly once.
    std::vector<std::size_t> rgs(n, 0), maxp(n, 0);
    Partition best = Partition::discrete(n);
    std::size_t best_pairs = 0;
    while (true) {
        auto cand = Partition::canonical(rgs);
        std::size_t pairs = 0;
        for (const auto& blk : cand.blocks()) pairs += blk.size() * (blk.size() - 1) / 2;
        if (pairs > best_pairs && is_bisimulation(f, cand)) {
            best = cand;
            best_pairs = pairs;
        }
        std::size_t i = n - 1;
        while (i > 0 && rgs[i] > maxp[i - 1]) --i;
        if (i == 0) break;
        ++rgs[i];
        for (std::size_t j = i; j < n; ++j) {
            if (j > i) rgs[j] = 0;
            maxp[j] = std::max(maxp[j - 1], rgs[j]);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Witness

std::optional<Witness> distinguish(const FutsModel& f, std::size_t s1, std::size_t s2) {
    if (s1 >= f.size() || s2 >= f.size()) throw BisimError("invalid state id");
    Partition p = Partition::single(f.size());
    while (true) {
        Partition next = split(p, all_signatures(f, p, false));
        if (!next.same_block(s1, s2)) break;
        if (next.count == p.count) return std::nullopt;
        p = std::move(next);
    }
    auto lookup = f.lookup(p.block_of);
    auto members = [&](std::size_t b) {
        std::string out = "{";
        bool first = true;
        for (std::size_t s = 0; s < f.size(); ++s)
            if (p.block_of[s] == b) {
                out += (first ? "" : ", ") + f.states[s].key;
                first = false;
            }
        return out + "}";
    };
    for (std::size_t r = 0; r < f.relations.size(); ++r) {
        const auto& rel = f.relations[r];
        for (std::size_t li = 0; li < rel.labels.size(); ++li) {
            if (label_signature(f, lookup, s1, r, li) == label_signature(f, lookup, s2, r, li)) continue;
            Witness w;
            w.relation = r;
            w.label = rel.labels[li].text();
            const auto zero = SemiringValue::zero(rel.semiring).text();
            if (rel.kind == RelKind::Simple) {
                auto a = ff_block_sums(rel.at(s1, li), lookup), b = ff_block_sums(rel.at(s2, li), lookup);
                std::map<std::size_t, std::pair<std::string, std::string>> cmp;
                for (auto& [blk, v] : a) cmp[blk].first = v.text();
                for (auto& [blk, v] : b) cmp[blk].second = v.text();
                for (auto& [blk, vals] : cmp) {
                    if (vals.first == vals.second) continue;
                    w.block = members(blk);
                    w.left = vals.first.empty() ? zero : vals.first;
                    w.right = vals.second.empty() ? zero : vals.second;
                    return w;
                }
            } else {
                auto a = lifted_sums(rel.at(s1, li), lookup), b = lifted_sums(rel.at(s2, li), lookup);
                std::map<std::string, std::pair<std::string, std::string>> cmp;
                for (auto& [cls, v] : a) cmp[cls].first = v.text();
                for (auto& [cls, v] : b) cmp[cls].second = v.text();
                for (auto& [cls, vals] : cmp) {
                    if (vals.first == vals.second) continue;
                    w.block = "distributions with block sums " + cls;
                    w.left = vals.first.empty() ? zero : vals.first;
                    w.right = vals.second.empty() ? zero : vals.second;
                    return w;
                }
            }
        }
    }
    throw BisimError("internal: split without a differing label");
}

// ---------------------------------------------------------------------------
// Oracle partition

namespace {

struct OracleSpace {
    std::vector<std::string> keys;
    std::vector<TermPtr> terms;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::vector<RatedMove>> pepa;
    std::vector<ImlTransitions> iml;
    std::vector<TpcTransitions> tpc;
    std::vector<MalTransitions> mal;

    std::size_t id(const std::string& k) const { return index.at(k); }
};

OracleSpace oracle_explore(const Model& m, std::size_t max_states) {
    OracleSpace sp;
    std::deque<std::size_t> queue;
    auto visit = [&](const TermPtr& t) {
        if (sp.index.count(t->key)) return;
        if (sp.keys.size() >= max_states)
            throw ExploreError("oracle exploration exceeded " + std::to_string(max_states) + " states", queue.size());
        sp.index.emplace(t->key, sp.keys.size());
        queue.push_back(sp.keys.size());
        sp.keys.push_back(t->key);
        sp.terms.push_back(t);
    };
    visit(m.init);
    while (!queue.empty()) {
        auto s = queue.front();
        queue.pop_front();
        TermPtr t = sp.terms[s];
        switch (m.lang) {
        case Lang::PEPA: {
            auto tr = pepa_transitions(m.env, t);
            for (const auto& mv : tr) visit(mv.target);
            sp.pepa.resize(sp.keys.size());
            sp.pepa[s] = std::move(tr);
            break;
        }
        case Lang::IML: {
            auto tr = iml_transitions(m.env, t);
            for (const auto& mv : tr.interactive) visit(mv.target);
            for (const auto& mv : tr.markov) visit(mv.target);
            sp.iml.resize(sp.keys.size());
            sp.iml[s] = std::move(tr);
            break;
        }
        case Lang::TPC: {
            auto tr = tpc_transitions(m.env, t);
            for (const auto& mv : tr.interactive) visit(mv.target);
            for (const auto& mv : tr.timed) visit(mv.target);
            sp.tpc.resize(sp.keys.size());
            sp.tpc[s] = std::move(tr);
            break;
        }
        case Lang::MAL: {
            auto tr = mal_transitions(m.env, t);
            for (const auto& mv : tr.probabilistic)
                for (const auto& x : mv.support) visit(x);
            for (const auto& mv : tr.markov) visit(mv.target);
            sp.mal.resize(sp.keys.size());
            sp.mal[s] = std::move(tr);
            break;
        }
        }
    }
    return sp;
}

std::string rate_map_text(const std::map<std::size_t, Rational>& m) {
    std::string out;
    for (const auto& [b, q] : m)
        if (sgn(q) != 0) out += std::to_string(b) + ":" + rational_text(q) + ",";
    return out;
}

template <class T>
std::string set_text(const std::set<T>& s) {
    std::string out;
    for (const auto& x : s) {
        if constexpr (std::is_same_v<T, std::pair<std::string, std::size_t>>)
            out += x.first + "@" + std::to_string(x.second) + ",";
        else if constexpr (std::is_same_v<T, std::pair<std::uint64_t, std::size_t>>)
            out += std::to_string(x.first) + "@" + std::to_string(x.second) + ",";
        else
            out += x.first + "@" + x.second + ",";
    }
    return out;
}

std::string oracle_signature(const Model& m, const OracleSpace& sp, const Partition& p, std::size_t s) {
    auto blk = [&](const TermPtr& t) { return p.block_of[sp.id(t->key)]; };
    auto markov = [&](const std::vector<DelayMove>& moves) {
        std::map<std::size_t, Rational> r;
        for (const auto& mv : moves) r[blk(mv.target)] += mv.rate * mv.multiplicity;
        return rate_map_text(r);
    };
    auto interactive = [&](const std::vector<ActMove>& moves) {
        std::set<std::pair<std::string, std::size_t>> t;
        for (const auto& mv : moves) t.emplace(mv.action, blk(mv.target));
        return set_text(t);
    };
    switch (m.lang) {
    case Lang::PEPA: {
        std::map<std::string, std::map<std::size_t, Rational>> q;
        for (const auto& mv : sp.pepa[s]) q[mv.action][blk(mv.target)] += mv.rate * mv.multiplicity;
        std::string out;
        for (const auto& [a, per] : q) out += a + "{" + rate_map_text(per) + "}";
        return out;
    }
    case Lang::IML: return interactive(sp.iml[s].interactive) + "|" + markov(sp.iml[s].markov);
    case Lang::TPC: {
        std::set<std::pair<std::uint64_t, std::size_t>> timed;
        for (const auto& mv : sp.tpc[s].timed) timed.emplace(mv.delay, blk(mv.target));
        return interactive(sp.tpc[s].interactive) + "|" + set_text(timed);
    }
    case Lang::MAL: {
        std::set<std::pair<std::string, std::string>> probs;
        for (const auto& mv : sp.mal[s].probabilistic) {
            std::map<std::size_t, Rational> cls;
            for (const auto& t : mv.support) cls[blk(t)] += ff_eval(mv.dist, t->key).as_rational();
            probs.emplace(mv.action, "{" + rate_map_text(cls) + "}");
        }
        return set_text(probs) + "|" + markov(sp.mal[s].markov);
    }
    }
    return {};
}

}  // namespace

OraclePartition oracle_partition(const Model& m, std::size_t max_states) {
    auto sp = oracle_explore(m, max_states);
    Partition p = Partition::single(sp.keys.size());
    while (true) {
        std::vector<std::string> sigs(sp.keys.size());
        for (std::size_t s = 0; s < sigs.size(); ++s) sigs[s] = oracle_signature(m, sp, p, s);
        Partition next = split(p, sigs);
        if (next.count == p.count) break;
        p = std::move(next);
    }
    return {sp.keys, p};
}

bool same_partition(const FutsModel& f, const Partition& p, const OraclePartition& o) {
    if (o.keys.size() != f.size()) return false;
    std::vector<std::size_t> raw(f.size());
    for (std::size_t i = 0; i < o.keys.size(); ++i) {
        auto id = f.id_of(o.keys[i]);
        if (id == kNoBlock) return false;
        raw[id] = o.partition.block_of[i];
    }
    return Partition::canonical(raw) == p;
}

// ---------------------------------------------------------------------------
// Quotient

namespace {

std::string block_key(const FutsModel& f, const std::vector<std::size_t>& reps, std::size_t b) {
    return "[" + f.states[reps[b]].key + "]";
}

FinFn quotient_fn(const FutsModel& f, const Relation& rel, const FinFn& fn, const BlockLookup& lookup,
                  const std::vector<std::size_t>& reps) {
    auto simple = [&](const FinFn& g) {
        std::vector<std::pair<Key, SemiringValue>> pairs;
        for (auto& [b, v] : ff_block_sums(g, lookup)) pairs.emplace_back(Key(block_key(f, reps, b)), v);
        return ff_make(g.tag(), std::move(pairs));
    };
    if (rel.kind == RelKind::Simple) return simple(fn);
    std::vector<std::pair<Key, SemiringValue>> pairs;
    for (const auto& e : fn.entries()) pairs.emplace_back(Key::of(simple(*e.inner)), e.value);
    return ff_make(fn.tag(), std::move(pairs));
}

}  // namespace

FutsModel minimize(const FutsModel& f, const Partition& p) {
    if (p.block_of.size() != f.size()) throw BisimError("partition does not match the model");
    std::vector<std::size_t> reps(p.count, kNoBlock);
    for (std::size_t s = 0; s < f.size(); ++s)
        if (reps[p.block_of[s]] == kNoBlock) reps[p.block_of[s]] = s;
    FutsModel q;
    q.language = f.language;
    for (const auto& rel : f.relations) {
        Relation r = rel;
        r.trans.clear();
        q.relations.push_back(std::move(r));
    }
    for (std::size_t b = 0; b < p.count; ++b) q.add_state(block_key(f, reps, b), f.states[reps[b]].term);
    q.init = p.block_of[f.init];
    auto lookup = f.lookup(p.block_of);
    for (std::size_t r = 0; r < f.relations.size(); ++r) {
        const auto& rel = f.relations[r];
        for (std::size_t s = 0; s < f.size(); ++s) {
            const auto b = p.block_of[s];
            for (std::size_t li = 0; li < rel.labels.size(); ++li) {
                auto fn = quotient_fn(f, rel, rel.at(s, li), lookup, reps);
                if (s == reps[b]) {
                    if (!fn.is_zero()) q.relations[r].trans[b].emplace(li, std::move(fn));
                } else if (!(fn == q.relations[r].at(b, li))) {
                    throw BisimError("partition is not stable: " + f.states[s].key + " and " + f.states[reps[b]].key +
                                     " differ on " + rel.labels[li].text());
                }
            }
        }
    }
    return q;
}

FutsModel disjoint_union(const FutsModel& a, const FutsModel& b) {
    if (a.relations.size() != b.relations.size()) throw BisimError("relation layouts differ");
    for (std::size_t r = 0; r < a.relations.size(); ++r) {
        const auto &x = a.relations[r], &y = b.relations[r];
        if (x.labels != y.labels || x.kind != y.kind || x.semiring != y.semiring) throw BisimError("relation layouts differ");
    }
    FutsModel u;
    u.language = a.language;
    for (const auto& rel : a.relations) {
        Relation r = rel;
        r.trans.clear();
        u.relations.push_back(std::move(r));
    }
    auto rekey = [](const std::string& prefix, const FinFn& fn, bool nested) {
        std::vector<std::pair<Key, SemiringValue>> pairs;
        for (const auto& e : fn.entries()) {
            if (!nested) {
                pairs.emplace_back(Key(prefix + e.key), e.value);
                continue;
            }
            std::vector<std::pair<Key, SemiringValue>> inner;
            for (const auto& ie : e.inner->entries()) inner.emplace_back(Key(prefix + ie.key), ie.value);
            pairs.emplace_back(Key::of(ff_make(e.inner->tag(), std::move(inner))), e.value);
        }
        return ff_make(fn.tag(), std::move(pairs));
    };
    for (const auto* side : {&a, &b}) {
        const std::string prefix = side == &a ? "L:" : "R:";
        const std::size_t offset = u.size();
        for (const auto& s : side->states) u.add_state(prefix + s.key, s.term);
        for (std::size_t r = 0; r < side->relations.size(); ++r) {
            const auto& rel = side->relations[r];
            for (std::size_t s = 0; s < side->size(); ++s)
                for (const auto& [li, fn] : rel.trans[s])
                    u.relations[r].trans[offset + s].emplace(li, rekey(prefix, fn, rel.kind == RelKind::Nested));
        }
    }
    u.init = a.init;
    return u;
}

}  // namespace futs

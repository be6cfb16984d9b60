#include "futs/crosscheck.hpp"

#include <map>
#include <set>

#include "futs/bisim.hpp"
#include "futs/sem_oracle.hpp"

namespace futs {

namespace {

struct Recorder {
    CheckResult r;
    explicit Recorder(std::string name) { r.name = std::move(name); }
    void ok() { ++r.checked; }
    void expect(bool cond, const std::string& what) {
        ++r.checked;
        if (!cond && r.passed) {
            r.passed = false;
            r.detail = what;
        }
    }
};

const TermPtr& term_at(const FutsModel& f, std::size_t s) {
    if (!f.states[s].term) throw ModelError("model has no terms; run explore first");
    return f.states[s].term;
}

std::map<std::string, Rational> rate_targets(const std::vector<RatedMove>& moves, const std::string& a) {
    std::map<std::string, Rational> out;
    for (const auto& m : moves)
        if (m.action == a) out[m.target->key] += m.rate * m.multiplicity;
    return out;
}

std::map<std::string, Rational> delay_targets(const std::vector<DelayMove>& moves) {
    std::map<std::string, Rational> out;
    for (const auto& m : moves) out[m.target->key] += m.rate * m.multiplicity;
    return out;
}

std::map<std::string, Rational> fn_rates(const FinFn& fn) {
    std::map<std::string, Rational> out;
    for (const auto& e : fn.entries()) out[e.key] = e.value.as_rational();
    return out;
}

std::string rates_text(const std::map<std::string, Rational>& m) {
    std::string out = "[";
    for (const auto& [k, q] : m) out += (out.size() > 1 ? ", " : "") + k + "->" + rational_text(q);
    return out + "]";
}

std::set<std::string> act_targets(const std::vector<ActMove>& moves, const std::string& a) {
    std::set<std::string> out;
    for (const auto& m : moves)
        if (m.action == a) out.insert(m.target->key);
    return out;
}

std::set<std::string> bool_support(const FinFn& fn) {
    std::set<std::string> out;
    for (const auto& e : fn.entries())
        if (e.value.as_bool()) out.insert(e.key);
    return out;
}

std::string where(const FutsModel& f, std::size_t s, const StepLabel& l) {
    return "state " + f.states[s].key + " label " + l.text();
}

}  // namespace

CheckResult check_determinism(const Model& m, const FutsModel& f) {
    Recorder rec("determinism");
    auto again = explore(m, f.size());
    rec.expect(serialize(again, Format::Json) == serialize(f, Format::Json), "re-exploration differs");
    StepContext fresh(m.env);
    for (std::size_t s = 0; s < f.size(); ++s)
        for (const auto& rel : f.relations)
            for (std::size_t li = 0; li < rel.labels.size(); ++li) {
                const auto& first = fresh.step(term_at(f, s), rel.labels[li]);
                StepContext other(m.env);
                const auto& second = other.step(term_at(f, s), rel.labels[li]);
                rec.expect(first == rel.at(s, li) && second == first, where(f, s, rel.labels[li]) + " is not deterministic");
            }
    return rec.r;
}

CheckResult check_apparent_rate(const Model& m, const FutsModel& f) {
    Recorder rec("apparent-rate");
    const auto& rel = f.relations.at(0);
    for (std::size_t s = 0; s < f.size(); ++s)
        for (std::size_t li = 0; li < rel.labels.size(); ++li) {
            const auto& a = rel.labels[li].action;
            Rational total = ff_oplus(rel.at(s, li)).as_rational();
            Rational ra = pepa_apparent_rate(m.env, a, *term_at(f, s));
            rec.expect(total == ra, where(f, s, rel.labels[li]) + ": total " + rational_text(total) +
                                        " but apparent rate " + rational_text(ra));
        }
    return rec.r;
}

CheckResult check_rate_agreement(const Model& m, const FutsModel& f) {
    Recorder rec("rate-agreement");
    const auto& rel = f.relations.at(0);
    for (std::size_t s = 0; s < f.size(); ++s) {
        auto moves = pepa_transitions(m.env, term_at(f, s));
        for (std::size_t li = 0; li < rel.labels.size(); ++li) {
            auto want = rate_targets(moves, rel.labels[li].action);
            auto got = fn_rates(rel.at(s, li));
            rec.expect(want == got, where(f, s, rel.labels[li]) + ": FuTS " + rates_text(got) + " vs SOS " + rates_text(want));
        }
    }
    return rec.r;
}

CheckResult check_interactive_agreement(const Model& m, const FutsModel& f) {
    Recorder rec("interactive-agreement");
    const auto& rel = f.relations.at(0);
    for (std::size_t s = 0; s < f.size(); ++s) {
        const auto& t = term_at(f, s);
        if (m.lang == Lang::MAL) {
            auto tr = mal_transitions(m.env, t);
            for (std::size_t li = 0; li < rel.labels.size(); ++li) {
                std::set<std::string> want;
                for (const auto& mv : tr.probabilistic)
                    if (mv.action == rel.labels[li].action) want.insert(mv.dist.serialize());
                rec.expect(want == bool_support(rel.at(s, li)), where(f, s, rel.labels[li]) + ": distributions differ");
            }
            continue;
        }
        auto moves = m.lang == Lang::IML ? iml_transitions(m.env, t).interactive : tpc_transitions(m.env, t).interactive;
        for (std::size_t li = 0; li < rel.labels.size(); ++li)
            rec.expect(act_targets(moves, rel.labels[li].action) == bool_support(rel.at(s, li)),
                       where(f, s, rel.labels[li]) + ": targets differ");
    }
    return rec.r;
}

CheckResult check_markov_agreement(const Model& m, const FutsModel& f) {
    Recorder rec("markov-agreement");
    const auto& rel = f.relations.at(1);
    for (std::size_t s = 0; s < f.size(); ++s) {
        const auto& t = term_at(f, s);
        auto moves = m.lang == Lang::IML ? iml_transitions(m.env, t).markov : mal_transitions(m.env, t).markov;
        auto want = delay_targets(moves);
        auto got = fn_rates(rel.at(s, 0));
        rec.expect(want == got, where(f, s, rel.labels[0]) + ": FuTS " + rates_text(got) + " vs SOS " + rates_text(want));
    }
    return rec.r;
}

CheckResult check_timed_agreement(const Model& m, const FutsModel& f) {
    Recorder rec("timed-agreement");
    const auto& rel = f.relations.at(1);
    for (std::size_t s = 0; s < f.size(); ++s) {
        std::set<std::pair<std::uint64_t, std::string>> want, got;
        for (const auto& mv : tpc_transitions(m.env, term_at(f, s)).timed) want.emplace(mv.delay, mv.target->key);
        for (const auto& e : rel.at(s, 0).entries())
            for (auto n : e.value.as_natset().elements()) got.emplace(n, e.key);
        rec.expect(want == got, where(f, s, rel.labels[0]) + ": timed targets differ");
    }
    return rec.r;
}

CheckResult check_tick_singletons(const Model&, const FutsModel& f) {
    Recorder rec("tick-singleton");
    const auto& rel = f.relations.at(1);
    for (std::size_t s = 0; s < f.size(); ++s)
        for (const auto& e : rel.at(s, 0).entries()) {
            const auto& v = e.value.as_natset();
            rec.expect(!v.is_top() && v.elements().size() == 1,
                       where(f, s, rel.labels[0]) + ": value " + e.value.text() + " at " + e.key);
        }
    return rec.r;
}

CheckResult check_time_determinism(const Model& m, const FutsModel& f) {
    Recorder rec("time-determinism");
    for (std::size_t s = 0; s < f.size(); ++s) {
        std::map<std::uint64_t, std::size_t> per;
        for (const auto& mv : tpc_transitions(m.env, term_at(f, s)).timed) ++per[mv.delay];
        for (auto [n, count] : per)
            rec.expect(count == 1, "state " + f.states[s].key + " has " + std::to_string(count) + " targets after delay " +
                                       std::to_string(n));
        if (per.empty()) rec.ok();
    }
    return rec.r;
}

CheckResult check_md_descent(const Model& m, const FutsModel& f) {
    Recorder rec("md-descent");
    const auto& rel = f.relations.at(1);
    for (std::size_t s = 0; s < f.size(); ++s) {
        auto here = md(m.env, *term_at(f, s));
        for (const auto& e : rel.at(s, 0).entries()) {
            auto there = md(m.env, *term_at(f, f.id_of(e.key)));
            rec.expect(there < here, "md(" + e.key + ") = " + std::to_string(there) + " is not below md(" +
                                         f.states[s].key + ") = " + std::to_string(here));
        }
    }
    return rec.r;
}

CheckResult check_distributions(const Model&, const FutsModel& f) {
    Recorder rec("distribution");
    const auto& rel = f.relations.at(0);
    for (std::size_t s = 0; s < f.size(); ++s)
        for (std::size_t li = 0; li < rel.labels.size(); ++li)
            for (const auto& e : rel.at(s, li).entries()) {
                if (!e.value.as_bool()) continue;
                bool ok = e.inner && e.inner->tag() == SemiringTag::NNRAT && ff_oplus(*e.inner).as_rational() == 1;
                rec.expect(ok, where(f, s, rel.labels[li]) + ": " + e.key + " is not a distribution");
            }
    return rec.r;
}

CheckResult check_correspondence(const Model& m, const FutsModel& f) {
    Recorder rec("correspondence");
    auto p = refine(f);
    auto o = oracle_partition(m, f.size());
    rec.expect(same_partition(f, p, o), "FuTS bisimilarity has " + std::to_string(p.count) +
                                            " classes, SOS equivalence has " + std::to_string(o.partition.count) +
                                            " over " + std::to_string(o.keys.size()) + " states");
    return rec.r;
}

std::vector<CheckResult> cross_check(const Model& m, const FutsModel& f) {
    std::vector<CheckResult> out{check_determinism(m, f)};
    switch (m.lang) {
    case Lang::PEPA:
        out.push_back(check_apparent_rate(m, f));
        out.push_back(check_rate_agreement(m, f));
        break;
    case Lang::IML:
        out.push_back(check_interactive_agreement(m, f));
        out.push_back(check_markov_agreement(m, f));
        break;
    case Lang::TPC:
        out.push_back(check_interactive_agreement(m, f));
        out.push_back(check_timed_agreement(m, f));
        out.push_back(check_tick_singletons(m, f));
        out.push_back(check_time_determinism(m, f));
        out.push_back(check_md_descent(m, f));
        break;
    case Lang::MAL:
        out.push_back(check_interactive_agreement(m, f));
        out.push_back(check_markov_agreement(m, f));
        out.push_back(check_distributions(m, f));
        break;
    }
    out.push_back(check_correspondence(m, f));
    return out;
}

}  // namespace futs

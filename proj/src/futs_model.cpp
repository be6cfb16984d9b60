#include "futs/futs_model.hpp"

#include <deque>
#include <json.hpp>
#include <sstream>

namespace futs {

using json = nlohmann::ordered_json;

const FinFn& Relation::at(std::size_t state, std::size_t label) const {
    static const FinFn zeros[] = {FinFn(SemiringTag::BOOL), FinFn(SemiringTag::NNRAT), FinFn(SemiringTag::NATSET)};
    const auto& row = trans.at(state);
    auto it = row.find(label);
    return it == row.end() ? zeros[static_cast<int>(semiring)] : it->second;
}

std::size_t FutsModel::id_of(std::string_view key) const {
    auto it = index_.find(std::string(key));
    return it == index_.end() ? kNoBlock : it->second;
}

std::size_t FutsModel::add_state(std::string key, TermPtr term) {
    if (auto id = id_of(key); id != kNoBlock) return id;
    std::size_t id = states.size();
    index_.emplace(key, id);
    states.push_back({id, std::move(key), std::move(term)});
    for (auto& r : relations) r.trans.resize(states.size());
    return id;
}

BlockLookup FutsModel::lookup(const std::vector<std::size_t>& block_of) const {
    return [this, &block_of](std::string_view key) {
        auto id = id_of(key);
        return id == kNoBlock ? kNoBlock : block_of[id];
    };
}

std::vector<Relation> relation_layout(const Model& m, const std::vector<TermPtr>& roots) {
    std::vector<StepLabel> acts;
    for (const auto& a : alphabet(m, roots)) acts.push_back(StepLabel::act(a));
    Relation interactive;
    interactive.labels = acts;
    switch (m.lang) {
    case Lang::PEPA: interactive.semiring = SemiringTag::NNRAT; return {interactive};
    case Lang::IML: interactive.semiring = SemiringTag::BOOL; break;
    case Lang::TPC: interactive.semiring = SemiringTag::BOOL; break;
    case Lang::MAL:
        interactive.semiring = SemiringTag::BOOL;
        interactive.kind = RelKind::Nested;
        interactive.inner_semiring = SemiringTag::NNRAT;
        break;
    }
    Relation quant;
    if (m.lang == Lang::TPC) {
        quant.labels = {StepLabel::tick()};
        quant.semiring = SemiringTag::NATSET;
    } else {
        quant.labels = {StepLabel::delta()};
        quant.semiring = SemiringTag::NNRAT;
    }
    return {interactive, quant};
}

FutsModel explore(const Model& m, std::size_t max_states) { return explore(m, {m.init}, max_states); }

FutsModel explore(const Model& m, const std::vector<TermPtr>& roots, std::size_t max_states) {
    FutsModel f;
    f.language = std::string(lang_name(m.lang));
    f.relations = relation_layout(m, roots);
    StepContext ctx(m.env);
    std::deque<std::size_t> queue;
    auto visit = [&](const std::string& key, TermPtr t) {
        if (f.id_of(key) != kNoBlock) return;
        if (f.size() >= max_states)
            throw ExploreError("exploration exceeded " + std::to_string(max_states) + " states with " +
                                   std::to_string(queue.size()) + " states still on the frontier",
                               queue.size());
        queue.push_back(f.add_state(key, std::move(t)));
    };
    for (const auto& r : roots) {
        ctx.key_of(r);
        visit(r->key, r);
    }
    f.init = f.id_of(roots.front()->key);
    while (!queue.empty()) {
        auto s = queue.front();
        queue.pop_front();
        TermPtr t = f.states[s].term;
        for (auto& rel : f.relations) {
            for (std::size_t li = 0; li < rel.labels.size(); ++li) {
                const FinFn& fn = ctx.step(t, rel.labels[li]);
                if (fn.is_zero()) continue;
                for (const auto& e : fn.entries()) {
                    if (e.inner) {
                        for (const auto& ie : e.inner->entries()) visit(ie.key, ctx.term_of(ie.key));
                    } else {
                        visit(e.key, ctx.term_of(e.key));
                    }
                }
                rel.trans[s].emplace(li, fn);
            }
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json entries_json(const FinFn& fn) {
    json arr = json::array();
    for (const auto& e : fn.entries()) {
        if (e.inner)
            arr.push_back({{"inner", entries_json(*e.inner)}, {"value", e.value.text()}});
        else
            arr.push_back({{"target", e.key}, {"value", e.value.text()}});
    }
    return arr;
}

std::string kind_name(RelKind k) { return k == RelKind::Nested ? "nested" : "simple"; }

StepLabel label_from(const std::string& text, std::size_t rel_index, SemiringTag tag) {
    if (rel_index > 0 && text == "tick" && tag == SemiringTag::NATSET) return StepLabel::tick();
    if (rel_index > 0 && text == "delta") return StepLabel::delta();
    return StepLabel::act(text);
}

FinFn fn_from(const json& arr, SemiringTag tag, std::optional<SemiringTag> inner) {
    std::vector<std::pair<Key, SemiringValue>> pairs;
    for (const auto& e : arr) {
        auto v = SemiringValue::parse(tag, e.at("value").get<std::string>());
        if (inner && e.contains("inner")) {
            pairs.emplace_back(Key::of(fn_from(e.at("inner"), *inner, std::nullopt)), v);
        } else {
            pairs.emplace_back(Key(e.at("target").get<std::string>()), v);
        }
    }
    return ff_make(tag, std::move(pairs));
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string fn_json_text(const FinFn& fn) { return entries_json(fn).dump(); }

std::string serialize(const FutsModel& f, Format fmt) {
    if (fmt == Format::Dot) {
        std::ostringstream os;
        os << "digraph futs {\n";
        for (const auto& s : f.states)
            os << "  s" << s.id << " [label=\"" << dot_escape(s.key) << "\"" << (s.id == f.init ? ", shape=doublecircle" : "")
               << "];\n";
        auto node = [&](const std::string& key) { return "s" + std::to_string(f.id_of(key)); };
        for (std::size_t s = 0; s < f.size(); ++s)
            for (const auto& rel : f.relations)
                for (const auto& [li, fn] : rel.trans[s]) {
                    const auto label = rel.labels[li].text();
                    for (const auto& e : fn.entries()) {
                        if (!e.inner) {
                            os << "  s" << s << " -> " << node(e.key) << " [label=\""
                               << dot_escape(label + " / " + e.value.text()) << "\"];\n";
                            continue;
                        }
                        for (const auto& ie : e.inner->entries())
                            os << "  s" << s << " -> " << node(ie.key) << " [label=\""
                               << dot_escape(label + " / " + e.value.text() + " " + e.inner->serialize() + " : " +
                                             ie.value.text())
                               << "\"];\n";
                    }
                }
        os << "}\n";
        return os.str();
    }
    json j;
    j["language"] = f.language;
    j["init"] = f.init;
    j["states"] = json::array();
    for (const auto& s : f.states) j["states"].push_back({{"id", s.id}, {"term", s.key}});
    j["relations"] = json::array();
    for (const auto& rel : f.relations) {
        json r;
        r["labels"] = json::array();
        for (const auto& l : rel.labels) r["labels"].push_back(l.text());
        r["kind"] = kind_name(rel.kind);
        r["semiring"] = std::string(tag_name(rel.semiring));
        if (rel.kind == RelKind::Nested) r["inner_semiring"] = std::string(tag_name(rel.inner_semiring));
        r["transitions"] = json::array();
        for (std::size_t s = 0; s < f.size(); ++s)
            for (const auto& [li, fn] : rel.trans[s])
                r["transitions"].push_back(
                    {{"source", s}, {"label", rel.labels[li].text()}, {"continuation", entries_json(fn)}});
        j["relations"].push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

FutsModel deserialize(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ModelError(std::string("malformed model JSON: ") + e.what());
    }
    try {
        FutsModel f;
        f.language = j.value("language", std::string("none"));
        for (std::size_t r = 0; r < j.at("relations").size(); ++r) {
            const auto& jr = j["relations"][r];
            Relation rel;
            rel.semiring = parse_tag(jr.at("semiring").get<std::string>());
            rel.kind = jr.value("kind", std::string("simple")) == "nested" ? RelKind::Nested : RelKind::Simple;
            if (rel.kind == RelKind::Nested) rel.inner_semiring = parse_tag(jr.at("inner_semiring").get<std::string>());
            for (const auto& l : jr.at("labels")) rel.labels.push_back(label_from(l.get<std::string>(), r, rel.semiring));
            f.relations.push_back(std::move(rel));
        }
        for (const auto& s : j.at("states")) {
            auto id = f.add_state(s.at("term").get<std::string>(), nullptr);
            if (id != s.at("id").get<std::size_t>()) throw ModelError("state ids must be dense and in order");
        }
        f.init = j.value("init", std::size_t{0});
        for (std::size_t r = 0; r < f.relations.size(); ++r) {
            auto& rel = f.relations[r];
            std::optional<SemiringTag> inner;
            if (rel.kind == RelKind::Nested) inner = rel.inner_semiring;
            for (const auto& t : j["relations"][r].at("transitions")) {
                auto src = t.at("source").get<std::size_t>();
                if (src >= f.size()) throw ModelError("transition from unknown state " + std::to_string(src));
                auto label = t.at("label").get<std::string>();
                std::size_t li = 0;
                while (li < rel.labels.size() && rel.labels[li].text() != label) ++li;
                if (li == rel.labels.size()) throw ModelError("unknown label " + label);
                auto fn = fn_from(t.at("continuation"), rel.semiring, inner);
                for (const auto& e : fn.entries()) {
                    if (e.inner) {
                        for (const auto& ie : e.inner->entries())
                            if (f.id_of(ie.key) == kNoBlock) throw ModelError("unknown state " + ie.key);
                    } else if (f.id_of(e.key) == kNoBlock) {
                        throw ModelError("unknown state " + e.key);
                    }
                }
                if (!fn.is_zero()) rel.trans[src][li] = ff_add(rel.at(src, li), fn);
            }
        }
        return f;
    } catch (const json::exception& e) {
        throw ModelError(std::string("malformed model JSON: ") + e.what());
    } catch (const SemiringError& e) {
        throw ModelError(std::string("malformed model JSON: ") + e.what());
    }
}

}  // namespace futs

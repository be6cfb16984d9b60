#include "futs/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace futs {

std::string_view lang_name(Lang lang) {
    switch (lang) {
    case Lang::PEPA: return "PEPA";
    case Lang::IML: return "IML";
    case Lang::TPC: return "TPC";
    case Lang::MAL: return "MAL";
    }
    return "?";
}

Lang parse_lang(std::string_view name) {
    std::string up(name);
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
    if (up == "PEPA") return Lang::PEPA;
    if (up == "IML") return Lang::IML;
    if (up == "TPC") return Lang::TPC;
    if (up == "MAL") return Lang::MAL;
    throw ModelError("unknown language '" + std::string(name) + "'");
}

std::optional<Lang> lang_from_path(std::string_view path) {
    auto dot = path.rfind('.');
    if (dot == std::string_view::npos) return std::nullopt;
    auto ext = path.substr(dot + 1);
    if (ext == "pepa") return Lang::PEPA;
    if (ext == "iml") return Lang::IML;
    if (ext == "tpc") return Lang::TPC;
    if (ext == "mal") return Lang::MAL;
    return std::nullopt;
}

bool Term::syncs_on(std::string_view a) const { return std::binary_search(sync.begin(), sync.end(), a); }

const std::string& term_key(const Term& t) { return t.key; }

// ---------------------------------------------------------------------------
// Construction

namespace {

std::string sync_text(Lang lang, const std::vector<std::string>& sync) {
    std::string inner;
    for (std::size_t i = 0; i < sync.size(); ++i) {
        if (i) inner += ',';
        inner += sync[i];
    }
    if (lang == Lang::PEPA) return "<" + inner + ">";
    return "|[" + (inner.empty() ? std::string(" ") : inner) + "]|";
}

std::shared_ptr<Term> make(TermKind kind, Lang lang) {
    auto t = std::make_shared<Term>();
    t->kind = kind;
    t->lang = lang;
    return t;
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw ModelError(msg);
}

}  // namespace

namespace term {

TermPtr nil(Lang lang) {
    auto t = make(TermKind::Nil, lang);
    t->key = "nil";
    return t;
}

TermPtr rated_prefix(std::string action, Rational rate, TermPtr body) {
    rate.canonicalize();
    require(sgn(rate) > 0, "nonpositive rate " + rational_text(rate));
    auto t = make(TermKind::RatedPrefix, Lang::PEPA);
    t->key = "(" + action + "," + rational_text(rate) + ")." + body->key;
    t->action = std::move(action);
    t->rate = std::move(rate);
    t->left = std::move(body);
    return t;
}

TermPtr act_prefix(Lang lang, std::string action, TermPtr body) {
    auto t = make(TermKind::ActPrefix, lang);
    t->key = action + "." + body->key;
    t->action = std::move(action);
    t->left = std::move(body);
    return t;
}

TermPtr rate_prefix(Lang lang, Rational rate, TermPtr body) {
    rate.canonicalize();
    require(sgn(rate) > 0, "nonpositive rate " + rational_text(rate));
    auto t = make(TermKind::RatePrefix, lang);
    // "2.1/2.P" would lex as the decimal 2.1, so chained rates get parentheses
    const bool wrap = body->kind == TermKind::RatePrefix;
    t->key = rational_text(rate) + "." + (wrap ? "(" + body->key + ")" : body->key);
    t->rate = std::move(rate);
    t->left = std::move(body);
    return t;
}

TermPtr time_prefix(std::uint64_t delay, TermPtr body) {
    require(delay >= 1, "nonpositive delay 0");
    auto t = make(TermKind::TimePrefix, Lang::TPC);
    t->key = "(" + std::to_string(delay) + ")." + body->key;
    t->delay = delay;
    t->left = std::move(body);
    return t;
}

TermPtr prob_prefix(std::string action, std::vector<Branch> branches) {
    require(!branches.empty(), "probabilistic prefix needs at least one branch");
    Rational total = 0;
    std::string key = action + ".{";
    for (std::size_t i = 0; i < branches.size(); ++i) {
        auto& b = branches[i];
        b.prob.canonicalize();
        require(sgn(b.prob) > 0 && b.prob <= 1, "probability " + rational_text(b.prob) + " outside (0,1]");
        total += b.prob;
        if (i) key += " [] ";
        key += rational_text(b.prob) + ":" + b.target->key;
    }
    require(total == 1, "probabilities sum to " + rational_text(total));
    auto t = make(TermKind::ProbPrefix, Lang::MAL);
    t->key = key + "}";
    t->action = std::move(action);
    t->branches = std::move(branches);
    return t;
}

TermPtr choice(TermPtr l, TermPtr r) {
    auto t = make(TermKind::Choice, l->lang);
    t->key = "(" + l->key + " + " + r->key + ")";
    t->left = std::move(l);
    t->right = std::move(r);
    return t;
}

TermPtr par(std::vector<std::string> sync, TermPtr l, TermPtr r) {
    std::sort(sync.begin(), sync.end());
    sync.erase(std::unique(sync.begin(), sync.end()), sync.end());
    auto t = make(TermKind::Par, l->lang);
    t->key = "(" + l->key + " " + sync_text(l->lang, sync) + " " + r->key + ")";
    t->sync = std::move(sync);
    t->left = std::move(l);
    t->right = std::move(r);
    return t;
}

TermPtr constant(Lang lang, std::string name) {
    auto t = make(TermKind::Const, lang);
    t->key = name;
    t->name = std::move(name);
    return t;
}

}  // namespace term

void Env::define(Definition def) {
    if (auto* prev = find(def.name))
        throw ModelError("duplicate definition of " + def.name + " at lines " + std::to_string(prev->line) +
                         " and " + std::to_string(def.line));
    index_.emplace(def.name, defs_.size());
    defs_.push_back(std::move(def));
}

const Definition* Env::find(std::string_view name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &defs_[it->second];
}

const TermPtr& Env::body(std::string_view name) const {
    auto* d = find(name);
    if (!d) throw ModelError("undefined constant " + std::string(name));
    return d->body;
}

ParseError::ParseError(const std::string& msg, int line, int col)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line_(line), col_(col) {}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { Lower, Upper, Number, Sym, Newline, End };

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

std::vector<Token> lex(std::string_view src) {
    static const char* const multi[] = {"|[", "]|", "[]"};
    std::vector<Token> out;
    int line = 1, col = 1, depth = 0;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (c == '\n' || c == ';') {
            if (depth == 0 && (out.empty() || out.back().kind != Tok::Newline))
                out.push_back({Tok::Newline, "\\n", line, col});
            advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        int l = line, cl = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
                ++j;
            std::string word(src.substr(i, j - i));
            bool upper = std::isupper(static_cast<unsigned char>(c));
            out.push_back({upper ? Tok::Upper : Tok::Lower, word, l, cl});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            auto digits = [&] {
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            };
            digits();
            if (j + 1 < src.size() && src[j] == '/' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                ++j;
                digits();
            } else if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                ++j;
                digits();
            }
            out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        bool matched = false;
        for (const char* m : multi) {
            std::string_view mv(m);
            if (src.substr(i).starts_with(mv)) {
                if (mv == "|[") ++depth;
                if (mv == "]|") depth = std::max(0, depth - 1);
                out.push_back({Tok::Sym, std::string(mv), l, cl});
                advance(mv.size());
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string_view("(){}<>,.+:=").find(c) == std::string_view::npos)
            throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
        if (c == '(' || c == '{') ++depth;
        if (c == ')' || c == '}') depth = std::max(0, depth - 1);
        out.push_back({Tok::Sym, std::string(1, c), l, cl});
        advance(1);
    }
    out.push_back({Tok::End, "end of input", line, col});
    return out;
}

// ---------------------------------------------------------------------------
// Parser

struct ConstRef {
    std::string name;
    int line, col;
};

class Parser {
  public:
    Parser(Lang lang, std::vector<Token> toks) : lang_(lang), toks_(std::move(toks)) {}

    Model model() {
        Model m;
        m.lang = lang_;
        int init_line = 0;
        skip_newlines();
        if (peek().kind == Tok::End) throw ParseError("empty model", peek().line, peek().col);
        while (peek().kind != Tok::End) {
            const Token& head = peek();
            if (head.kind == Tok::Lower && head.text == "init") {
                next();
                if (m.init) throw ParseError("second init (first at line " + std::to_string(init_line) + ")", head.line, head.col);
                init_line = head.line;
                m.init = term();
            } else if (head.kind == Tok::Upper) {
                next();
                expect("=");
                auto body = term();
                try {
                    m.env.define({head.text, body, head.line});
                } catch (const ModelError& e) {
                    throw ParseError(e.what(), head.line, head.col);
                }
            } else {
                throw ParseError("expected a definition 'Name = Term' or 'init Term', found '" + head.text + "'",
                                 head.line, head.col);
            }
            if (peek().kind != Tok::End && peek().kind != Tok::Newline)
                throw ParseError("unexpected '" + peek().text + "' after term", peek().line, peek().col);
            skip_newlines();
        }
        if (!m.init) throw ParseError("missing init line", peek().line, peek().col);
        resolve(m.env);
        return m;
    }

    TermPtr single(const Env& env) {
        skip_newlines();
        auto t = term();
        skip_newlines();
        if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "' after term", peek().line, peek().col);
        resolve(env);
        return t;
    }

  private:
    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool at(std::string_view sym, std::size_t ahead = 0) const {
        const auto& t = peek(ahead);
        return t.kind == Tok::Sym && t.text == sym;
    }
    void expect(std::string_view sym) {
        if (!at(sym)) throw ParseError("expected '" + std::string(sym) + "', found '" + peek().text + "'", peek().line, peek().col);
        next();
    }
    void skip_newlines() {
        while (peek().kind == Tok::Newline) next();
    }
    [[noreturn]] void fail(const std::string& msg, const Token& at) { throw ParseError(msg, at.line, at.col); }

    template <class F>
    auto guarded(const Token& at, F&& f) {
        try {
            return f();
        } catch (const ModelError& e) {
            fail(e.what(), at);
        }
    }

    void resolve(const Env& env) {
        for (const auto& r : refs_)
            if (!env.find(r.name)) throw ParseError("undefined constant " + r.name, r.line, r.col);
    }

    // par := choice { parop choice }
    TermPtr term() {
        auto lhs = sum();
        while (true) {
            std::vector<std::string> sync;
            if (lang_ == Lang::PEPA && at("<")) {
                next();
                sync = action_list(">");
            } else if (lang_ != Lang::PEPA && at("|[")) {
                next();
                sync = action_list("]|");
            } else {
                break;
            }
            auto rhs = sum();
            lhs = term::par(std::move(sync), std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    std::vector<std::string> action_list(std::string_view close) {
        std::vector<std::string> acts;
        if (at(close)) {
            next();
            return acts;
        }
        while (true) {
            if (peek().kind != Tok::Lower) fail("expected an action name, found '" + peek().text + "'", peek());
            acts.push_back(next().text);
            if (at(",")) {
                next();
                continue;
            }
            expect(close);
            return acts;
        }
    }

    TermPtr sum() {
        auto lhs = prefix();
        while (at("+")) {
            next();
            lhs = term::choice(std::move(lhs), prefix());
        }
        return lhs;
    }

    Rational number(const Token& t) {
        return guarded(t, [&] {
            try {
                return parse_rational(t.text);
            } catch (const SemiringError& e) {
                throw ModelError(e.what());
            }
        });
    }

    TermPtr prefix() {
        const Token& t = peek();
        if (t.kind == Tok::Lower && t.text == "nil") {
            next();
            return term::nil(lang_);
        }
        if (t.kind == Tok::Upper) {
            next();
            refs_.push_back({t.text, t.line, t.col});
            return term::constant(lang_, t.text);
        }
        if (at("(")) {
            if (lang_ == Lang::PEPA && peek(1).kind == Tok::Lower && peek(1).text != "nil" && at(",", 2)) {
                next();
                std::string action = next().text;
                expect(",");
                if (peek().kind != Tok::Number) fail("expected a rate, found '" + peek().text + "'", peek());
                const Token& rt = next();
                Rational rate = number(rt);
                expect(")");
                expect(".");
                auto body = prefix();
                return guarded(rt, [&] { return term::rated_prefix(action, rate, body); });
            }
            if (lang_ == Lang::TPC && peek(1).kind == Tok::Number && at(")", 2) && at(".", 3)) {
                next();
                const Token& nt = next();
                next();
                next();
                if (!std::all_of(nt.text.begin(), nt.text.end(), [](unsigned char c) { return std::isdigit(c); }))
                    fail("delay must be a positive integer, found " + nt.text, nt);
                std::uint64_t n = std::stoull(nt.text);
                auto body = prefix();
                return guarded(nt, [&] { return term::time_prefix(n, body); });
            }
            next();
            auto inner = term();
            expect(")");
            return inner;
        }
        if (t.kind == Tok::Number) {
            if (lang_ != Lang::IML && lang_ != Lang::MAL) fail("rate prefix is not available in " + std::string(lang_name(lang_)), t);
            next();
            Rational rate = number(t);
            expect(".");
            auto body = prefix();
            return guarded(t, [&] { return term::rate_prefix(lang_, rate, body); });
        }
        if (t.kind == Tok::Lower) {
            if (lang_ == Lang::PEPA) fail("PEPA actions need a rate: (" + t.text + ", r).P", t);
            next();
            expect(".");
            if (lang_ == Lang::MAL) {
                if (at("{")) return branches(t);
                auto body = prefix();
                return term::prob_prefix(t.text, {Branch{Rational(1), body}});
            }
            auto body = prefix();
            return term::act_prefix(lang_, t.text, body);
        }
        fail("expected a term, found '" + t.text + "'", t);
    }

    TermPtr branches(const Token& act) {
        expect("{");
        std::vector<Branch> bs;
        while (true) {
            if (peek().kind != Tok::Number) fail("expected a probability, found '" + peek().text + "'", peek());
            Rational p = number(next());
            expect(":");
            bs.push_back({p, term()});
            if (at("[]")) {
                next();
                continue;
            }
            expect("}");
            break;
        }
        return guarded(act, [&] { return term::prob_prefix(act.text, std::move(bs)); });
    }

    Lang lang_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<ConstRef> refs_;
};

}  // namespace

Model parse_model(Lang lang, std::string_view text) { return Parser(lang, lex(text)).model(); }

TermPtr parse_term(Lang lang, std::string_view text, const Env& env) { return Parser(lang, lex(text)).single(env); }

// ---------------------------------------------------------------------------
// Guardedness and alphabet

namespace {

/// Constants reachable from `t` without crossing a guard.
void unguarded_refs(const Term& t, bool action_only, std::vector<std::string>& out) {
    switch (t.kind) {
    case TermKind::Const: out.push_back(t.name); return;
    case TermKind::Choice:
    case TermKind::Par:
        unguarded_refs(*t.left, action_only, out);
        unguarded_refs(*t.right, action_only, out);
        return;
    case TermKind::TimePrefix:
        if (action_only) unguarded_refs(*t.left, action_only, out);
        return;
    default: return;
    }
}

GuardReport find_cycle(const Model& m, bool action_only) {
    const auto& defs = m.env.definitions();
    std::map<std::string, std::vector<std::string>> edges;
    for (const auto& d : defs) unguarded_refs(*d.body, action_only, edges[d.name]);

    std::map<std::string, int> color;  // 0 white, 1 on stack, 2 done
    std::vector<std::string> stack;
    GuardReport rep;
    std::function<bool(const std::string&)> dfs = [&](const std::string& x) {
        color[x] = 1;
        stack.push_back(x);
        for (const auto& y : edges[x]) {
            if (color[y] == 1) {
                auto it = std::find(stack.begin(), stack.end(), y);
                rep.ok = false;
                rep.constant = y;
                rep.path.assign(it, stack.end());
                rep.path.push_back(y);
                return true;
            }
            if (color[y] == 0 && dfs(y)) return true;
        }
        stack.pop_back();
        color[x] = 2;
        return false;
    };
    for (const auto& d : defs)
        if (color[d.name] == 0 && dfs(d.name)) break;
    if (!rep.ok) {
        std::string p;
        for (std::size_t i = 0; i < rep.path.size(); ++i) p += (i ? " -> " : "") + rep.path[i];
        rep.message = "constant " + rep.constant + " is not " + (action_only ? "action-" : "prefix-") +
                      "guarded: " + p;
    }
    return rep;
}

void collect_actions(const Term& t, std::set<std::string>& out) {
    if (!t.action.empty()) out.insert(t.action);
    for (const auto& a : t.sync) out.insert(a);
    for (const auto& b : t.branches) collect_actions(*b.target, out);
    if (t.left) collect_actions(*t.left, out);
    if (t.right) collect_actions(*t.right, out);
}

}  // namespace

GuardReport check_guarded(const Model& m) {
    auto rep = find_cycle(m, false);
    if (rep.ok && m.lang == Lang::TPC) rep = find_cycle(m, true);
    return rep;
}

std::set<std::string> alphabet(const Model& m) {
    std::set<std::string> out;
    for (const auto& d : m.env.definitions()) collect_actions(*d.body, out);
    if (m.init) collect_actions(*m.init, out);
    return out;
}

std::set<std::string> alphabet(const Model& m, const std::vector<TermPtr>& extra) {
    auto out = alphabet(m);
    for (const auto& t : extra) collect_actions(*t, out);
    return out;
}

}  // namespace futs

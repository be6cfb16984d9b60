#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "futs/semiring.hpp"

namespace futs {

enum class Lang { PEPA, IML, TPC, MAL };

std::string_view lang_name(Lang lang);
Lang parse_lang(std::string_view name);
/// Language from a file extension (.pepa/.iml/.tpc/.mal); nullopt otherwise.
std::optional<Lang> lang_from_path(std::string_view path);

enum class TermKind {
    Nil,
    RatedPrefix,  // PEPA (a, r).P
    ActPrefix,    // IML/TPC a.P
    RatePrefix,   // IML/MAL r.P
    TimePrefix,   // TPC (n).P
    ProbPrefix,   // MAL a.{p1: P1 [] ... }
    Choice,
    Par,          // PEPA cooperation or parallel composition
    Const,
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Branch {
    Rational prob;
    TermPtr target;
};

/// Immutable process term. The canonical key is computed at construction.
struct Term {
    TermKind kind = TermKind::Nil;
    Lang lang = Lang::PEPA;
    std::string action;              // prefixes
    Rational rate;                   // RatedPrefix, RatePrefix
    std::uint64_t delay = 0;         // TimePrefix
    std::vector<Branch> branches;    // ProbPrefix
    std::vector<std::string> sync;   // Par, sorted and duplicate-free
    TermPtr left, right;             // prefix body in `left`
    std::string name;                // Const
    std::string key;

    bool is_prefix() const {
        return kind == TermKind::RatedPrefix || kind == TermKind::ActPrefix || kind == TermKind::RatePrefix ||
               kind == TermKind::TimePrefix || kind == TermKind::ProbPrefix;
    }
    bool syncs_on(std::string_view a) const;
};

namespace term {
TermPtr nil(Lang lang);
TermPtr rated_prefix(std::string action, Rational rate, TermPtr body);
TermPtr act_prefix(Lang lang, std::string action, TermPtr body);
TermPtr rate_prefix(Lang lang, Rational rate, TermPtr body);
TermPtr time_prefix(std::uint64_t delay, TermPtr body);
TermPtr prob_prefix(std::string action, std::vector<Branch> branches);
TermPtr choice(TermPtr l, TermPtr r);
TermPtr par(std::vector<std::string> sync, TermPtr l, TermPtr r);
TermPtr constant(Lang lang, std::string name);
}  // namespace term

/// Fully parenthesized text of a term; it parses back to the same term.
const std::string& term_key(const Term& t);

struct Definition {
    std::string name;
    TermPtr body;
    int line = 0;
};

class Env {
  public:
    void define(Definition def);
    const Definition* find(std::string_view name) const;
    const TermPtr& body(std::string_view name) const;
    const std::vector<Definition>& definitions() const { return defs_; }
    std::size_t size() const { return defs_.size(); }

  private:
    std::vector<Definition> defs_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

struct Model {
    Lang lang = Lang::PEPA;
    Env env;
    TermPtr init;
};

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& msg, int line, int col);
    int line() const { return line_; }
    int column() const { return col_; }

  private:
    int line_, col_;
};

class ModelError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

Model parse_model(Lang lang, std::string_view text);
/// Parses a single term; every constant must be defined in `env`.
TermPtr parse_term(Lang lang, std::string_view text, const Env& env);

struct GuardReport {
    bool ok = true;
    std::string constant;            // first offending constant
    std::vector<std::string> path;   // cycle, starting and ending at `constant`
    std::string message;
};

/// Every recursion cycle through constants must pass a prefix. For TPC it
/// must pass an action prefix, since time prefixes are unfolded by the
/// timed step.
GuardReport check_guarded(const Model& m);

std::set<std::string> alphabet(const Model& m);
/// Also collects the actions of `extra` terms.
std::set<std::string> alphabet(const Model& m, const std::vector<TermPtr>& extra);

}  // namespace futs

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>

#include "futs/fsfun.hpp"
#include "futs/syntax.hpp"

namespace futs {

struct StepLabel {
    enum class Kind { Act, Delta, Tick };
    Kind kind = Kind::Act;
    std::string action;

    static StepLabel act(std::string a) { return {Kind::Act, std::move(a)}; }
    static StepLabel delta() { return {Kind::Delta, {}}; }
    static StepLabel tick() { return {Kind::Tick, {}}; }
    /// Action name, or "delta" / "tick".
    std::string text() const;
    friend bool operator==(const StepLabel&, const StepLabel&) = default;
};

/// Owns the terms created while stepping, so that every continuation key can
/// be mapped back to its term, and memoizes steps per (term key, label).
/// Not thread-safe; one context per exploration.
class StepContext {
  public:
    explicit StepContext(const Env& env) : env_(&env) {}

    const Env& env() const { return *env_; }
    /// Registers `t` under its key and returns the key.
    Key key_of(const TermPtr& t);
    /// Term for a key previously registered; null when unknown.
    TermPtr term_of(std::string_view key) const;
    const TermPtr& body(const Term& constant) const { return env_->body(constant.name); }

    /// Dispatches on the term's language. MAL action labels give a nested
    /// continuation (outer BOOL over NNRAT distributions).
    const FinFn& step(const TermPtr& t, const StepLabel& label);

    std::size_t memo_size() const { return memo_.size(); }

  private:
    FinFn compute(const TermPtr& t, const StepLabel& label);

    const Env* env_;
    std::unordered_map<std::string, TermPtr> terms_;
    std::unordered_map<std::string, FinFn> memo_;
};

/// min(⊕φ, ⊕ψ) / (⊕φ · ⊕ψ), or 0 when either total is 0.
Rational arf(const FinFn& phi, const FinFn& psi);

FinFn pepa_step(StepContext& ctx, const TermPtr& p, const std::string& action);
FinFn iml_step(StepContext& ctx, const TermPtr& p, const StepLabel& label);
FinFn tpc_step(StepContext& ctx, const TermPtr& p, const StepLabel& label);
FinFn mal_step(StepContext& ctx, const TermPtr& p, const StepLabel& label);

/// [n;P] + [P -> {n}] + (n + cont), where `cont` is the tick continuation of P.
FinFn tpc_time_prefix(StepContext& ctx, std::uint64_t n, const TermPtr& p, const FinFn& cont);

enum class BoxKind { Choice, Parallel };
/// Pointwise intersection over the syntactic sum (or parallel with `sync`).
FinFn tpc_boxed(StepContext& ctx, BoxKind kind, const FinFn& lhs, const FinFn& rhs,
                const std::vector<std::string>& sync = {});

/// Maps mu1 ||_A mu2 to true for every true-mapped mu1 of `lhs` and mu2 of `rhs`.
FinFn mal_nested_par(StepContext& ctx, const std::vector<std::string>& sync, const FinFn& lhs, const FinFn& rhs);

/// Nested Dirac [[P -> 1] -> true].
FinFn mal_nested_dirac(StepContext& ctx, const TermPtr& p);

/// Maximum delay of a TPC process.
std::uint64_t md(const Env& env, const Term& p);

}  // namespace futs

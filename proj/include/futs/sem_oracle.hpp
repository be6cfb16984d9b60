#pragma once

// Textbook SOS semantics with explicit derivation counting. Kept free of the
// FuTS step code so the two can be checked against each other.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "futs/fsfun.hpp"
#include "futs/syntax.hpp"

namespace futs {

class OracleError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One (a, rate, target) triple and the number of derivations that yield it.
struct RatedMove {
    std::string action;
    Rational rate;
    TermPtr target;
    std::uint64_t multiplicity = 1;
};

/// Markovian delay (rate, target) with multiplicity.
struct DelayMove {
    Rational rate;
    TermPtr target;
    std::uint64_t multiplicity = 1;
};

struct ActMove {
    std::string action;
    TermPtr target;
};

struct TimedMove {
    std::uint64_t delay;
    TermPtr target;
};

struct ProbMove {
    std::string action;
    FinFn dist;  // NNRAT over target keys
    std::vector<TermPtr> support;
};

using TargetSet = std::set<std::string, std::less<>>;

// PEPA -----------------------------------------------------------------------

/// Aggregated derivations, sorted by action, target key, then rate.
std::vector<RatedMove> pepa_transitions(const Env& env, const TermPtr& p);
/// Total rate of a-derivations from p into `targets`.
Rational pepa_q(const Env& env, const TermPtr& p, const TargetSet& targets, const std::string& a);
Rational pepa_q(const std::vector<RatedMove>& moves, const TargetSet& targets, const std::string& a);
/// Syntactic apparent rate r_a(p).
Rational pepa_apparent_rate(const Env& env, const std::string& a, const Term& p);

// IML ------------------------------------------------------------------------

struct ImlTransitions {
    std::vector<ActMove> interactive;  // set: each (a, target) once, sorted
    std::vector<DelayMove> markov;     // aggregated by (rate, target)
};

ImlTransitions iml_transitions(const Env& env, const TermPtr& p);
/// Some a-move lands in `targets`.
bool iml_T(const ImlTransitions& tr, const std::string& a, const TargetSet& targets);
/// Total Markovian rate into `targets`, with multiplicity.
Rational iml_R(const ImlTransitions& tr, const TargetSet& targets);

// TPC ------------------------------------------------------------------------

struct TpcTransitions {
    std::vector<ActMove> interactive;
    std::vector<TimedMove> timed;  // set, sorted by (delay, target key)
};

inline constexpr std::size_t kDefaultTimedCap = 10000;

/// Throws OracleError when more than `cap` timed moves are generated.
TpcTransitions tpc_transitions(const Env& env, const TermPtr& p, std::size_t cap = kDefaultTimedCap);

// MAL ------------------------------------------------------------------------

struct MalTransitions {
    std::vector<ProbMove> probabilistic;  // set of (a, distribution)
    std::vector<DelayMove> markov;
};

MalTransitions mal_transitions(const Env& env, const TermPtr& p);
/// Some a-move reaches a distribution whose serialization is in `dists`.
bool mal_I(const MalTransitions& tr, const std::string& a, const TargetSet& dists);
Rational mal_M(const MalTransitions& tr, const TargetSet& targets);

}  // namespace futs

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "futs/futs_model.hpp"
#include "futs/syntax.hpp"

namespace futs::testing {

using Rng = std::mt19937_64;

/// Random guarded model source text. Parallel composition appears only in
/// init, so state spaces stay finite. TPC recursion always passes an action.
std::string random_model_text(Lang lang, Rng& rng);

/// A parsed and explored random model with at most `max_states` states;
/// draws until one fits.
struct Sample {
    std::string text;
    Model model;
    FutsModel futs;
};
Sample random_sample(Lang lang, Rng& rng, std::size_t max_states, std::size_t min_states = 1);

/// Random term in `lang` over constants X0..X{consts-1}, used for round trips.
TermPtr random_term(Lang lang, Rng& rng, int depth, int consts);

/// An arbitrary small FutsModel without an underlying calculus: random
/// continuations in one of the four relation layouts.
FutsModel random_raw_model(Rng& rng, std::size_t n_states);

SemiringValue random_value(SemiringTag tag, Rng& rng);

}  // namespace futs::testing

#pragma once

#include <string>
#include <vector>

#include "futs/futs_model.hpp"
#include "futs/syntax.hpp"

namespace futs {

struct CheckResult {
    std::string name;
    bool passed = true;
    std::size_t checked = 0;
    std::string detail;  // first failure
};

// Each check compares the explored FuTS against the SOS oracle or a
// structural property. `f` must come from explore(m).
CheckResult check_determinism(const Model& m, const FutsModel& f);
CheckResult check_apparent_rate(const Model& m, const FutsModel& f);
CheckResult check_rate_agreement(const Model& m, const FutsModel& f);
CheckResult check_interactive_agreement(const Model& m, const FutsModel& f);
CheckResult check_markov_agreement(const Model& m, const FutsModel& f);
CheckResult check_timed_agreement(const Model& m, const FutsModel& f);
CheckResult check_tick_singletons(const Model& m, const FutsModel& f);
CheckResult check_time_determinism(const Model& m, const FutsModel& f);
CheckResult check_md_descent(const Model& m, const FutsModel& f);
CheckResult check_distributions(const Model& m, const FutsModel& f);
CheckResult check_correspondence(const Model& m, const FutsModel& f);

/// Every check that applies to the model's language.
std::vector<CheckResult> cross_check(const Model& m, const FutsModel& f);

}  // namespace futs

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "futs/futs_model.hpp"
#include "futs/syntax.hpp"

namespace futs {

class BisimError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Block assignment with dense ids ordered by least member.
struct Partition {
    std::vector<std::size_t> block_of;
    std::size_t count = 0;

    /// Renumbers an arbitrary assignment into canonical form.
    static Partition canonical(const std::vector<std::size_t>& raw);
    static Partition single(std::size_t n) { return canonical(std::vector<std::size_t>(n, 0)); }
    static Partition discrete(std::size_t n);

    std::vector<std::vector<std::size_t>> blocks() const;
    bool same_block(std::size_t a, std::size_t b) const { return block_of.at(a) == block_of.at(b); }
    friend bool operator==(const Partition&, const Partition&) = default;
};

std::string partition_json(const Partition& p);

/// Per-state signature under `p`: block sums of every continuation, with
/// nested continuations grouped by the lifted classes of their inner functions.
std::string signature(const FutsModel& f, const Partition& p, std::size_t state);

/// One splitting round: states stay together iff same old block and equal signature.
Partition split(const Partition& p, const std::vector<std::string>& sigs);

struct RefineStats {
    std::size_t rounds = 0;
};

/// Coarsest bisimulation; signatures are computed in parallel.
Partition refine(const FutsModel& f, RefineStats* stats = nullptr);
/// Same as refine, single-threaded.
Partition refine_serial(const FutsModel& f, RefineStats* stats = nullptr);
bool is_stable(const FutsModel& f, const Partition& p);

bool bisimilar(const FutsModel& f, std::size_t s1, std::size_t s2);

inline constexpr std::size_t kBruteForceLimit = 8;
/// Enumerates every partition and keeps the coarsest one satisfying the
/// bisimulation condition. At most kBruteForceLimit states.
Partition brute_force(const FutsModel& f);
/// Checks the bisimulation condition for one candidate partition directly.
bool is_bisimulation(const FutsModel& f, const Partition& p);

/// Why two states differ. Taken from the round in which they were split,
/// at the first label whose block sums disagree.
struct Witness {
    std::size_t relation = 0;
    std::string label;
    std::string block;  // member keys, or the inner class for nested relations
    std::string left, right;
};
std::optional<Witness> distinguish(const FutsModel& f, std::size_t s1, std::size_t s2);

/// Partition computed from the SOS semantics, over term keys.
struct OraclePartition {
    std::vector<std::string> keys;  // oracle exploration order
    Partition partition;
};
OraclePartition oracle_partition(const Model& m, std::size_t max_states = kDefaultMaxStates);

/// Both partitions over the same key set, with the same blocks.
bool same_partition(const FutsModel& f, const Partition& p, const OraclePartition& o);

FutsModel minimize(const FutsModel& f, const Partition& p);
/// Union of two models with the same relation layout; keys get the prefixes
/// "L:" and "R:".
FutsModel disjoint_union(const FutsModel& a, const FutsModel& b);

}  // namespace futs

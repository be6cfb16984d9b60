#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "futs/fsfun.hpp"
#include "futs/sem_futs.hpp"
#include "futs/syntax.hpp"

namespace futs {

enum class RelKind { Simple, Nested };

struct Relation {
    std::vector<StepLabel> labels;
    RelKind kind = RelKind::Simple;
    SemiringTag semiring = SemiringTag::NNRAT;
    SemiringTag inner_semiring = SemiringTag::NNRAT;  // nested only
    /// Per state: label index -> nonzero continuation. Zero entries are implicit.
    std::vector<std::map<std::size_t, FinFn>> trans;

    const FinFn& at(std::size_t state, std::size_t label) const;
};

struct State {
    std::size_t id;
    std::string key;
    TermPtr term;  // null for models loaded from JSON
};

class ExploreError : public std::runtime_error {
  public:
    ExploreError(const std::string& msg, std::size_t frontier) : std::runtime_error(msg), frontier_(frontier) {}
    std::size_t frontier() const { return frontier_; }

  private:
    std::size_t frontier_;
};

class FutsModel {
  public:
    std::string language;
    std::vector<State> states;
    std::vector<Relation> relations;
    std::size_t init = 0;

    std::size_t size() const { return states.size(); }
    /// Id for a state key, or kNoBlock.
    std::size_t id_of(std::string_view key) const;
    std::size_t add_state(std::string key, TermPtr term);
    BlockLookup lookup(const std::vector<std::size_t>& block_of) const;

  private:
    std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr std::size_t kDefaultMaxStates = 10000;

/// Relation layout for a language. Action labels come from the alphabet of the model and `roots`.
std::vector<Relation> relation_layout(const Model& m, const std::vector<TermPtr>& roots = {});

FutsModel explore(const Model& m, std::size_t max_states = kDefaultMaxStates);
/// Explores from several roots; the first is the init state.
FutsModel explore(const Model& m, const std::vector<TermPtr>& roots, std::size_t max_states = kDefaultMaxStates);

enum class Format { Json, Dot };
std::string serialize(const FutsModel& f, Format fmt);
FutsModel deserialize(const std::string& json_text);

std::string fn_json_text(const FinFn& fn);

}  // namespace futs

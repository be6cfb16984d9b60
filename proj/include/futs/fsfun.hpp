#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "futs/semiring.hpp"

namespace futs {

class FinFn;

/// An argument of a finitely supported function: a canonical state key, or
/// (nested level) the canonical serialization of an inner function which is
/// carried alongside.
struct Key {
    std::string text;
    std::shared_ptr<const FinFn> inner;

    Key() = default;
    Key(std::string t) : text(std::move(t)) {}  // NOLINT: state keys convert implicitly
    Key(const char* t) : text(t) {}             // NOLINT
    static Key of(FinFn fn);
};

struct FnEntry {
    std::string key;
    SemiringValue value;
    std::shared_ptr<const FinFn> inner;
};

class FnError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A finitely supported function into a semiring, kept in canonical form:
/// entries sorted by key, no zero values.
class FinFn {
  public:
    explicit FinFn(SemiringTag tag = SemiringTag::NNRAT) : tag_(tag) {}

    SemiringTag tag() const { return tag_; }
    const std::vector<FnEntry>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    /// True when the arguments are inner functions.
    bool is_nested() const { return !entries_.empty() && entries_.front().inner != nullptr; }

    /// Canonical text, e.g. "[P->1/2, Q->1/2]"; nested functions nest the
    /// inner serializations as keys.
    const std::string& serialize() const { return text_; }

    friend bool operator==(const FinFn& a, const FinFn& b) { return a.tag_ == b.tag_ && a.text_ == b.text_; }

  private:
    friend FinFn ff_make(SemiringTag, std::vector<std::pair<Key, SemiringValue>>);
    void seal();

    SemiringTag tag_;
    std::vector<FnEntry> entries_;
    std::string text_ = "[]";
};

FinFn ff_make(SemiringTag tag, std::vector<std::pair<Key, SemiringValue>> pairs);
SemiringValue ff_eval(const FinFn& fn, std::string_view key);
FinFn ff_add(const FinFn& a, const FinFn& b);
SemiringValue ff_oplus(const FinFn& fn);
FinFn ff_dirac(SemiringTag tag, Key key);
FinFn ff_scale(const SemiringValue& r, const FinFn& fn);

/// Builds the composite argument for a pair of arguments; must be injective.
using KeyConstructor = std::function<Key(const FnEntry&, const FnEntry&)>;
FinFn ff_lift_injective(const KeyConstructor& ctor, const FinFn& a, const FinFn& b);

/// Zero-free per-block sums, ascending by block id.
using BlockSums = std::vector<std::pair<std::size_t, SemiringValue>>;
inline constexpr std::size_t kNoBlock = static_cast<std::size_t>(-1);
/// Maps a support key to its block id, or kNoBlock when the key is unknown.
using BlockLookup = std::function<std::size_t(std::string_view)>;

BlockSums ff_block_sums(const FinFn& fn, const BlockLookup& block_of);
std::string block_sums_text(const BlockSums& sums);

}  // namespace futs

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace futs {

enum class SemiringTag { BOOL, NNRAT, NATSET };

std::string_view tag_name(SemiringTag tag);
SemiringTag parse_tag(std::string_view name);

class SemiringError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using Rational = mpq_class;

/// Accepts "p/q" and decimals like "0.5"; the result is canonical.
Rational parse_rational(std::string_view text);
std::string rational_text(const Rational& q);

/// A finite set of naturals, or the TOP sentinel standing for all of N.
/// TOP only exists so that NATSET has a multiplicative identity.
class NatSet {
  public:
    NatSet() = default;
    explicit NatSet(std::vector<std::uint64_t> elems);
    static NatSet top();
    static NatSet singleton(std::uint64_t n) { return NatSet({n}); }

    bool is_top() const { return top_; }
    bool empty() const { return !top_ && elems_.empty(); }
    const std::vector<std::uint64_t>& elements() const { return elems_; }
    bool contains(std::uint64_t n) const;

    friend NatSet set_union(const NatSet& a, const NatSet& b);
    friend NatSet set_intersection(const NatSet& a, const NatSet& b);
    friend bool operator==(const NatSet& a, const NatSet& b) = default;

  private:
    bool top_ = false;
    std::vector<std::uint64_t> elems_;  // ascending, duplicate-free
};

/// A value of one of the three concrete semirings.
class SemiringValue {
  public:
    SemiringValue() : payload_(false) {}
    static SemiringValue boolean(bool b) { return SemiringValue(b); }
    static SemiringValue rational(Rational q);
    static SemiringValue natset(NatSet s) { return SemiringValue(std::move(s)); }

    static SemiringValue zero(SemiringTag tag);
    static SemiringValue one(SemiringTag tag);

    SemiringTag tag() const { return static_cast<SemiringTag>(payload_.index()); }
    bool is_zero() const;

    bool as_bool() const { return std::get<bool>(payload_); }
    const Rational& as_rational() const { return std::get<Rational>(payload_); }
    const NatSet& as_natset() const { return std::get<NatSet>(payload_); }

    /// Textual form as used in JSON, e.g. "3/2" or "{1,2,5}".
    std::string text() const;
    static SemiringValue parse(SemiringTag tag, std::string_view text);

    friend bool operator==(const SemiringValue& a, const SemiringValue& b);

  private:
    explicit SemiringValue(bool b) : payload_(b) {}
    explicit SemiringValue(Rational q) : payload_(std::move(q)) {}
    explicit SemiringValue(NatSet s) : payload_(std::move(s)) {}

    std::variant<bool, Rational, NatSet> payload_;
};

std::pair<SemiringValue, SemiringValue> sr_constants(SemiringTag tag);
SemiringValue sr_add(const SemiringValue& a, const SemiringValue& b);
SemiringValue sr_mul(const SemiringValue& a, const SemiringValue& b);

}  // namespace futs

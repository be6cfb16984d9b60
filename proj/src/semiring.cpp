#include "futs/semiring.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>

namespace futs {

std::string_view tag_name(SemiringTag tag) {
    switch (tag) {
    case SemiringTag::BOOL: return "BOOL";
    case SemiringTag::NNRAT: return "NNRAT";
    case SemiringTag::NATSET: return "NATSET";
    }
    return "?";
}

SemiringTag parse_tag(std::string_view name) {
    if (name == "BOOL") return SemiringTag::BOOL;
    if (name == "NNRAT") return SemiringTag::NNRAT;
    if (name == "NATSET") return SemiringTag::NATSET;
    throw SemiringError("unknown semiring tag '" + std::string(name) + "'");
}

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

[[noreturn]] void bad_rational(std::string_view text) {
    throw SemiringError("malformed rational '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = text.substr(0, slash), den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) bad_rational(text);
        Rational q(std::string(num) + "/" + std::string(den), 10);
        if (q.get_den() == 0) bad_rational(text);
        q.canonicalize();
        return q;
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto ip = text.substr(0, dot), fp = text.substr(dot + 1);
        if (!all_digits(ip) || !all_digits(fp)) bad_rational(text);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
        Rational q(mpz_class(std::string(ip) + std::string(fp), 10), den);
        q.canonicalize();
        return q;
    }
    if (!all_digits(text)) bad_rational(text);
    return Rational(mpz_class(std::string(text), 10));
}

std::string rational_text(const Rational& q) { return q.get_str(10); }

NatSet::NatSet(std::vector<std::uint64_t> elems) : elems_(std::move(elems)) {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

NatSet NatSet::top() {
    NatSet s;
    s.top_ = true;
    return s;
}

bool NatSet::contains(std::uint64_t n) const {
    return top_ || std::binary_search(elems_.begin(), elems_.end(), n);
}

NatSet set_union(const NatSet& a, const NatSet& b) {
    if (a.top_ || b.top_) return NatSet::top();
    NatSet r;
    std::set_union(a.elems_.begin(), a.elems_.end(), b.elems_.begin(), b.elems_.end(),
                   std::back_inserter(r.elems_));
    return r;
}

NatSet set_intersection(const NatSet& a, const NatSet& b) {
    if (a.top_) return b;
    if (b.top_) return a;
    NatSet r;
    std::set_intersection(a.elems_.begin(), a.elems_.end(), b.elems_.begin(), b.elems_.end(),
                          std::back_inserter(r.elems_));
    return r;
}

SemiringValue SemiringValue::rational(Rational q) {
    q.canonicalize();
    if (sgn(q) < 0) throw SemiringError("negative value " + rational_text(q) + " in NNRAT");
    return SemiringValue(std::move(q));
}

SemiringValue SemiringValue::zero(SemiringTag tag) {
    switch (tag) {
    case SemiringTag::BOOL: return boolean(false);
    case SemiringTag::NNRAT: return SemiringValue(Rational(0));
    case SemiringTag::NATSET: return natset(NatSet{});
    }
    throw SemiringError("bad tag");
}

SemiringValue SemiringValue::one(SemiringTag tag) {
    switch (tag) {
    case SemiringTag::BOOL: return boolean(true);
    case SemiringTag::NNRAT: return SemiringValue(Rational(1));
    case SemiringTag::NATSET: return natset(NatSet::top());
    }
    throw SemiringError("bad tag");
}

bool SemiringValue::is_zero() const {
    switch (tag()) {
    case SemiringTag::BOOL: return !as_bool();
    case SemiringTag::NNRAT: return sgn(as_rational()) == 0;
    case SemiringTag::NATSET: return as_natset().empty();
    }
    return false;
}

std::string SemiringValue::text() const {
    switch (tag()) {
    case SemiringTag::BOOL: return as_bool() ? "true" : "false";
    case SemiringTag::NNRAT: return rational_text(as_rational());
    case SemiringTag::NATSET: {
        const auto& s = as_natset();
        if (s.is_top()) return "TOP";
        std::string out = "{";
        for (std::size_t i = 0; i < s.elements().size(); ++i) {
            if (i) out += ',';
            out += std::to_string(s.elements()[i]);
        }
        return out + "}";
    }
    }
    return "?";
}

SemiringValue SemiringValue::parse(SemiringTag tag, std::string_view text) {
    switch (tag) {
    case SemiringTag::BOOL:
        if (text == "true") return boolean(true);
        if (text == "false") return boolean(false);
        throw SemiringError("malformed Boolean '" + std::string(text) + "'");
    case SemiringTag::NNRAT: return rational(parse_rational(text));
    case SemiringTag::NATSET: {
        if (text == "TOP") return natset(NatSet::top());
        if (text.size() < 2 || text.front() != '{' || text.back() != '}')
            throw SemiringError("malformed set '" + std::string(text) + "'");
        std::vector<std::uint64_t> elems;
        auto body = text.substr(1, text.size() - 2);
        while (!body.empty()) {
            auto comma = body.find(',');
            auto item = body.substr(0, comma);
            if (!all_digits(item)) throw SemiringError("malformed set '" + std::string(text) + "'");
            elems.push_back(std::stoull(std::string(item)));
            if (comma == std::string_view::npos) break;
            body.remove_prefix(comma + 1);
        }
        return natset(NatSet(std::move(elems)));
    }
    }
    throw SemiringError("bad tag");
}

bool operator==(const SemiringValue& a, const SemiringValue& b) { return a.payload_ == b.payload_; }

std::pair<SemiringValue, SemiringValue> sr_constants(SemiringTag tag) {
    return {SemiringValue::zero(tag), SemiringValue::one(tag)};
}

namespace {

void require_same(const SemiringValue& a, const SemiringValue& b) {
    if (a.tag() != b.tag())
        throw SemiringError("semiring mismatch: " + std::string(tag_name(a.tag())) + " vs " +
                            std::string(tag_name(b.tag())));
}

}  // namespace

SemiringValue sr_add(const SemiringValue& a, const SemiringValue& b) {
    require_same(a, b);
    switch (a.tag()) {
    case SemiringTag::BOOL: return SemiringValue::boolean(a.as_bool() || b.as_bool());
    case SemiringTag::NNRAT: return SemiringValue::rational(a.as_rational() + b.as_rational());
    case SemiringTag::NATSET: return SemiringValue::natset(set_union(a.as_natset(), b.as_natset()));
    }
    throw SemiringError("bad tag");
}

SemiringValue sr_mul(const SemiringValue& a, const SemiringValue& b) {
    require_same(a, b);
    switch (a.tag()) {
    case SemiringTag::BOOL: return SemiringValue::boolean(a.as_bool() && b.as_bool());
    case SemiringTag::NNRAT: return SemiringValue::rational(a.as_rational() * b.as_rational());
    case SemiringTag::NATSET:
        return SemiringValue::natset(set_intersection(a.as_natset(), b.as_natset()));
    }
    throw SemiringError("bad tag");
}

}  // namespace futs

#include "futs/fsfun.hpp"

#include <algorithm>
#include <map>

namespace futs {

Key Key::of(FinFn fn) {
    Key k;
    k.text = fn.serialize();
    k.inner = std::make_shared<const FinFn>(std::move(fn));
    return k;
}

void FinFn::seal() {
    text_ = "[";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) text_ += ", ";
        text_ += entries_[i].key;
        text_ += "->";
        text_ += entries_[i].value.text();
    }
    text_ += "]";
}

FinFn ff_make(SemiringTag tag, std::vector<std::pair<Key, SemiringValue>> pairs) {
    for (const auto& [k, v] : pairs)
        if (v.tag() != tag)
            throw FnError("value " + v.text() + " is not in semiring " + std::string(tag_name(tag)));
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& a, const auto& b) { return a.first.text < b.first.text; });
    FinFn fn(tag);
    for (auto& [k, v] : pairs) {
        if (!fn.entries_.empty() && fn.entries_.back().key == k.text) {
            fn.entries_.back().value = sr_add(fn.entries_.back().value, v);
        } else {
            fn.entries_.push_back(FnEntry{std::move(k.text), std::move(v), std::move(k.inner)});
        }
    }
    std::erase_if(fn.entries_, [](const FnEntry& e) { return e.value.is_zero(); });
    fn.seal();
    return fn;
}

SemiringValue ff_eval(const FinFn& fn, std::string_view key) {
    const auto& es = fn.entries();
    auto it = std::lower_bound(es.begin(), es.end(), key,
                               [](const FnEntry& e, std::string_view k) { return e.key < k; });
    if (it != es.end() && it->key == key) return it->value;
    return SemiringValue::zero(fn.tag());
}

namespace {

std::vector<std::pair<Key, SemiringValue>> as_pairs(const FinFn& fn) {
    std::vector<std::pair<Key, SemiringValue>> out;
    out.reserve(fn.size());
    for (const auto& e : fn.entries()) {
        Key k(e.key);
        k.inner = e.inner;
        out.emplace_back(std::move(k), e.value);
    }
    return out;
}

void require_same(const FinFn& a, const FinFn& b) {
    if (a.tag() != b.tag())
        throw SemiringError("semiring mismatch: " + std::string(tag_name(a.tag())) + " vs " +
                            std::string(tag_name(b.tag())));
}

}  // namespace

FinFn ff_add(const FinFn& a, const FinFn& b) {
    require_same(a, b);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    auto pairs = as_pairs(a);
    auto more = as_pairs(b);
    pairs.insert(pairs.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    return ff_make(a.tag(), std::move(pairs));
}

SemiringValue ff_oplus(const FinFn& fn) {
    auto total = SemiringValue::zero(fn.tag());
    for (const auto& e : fn.entries()) total = sr_add(total, e.value);
    return total;
}

FinFn ff_dirac(SemiringTag tag, Key key) {
    if (tag == SemiringTag::NATSET) throw FnError("no Dirac function over NATSET");
    std::vector<std::pair<Key, SemiringValue>> pairs;
    pairs.emplace_back(std::move(key), SemiringValue::one(tag));
    return ff_make(tag, std::move(pairs));
}

FinFn ff_scale(const SemiringValue& r, const FinFn& fn) {
    if (r.tag() != fn.tag()) throw SemiringError("semiring mismatch in scaling");
    auto pairs = as_pairs(fn);
    for (auto& [k, v] : pairs) v = sr_mul(r, v);
    return ff_make(fn.tag(), std::move(pairs));
}

FinFn ff_lift_injective(const KeyConstructor& ctor, const FinFn& a, const FinFn& b) {
    require_same(a, b);
    std::vector<std::pair<Key, SemiringValue>> pairs;
    pairs.reserve(a.size() * b.size());
    for (const auto& x : a.entries())
        for (const auto& y : b.entries()) pairs.emplace_back(ctor(x, y), sr_mul(x.value, y.value));
    return ff_make(a.tag(), std::move(pairs));
}

BlockSums ff_block_sums(const FinFn& fn, const BlockLookup& block_of) {
    std::map<std::size_t, SemiringValue> acc;
    for (const auto& e : fn.entries()) {
        auto b = block_of(e.key);
        if (b == kNoBlock) throw FnError("unknown state '" + e.key + "'");
        auto [it, fresh] = acc.try_emplace(b, e.value);
        if (!fresh) it->second = sr_add(it->second, e.value);
    }
    BlockSums out;
    for (auto& [b, v] : acc)
        if (!v.is_zero()) out.emplace_back(b, std::move(v));
    return out;
}

std::string block_sums_text(const BlockSums& sums) {
    std::string out = "{";
    for (std::size_t i = 0; i < sums.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(sums[i].first);
        out += ':';
        out += sums[i].second.text();
    }
    return out + "}";
}

}  // namespace futs

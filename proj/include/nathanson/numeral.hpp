#ifndef NATHANSON_NUMERAL_HPP
#define NATHANSON_NUMERAL_HPP

// Sparse binary numerals. A nonnegative integer is held as the set of
// positions of its one bits, so 2^100000 + 1 costs two words. Only the
// operations the constructions need are provided: carry-propagating
// addition, shifts, ordering and decimal I/O.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nathanson/error.hpp"

namespace nathanson
{

using Exponent = std::uint64_t;

/// Largest value (in bits) accepted by decimal conversion in either direction.
inline constexpr std::uint64_t kMaxDecimalBits = std::uint64_t{1} << 20;

/// Binary expansion of a nonnegative integer: strictly increasing bit
/// positions. The empty set is zero.
class ExponentSet
{
  public:
    ExponentSet() = default;

    /// Throws ParseError unless `exps` is strictly increasing.
    static ExponentSet from_sorted(std::vector<Exponent> exps)
    {
        for(std::size_t i = 1; i < exps.size(); ++i)
        {
            if(exps[i - 1] >= exps[i])
            {
                throw Error(ErrorCode::ParseError,
                            "exponent list is not strictly increasing at index " +
                                std::to_string(i));
            }
        }
        ExponentSet s;
        s.exps_ = std::move(exps);
        return s;
    }

    /// Sorts; duplicates are rejected since a set cannot hold them.
    static ExponentSet from_exponents(std::vector<Exponent> exps)
    {
        std::sort(exps.begin(), exps.end());
        return from_sorted(std::move(exps));
    }

    static ExponentSet power_of_two(Exponent e)
    {
        ExponentSet s;
        s.exps_.push_back(e);
        return s;
    }

    static ExponentSet from_u64(std::uint64_t v)
    {
        ExponentSet s;
        for(Exponent e = 0; v != 0; ++e, v >>= 1)
        {
            if(v & 1u) { s.exps_.push_back(e); }
        }
        return s;
    }

    std::span<const Exponent> exponents() const noexcept { return exps_; }
    const std::vector<Exponent>& vec() const noexcept { return exps_; }

    bool empty() const noexcept { return exps_.empty(); }
    std::size_t size() const noexcept { return exps_.size(); }
    Exponent lowest() const { return exps_.front(); }
    Exponent highest() const { return exps_.back(); }
    std::uint64_t bit_length() const noexcept { return exps_.empty() ? 0 : exps_.back() + 1; }

    bool contains(Exponent e) const
    {
        return std::binary_search(exps_.begin(), exps_.end(), e);
    }

    std::optional<std::uint64_t> to_u64() const
    {
        if(!exps_.empty() && exps_.back() >= 64) { return std::nullopt; }
        std::uint64_t v = 0;
        for(Exponent e : exps_) { v |= std::uint64_t{1} << e; }
        return v;
    }

    friend bool operator==(const ExponentSet&, const ExponentSet&) = default;

    /// Value ordering: decided by the highest differing exponent.
    friend std::strong_ordering operator<=>(const ExponentSet& a, const ExponentSet& b)
    {
        auto ia = a.exps_.rbegin();
        auto ib = b.exps_.rbegin();
        for(; ia != a.exps_.rend() && ib != b.exps_.rend(); ++ia, ++ib)
        {
            if(*ia != *ib) { return *ia <=> *ib; }
        }
        if(ia == a.exps_.rend() && ib == b.exps_.rend()) { return std::strong_ordering::equal; }
        return ia == a.exps_.rend() ? std::strong_ordering::less : std::strong_ordering::greater;
    }

  private:
    std::vector<Exponent> exps_;
};

/// Exponent -> multiplicity. Represents Σ mult(w)·2^w without normalizing.
class ExponentMultiset
{
  public:
    using Map = std::map<Exponent, std::uint64_t>;

    ExponentMultiset() = default;
    ExponentMultiset(std::initializer_list<std::pair<const Exponent, std::uint64_t>> init)
    {
        for(const auto& [e, m] : init) { add(e, m); }
    }

    static ExponentMultiset from_set(const ExponentSet& s)
    {
        ExponentMultiset m;
        for(Exponent e : s.exponents()) { m.add(e, 1); }
        return m;
    }

    void add(Exponent e, std::uint64_t count = 1)
    {
        if(count == 0) { return; }
        auto& slot = entries_[e];
        if(slot > UINT64_MAX - count)
        {
            throw Error(ErrorCode::InvalidConfig, "multiplicity overflow at exponent " + std::to_string(e));
        }
        slot += count;
    }

    /// Removes one copy; returns false if `e` is absent.
    bool remove_one(Exponent e)
    {
        auto it = entries_.find(e);
        if(it == entries_.end()) { return false; }
        if(--it->second == 0) { entries_.erase(it); }
        return true;
    }

    std::uint64_t multiplicity(Exponent e) const
    {
        auto it = entries_.find(e);
        return it == entries_.end() ? 0 : it->second;
    }

    bool contains(Exponent e) const { return entries_.count(e) != 0; }

    /// True if some exponent lies in [lo, hi].
    bool any_in(Exponent lo, Exponent hi) const
    {
        if(lo > hi) { return false; }
        auto it = entries_.lower_bound(lo);
        return it != entries_.end() && it->first <= hi;
    }

    const Map& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t distinct() const noexcept { return entries_.size(); }

    /// Number of terms counted with multiplicity.
    std::uint64_t total() const noexcept
    {
        std::uint64_t s = 0;
        for(const auto& kv : entries_) { s += kv.second; }
        return s;
    }

    std::uint64_t max_multiplicity() const noexcept
    {
        std::uint64_t m = 0;
        for(const auto& kv : entries_) { m = std::max(m, kv.second); }
        return m;
    }

    friend bool operator==(const ExponentMultiset&, const ExponentMultiset&) = default;

  private:
    Map entries_;
};

// ---------------------------------------------------------------------------
// Arithmetic

/// a + b by a single merge pass with a carry bit.
inline ExponentSet add(const ExponentSet& a, const ExponentSet& b)
{
    const auto& x = a.vec();
    const auto& y = b.vec();
    std::vector<Exponent> out;
    out.reserve(x.size() + y.size() + 1);
    std::size_t i = 0, j = 0;
    bool carry = false;
    Exponent carry_pos = 0;
    while(i < x.size() || j < y.size() || carry)
    {
        Exponent p;
        if(carry) { p = carry_pos; }
        else if(i == x.size()) { p = y[j]; }
        else if(j == y.size()) { p = x[i]; }
        else { p = std::min(x[i], y[j]); }

        unsigned bits = carry ? 1u : 0u;
        if(i < x.size() && x[i] == p) { ++bits; ++i; }
        if(j < y.size() && y[j] == p) { ++bits; ++j; }
        if(bits & 1u) { out.push_back(p); }
        carry = bits >= 2;
        carry_pos = p + 1;
    }
    return ExponentSet::from_sorted(std::move(out));
}

inline ExponentSet shift_up(const ExponentSet& s, Exponent by)
{
    std::vector<Exponent> out(s.vec());
    for(auto& e : out) { e += by; }
    return ExponentSet::from_sorted(std::move(out));
}

/// Divides by 2^by; every exponent must be at least `by`.
inline ExponentSet shift_down(const ExponentSet& s, Exponent by)
{
    std::vector<Exponent> out(s.vec());
    for(auto& e : out)
    {
        if(e < by) { throw Error(ErrorCode::ParseError, "shift_down would drop bit " + std::to_string(e)); }
        e -= by;
    }
    return ExponentSet::from_sorted(std::move(out));
}

/// Σ mult(w)·2^w, summed term by term: each entry contributes the binary
/// expansion of its multiplicity placed at w.
inline ExponentSet multiset_value(const ExponentMultiset& m)
{
    ExponentSet acc;
    for(const auto& [w, mult] : m.entries())
    {
        acc = add(acc, shift_up(ExponentSet::from_u64(mult), w));
    }
    return acc;
}

/// Carry normalization: resolves multiplicities into a plain binary
/// expansion in one ascending sweep.
inline ExponentSet canonicalize(const ExponentMultiset& m)
{
    std::vector<Exponent> out;
    const auto& entries = m.entries();
    auto it = entries.begin();
    unsigned __int128 carry = 0;
    Exponent p = 0;
    while(it != entries.end() || carry != 0)
    {
        if(carry == 0) { p = it->first; }
        unsigned __int128 c = carry;
        if(it != entries.end() && it->first == p)
        {
            c += it->second;
            ++it;
        }
        if(c & 1u) { out.push_back(p); }
        carry = c >> 1;
        ++p;
    }
    return ExponentSet::from_sorted(std::move(out));
}

inline ExponentSet to_exponent_set(std::uint64_t n) { return ExponentSet::from_u64(n); }

// ---------------------------------------------------------------------------
// Decimal conversion (quadratic; bounded by kMaxDecimalBits)

namespace detail
{
inline constexpr std::uint32_t kChunk = 1'000'000'000u;
inline constexpr std::size_t kChunkDigits = 9;
// ceil(2^20 * log10(2))
inline constexpr std::size_t kMaxDecimalDigits = 315653;

inline std::vector<std::uint32_t> to_limbs(const ExponentSet& s)
{
    std::vector<std::uint32_t> limbs(s.empty() ? 0 : s.highest() / 32 + 1, 0);
    for(Exponent e : s.exponents()) { limbs[e / 32] |= std::uint32_t{1} << (e % 32); }
    return limbs;
}

inline ExponentSet from_limbs(const std::vector<std::uint32_t>& limbs)
{
    std::vector<Exponent> out;
    for(std::size_t i = 0; i < limbs.size(); ++i)
    {
        for(unsigned b = 0; b < 32; ++b)
        {
            if((limbs[i] >> b) & 1u) { out.push_back(Exponent{i} * 32 + b); }
        }
    }
    return ExponentSet::from_sorted(std::move(out));
}
} // namespace detail

inline std::string to_decimal(const ExponentSet& s)
{
    if(s.bit_length() > kMaxDecimalBits)
    {
        throw Error(ErrorCode::DecimalTooLarge,
                    "value has " + std::to_string(s.bit_length()) + " bits; decimal output is limited to " +
                        std::to_string(kMaxDecimalBits));
    }
    if(s.empty()) { return "0"; }
    auto limbs = detail::to_limbs(s);
    std::vector<std::uint32_t> chunks;
    while(!limbs.empty())
    {
        std::uint64_t rem = 0;
        for(std::size_t i = limbs.size(); i-- > 0;)
        {
            const std::uint64_t cur = (rem << 32) | limbs[i];
            limbs[i] = static_cast<std::uint32_t>(cur / detail::kChunk);
            rem = cur % detail::kChunk;
        }
        chunks.push_back(static_cast<std::uint32_t>(rem));
        while(!limbs.empty() && limbs.back() == 0) { limbs.pop_back(); }
    }
    std::string out = std::to_string(chunks.back());
    for(std::size_t i = chunks.size() - 1; i-- > 0;)
    {
        std::string part = std::to_string(chunks[i]);
        out.append(detail::kChunkDigits - part.size(), '0');
        out += part;
    }
    return out;
}

/// Parses a nonnegative decimal integer (digits only, no sign or spaces).
inline ExponentSet from_decimal(std::string_view text)
{
    if(text.empty()) { throw Error(ErrorCode::ParseError, "empty decimal string"); }
    for(char c : text)
    {
        if(c < '0' || c > '9')
        {
            throw Error(ErrorCode::ParseError, "invalid decimal digit '" + std::string(1, c) + "'");
        }
    }
    while(text.size() > 1 && text.front() == '0') { text.remove_prefix(1); }
    if(text.size() > detail::kMaxDecimalDigits)
    {
        throw Error(ErrorCode::DecimalTooLarge, "decimal input exceeds " +
                                                    std::to_string(detail::kMaxDecimalDigits) + " digits");
    }
    std::vector<std::uint32_t> limbs;
    auto mul_add = [&limbs](std::uint32_t mul, std::uint32_t addend) {
        std::uint64_t carry = addend;
        for(auto& l : limbs)
        {
            const std::uint64_t cur = std::uint64_t{l} * mul + carry;
            l = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if(carry != 0) { limbs.push_back(static_cast<std::uint32_t>(carry)); }
    };
    std::size_t head = text.size() % detail::kChunkDigits;
    if(head == 0) { head = detail::kChunkDigits; }
    std::size_t pos = 0;
    while(pos < text.size())
    {
        const std::size_t len = pos == 0 ? head : detail::kChunkDigits;
        std::uint32_t chunk = 0, mul = 1;
        for(std::size_t k = 0; k < len; ++k)
        {
            chunk = chunk * 10 + static_cast<std::uint32_t>(text[pos + k] - '0');
            mul *= 10;
        }
        mul_add(mul, chunk);
        pos += len;
    }
    ExponentSet s = detail::from_limbs(limbs);
    if(s.bit_length() > kMaxDecimalBits)
    {
        throw Error(ErrorCode::DecimalTooLarge, "decimal input exceeds 2^20 bits");
    }
    return s;
}

// ---------------------------------------------------------------------------
// Text formats

/// "0,2,3": ascending, comma separated, no spaces.
inline std::string format_exponent_list(const ExponentSet& s)
{
    std::string out;
    for(std::size_t i = 0; i < s.size(); ++i)
    {
        if(i != 0) { out += ','; }
        out += std::to_string(s.vec()[i]);
    }
    return out;
}

inline ExponentSet parse_exponent_list(std::string_view text)
{
    std::vector<Exponent> exps;
    if(text.empty()) { return ExponentSet{}; }
    std::size_t pos = 0;
    while(true)
    {
        const std::size_t comma = text.find(',', pos);
        const std::string_view tok = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        if(tok.empty() || tok.size() > 20 || (tok.size() > 1 && tok.front() == '0'))
        {
            throw Error(ErrorCode::ParseError, "bad exponent token '" + std::string(tok) + "'");
        }
        Exponent v = 0;
        for(char c : tok)
        {
            if(c < '0' || c > '9') { throw Error(ErrorCode::ParseError, "bad exponent token '" + std::string(tok) + "'"); }
            const Exponent d = static_cast<Exponent>(c - '0');
            if(v > (UINT64_MAX - d) / 10) { throw Error(ErrorCode::ParseError, "exponent overflows 64 bits"); }
            v = v * 10 + d;
        }
        exps.push_back(v);
        if(comma == std::string_view::npos) { break; }
        pos = comma + 1;
    }
    return ExponentSet::from_sorted(std::move(exps));
}

/// "exp:[0,2,3]"
inline std::string format_value_exp(const ExponentSet& s) { return "exp:[" + format_exponent_list(s) + "]"; }

/// Accepts either a decimal string or "exp:[...]".
inline ExponentSet parse_value(std::string_view text)
{
    constexpr std::string_view prefix = "exp:[";
    if(text.substr(0, prefix.size()) == prefix)
    {
        if(text.back() != ']') { throw Error(ErrorCode::ParseError, "exponent value must end with ']'"); }
        return parse_exponent_list(text.substr(prefix.size(), text.size() - prefix.size() - 1));
    }
    return from_decimal(text);
}

} // namespace nathanson
#endif // NATHANSON_NUMERAL_HPP

#ifndef NATHANSON_PARTITION_HPP
#define NATHANSON_PARTITION_HPP

// The interval partition N = W_0 ∪ W_1 ∪ ... ∪ W_{h-1}.
//
// Given boundaries m_1 < m_2 < ..., W_0 is [0, m_1] together with every
// [m_i + t + 1, m_{i+1}], and the short block [m_i + 1, m_i + t] belongs to
// class ((i - 1) mod (h - 1)) + 1. A periodic block pattern is also
// accepted for small-scale experiments (GenericLab only).

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nathanson/error.hpp"

namespace nathanson
{

struct ClassIndex
{
    std::uint32_t value = 0;

    friend auto operator<=>(const ClassIndex&, const ClassIndex&) = default;
};

/// m_i = first + (i - 1) * step
struct ArithmeticRule
{
    std::uint64_t first = 0;
    std::uint64_t step = 0;

    friend bool operator==(const ArithmeticRule&, const ArithmeticRule&) = default;
};

/// m_1..m_k listed, then continued by tail_step.
struct ExplicitRule
{
    std::vector<std::uint64_t> values;
    std::uint64_t tail_step = 0;

    friend bool operator==(const ExplicitRule&, const ExplicitRule&) = default;
};

/// Periodic sequence of (class, length) blocks tiling N from 0.
struct BlockPatternRule
{
    struct Block
    {
        std::uint32_t cls = 0;
        std::uint64_t length = 0;

        friend bool operator==(const Block&, const Block&) = default;
    };
    std::vector<Block> blocks;

    friend bool operator==(const BlockPatternRule&, const BlockPatternRule&) = default;
};

using MRule = std::variant<ArithmeticRule, ExplicitRule, BlockPatternRule>;

enum class Mode
{
    Case1,
    Case2,
    GenericLab,
};

inline constexpr std::string_view to_string(Mode m) noexcept
{
    switch(m)
    {
        case Mode::Case1:      return "case1";
        case Mode::Case2:      return "case2";
        case Mode::GenericLab: return "generic_lab";
    }
    return "?";
}

inline Mode mode_from_string(std::string_view s)
{
    if(s == "case1") { return Mode::Case1; }
    if(s == "case2") { return Mode::Case2; }
    if(s == "generic_lab") { return Mode::GenericLab; }
    throw Error(ErrorCode::InvalidConfig, "unknown mode '" + std::string(s) + "'");
}

struct PartitionConfig
{
    std::uint32_t h = 0;
    std::uint32_t t = 0;
    MRule m_rule = ArithmeticRule{};
    bool strict = false;
    Mode mode = Mode::GenericLab;

    friend bool operator==(const PartitionConfig&, const PartitionConfig&) = default;
};

struct ConfigViolation
{
    ErrorCode code;
    std::string constraint;
    std::string detail;
};

namespace detail
{
/// 2^e, or nullopt-like sentinel 0 when it does not fit in 64 bits.
inline std::uint64_t pow2_or_zero(std::uint64_t e) { return e < 64 ? std::uint64_t{1} << e : 0; }

inline std::string u(std::uint64_t v) { return std::to_string(v); }
} // namespace detail

/// Every violated constraint of `cfg`; empty means valid.
inline std::vector<ConfigViolation> config_violations(const PartitionConfig& cfg)
{
    using detail::u;
    std::vector<ConfigViolation> out;
    auto bad = [&out](ErrorCode c, std::string constraint, std::string detail) {
        out.push_back({c, std::move(constraint), std::move(detail)});
    };

    if(cfg.h < 2) { bad(ErrorCode::InvalidConfig, "h >= 2", "h = " + u(cfg.h)); }
    if(cfg.t < 1) { bad(ErrorCode::InvalidConfig, "t >= 1", "t = " + u(cfg.t)); }
    if(!out.empty()) { return out; }

    // 2^t against h; t >= 32 exceeds any representable h.
    const std::uint64_t two_t = detail::pow2_or_zero(cfg.t);
    const bool two_t_huge = cfg.t >= 32;
    if(cfg.mode == Mode::Case1 && (two_t_huge || cfg.h <= two_t))
    {
        bad(ErrorCode::ModeMismatch, "case1 requires h > 2^t", "h = " + u(cfg.h) + ", t = " + u(cfg.t));
    }
    if(cfg.mode == Mode::Case2 && (two_t_huge || cfg.h != two_t))
    {
        bad(ErrorCode::ModeMismatch, "case2 requires h = 2^t", "h = " + u(cfg.h) + ", t = " + u(cfg.t));
    }

    const std::uint64_t bound = detail::pow2_or_zero(std::uint64_t{cfg.h} + 4); // 0: exceeds 64 bits
    auto check_strict_first = [&](std::uint64_t m1) {
        if(bound == 0 || m1 <= bound)
        {
            bad(ErrorCode::StrictViolation, "m_1 > 2^(h+4)",
                "m_1 = " + u(m1) + ", 2^(h+4) = 2^" + u(std::uint64_t{cfg.h} + 4));
        }
    };
    auto check_strict_gap = [&](std::uint64_t gap, const std::string& where) {
        if(bound == 0 || gap <= bound)
        {
            bad(ErrorCode::StrictViolation, "m_{i+1} - m_i > 2^(h+4)",
                where + " gap = " + u(gap) + ", 2^(h+4) = 2^" + u(std::uint64_t{cfg.h} + 4));
        }
    };

    if(cfg.strict && cfg.t < 2) { bad(ErrorCode::StrictViolation, "t >= 2", "t = " + u(cfg.t)); }

    if(const auto* a = std::get_if<ArithmeticRule>(&cfg.m_rule))
    {
        if(a->step <= cfg.t)
        {
            bad(ErrorCode::InvalidConfig, "step > t", "step = " + u(a->step) + ", t = " + u(cfg.t));
        }
        if(cfg.strict)
        {
            check_strict_first(a->first);
            check_strict_gap(a->step, "arithmetic step");
        }
    }
    else if(const auto* e = std::get_if<ExplicitRule>(&cfg.m_rule))
    {
        if(e->values.empty())
        {
            bad(ErrorCode::InvalidConfig, "explicit values nonempty", "no values given");
        }
        else
        {
            for(std::size_t i = 1; i < e->values.size(); ++i)
            {
                if(e->values[i] <= e->values[i - 1] || e->values[i] - e->values[i - 1] <= cfg.t)
                {
                    bad(ErrorCode::InvalidConfig, "m_{i+1} - m_i > t",
                        "m_" + u(i) + " = " + u(e->values[i - 1]) + ", m_" + u(i + 1) + " = " + u(e->values[i]));
                }
                else if(cfg.strict)
                {
                    check_strict_gap(e->values[i] - e->values[i - 1], "m_" + u(i) + "..m_" + u(i + 1));
                }
            }
            if(cfg.strict) { check_strict_first(e->values.front()); }
        }
        if(e->tail_step <= cfg.t)
        {
            bad(ErrorCode::InvalidConfig, "tail_step > t", "tail_step = " + u(e->tail_step));
        }
        else if(cfg.strict)
        {
            check_strict_gap(e->tail_step, "tail_step");
        }
    }
    else
    {
        const auto& b = std::get<BlockPatternRule>(cfg.m_rule);
        if(cfg.mode != Mode::GenericLab)
        {
            bad(ErrorCode::InvalidConfig, "block patterns require generic_lab mode",
                "mode = " + std::string(to_string(cfg.mode)));
        }
        if(cfg.strict)
        {
            bad(ErrorCode::StrictViolation, "block patterns cannot be strict", "strict = true");
        }
        if(b.blocks.empty()) { bad(ErrorCode::InvalidConfig, "blocks nonempty", "no blocks given"); }
        for(std::size_t i = 0; i < b.blocks.size(); ++i)
        {
            if(b.blocks[i].length == 0)
            {
                bad(ErrorCode::InvalidConfig, "block length >= 1", "block " + u(i) + " has length 0");
            }
            if(b.blocks[i].cls >= cfg.h)
            {
                bad(ErrorCode::InvalidConfig, "block class < h",
                    "block " + u(i) + " has class " + u(b.blocks[i].cls));
            }
        }
    }
    return out;
}

/// A validated configuration with closed-form membership queries.
class Partition
{
  public:
    /// Throws the first violation's code, with every violation in the message.
    explicit Partition(PartitionConfig cfg) : cfg_(std::move(cfg))
    {
        const auto violations = config_violations(cfg_);
        if(!violations.empty())
        {
            std::string msg;
            for(const auto& v : violations)
            {
                if(!msg.empty()) { msg += "; "; }
                msg += std::string(to_string(v.code)) + " [" + v.constraint + "] " + v.detail;
            }
            throw Error(violations.front().code, msg);
        }
        if(const auto* b = std::get_if<BlockPatternRule>(&cfg_.m_rule))
        {
            std::uint64_t acc = 0;
            for(const auto& blk : b->blocks)
            {
                block_starts_.push_back(acc);
                acc += blk.length;
            }
            period_ = acc;
        }
    }

    const PartitionConfig& config() const noexcept { return cfg_; }
    std::uint32_t h() const noexcept { return cfg_.h; }
    std::uint32_t t() const noexcept { return cfg_.t; }
    bool strict() const noexcept { return cfg_.strict; }
    Mode mode() const noexcept { return cfg_.mode; }
    bool is_block_pattern() const noexcept { return std::holds_alternative<BlockPatternRule>(cfg_.m_rule); }

    /// m_i for i >= 1 (saturates at UINT64_MAX). Not meaningful for block patterns.
    std::uint64_t m(std::uint64_t i) const
    {
        if(const auto* a = std::get_if<ArithmeticRule>(&cfg_.m_rule))
        {
            return sat_add(a->first, sat_mul(i - 1, a->step));
        }
        const auto& e = std::get<ExplicitRule>(cfg_.m_rule);
        if(i <= e.values.size()) { return e.values[i - 1]; }
        return sat_add(e.values.back(), sat_mul(i - e.values.size(), e.tail_step));
    }

    ClassIndex classify(std::uint64_t w) const
    {
        if(is_block_pattern())
        {
            return ClassIndex{pattern_block(w).cls};
        }
        const std::uint64_t i = locate(w);
        if(i == 0) { return ClassIndex{0}; }
        if(w - m(i) <= cfg_.t)
        {
            return ClassIndex{static_cast<std::uint32_t>((i - 1) % (cfg_.h - 1) + 1)};
        }
        return ClassIndex{0};
    }

    bool in_w0(std::uint64_t w) const { return classify(w).value == 0; }

    /// Last integer of the segment containing w (a W_0 run or a single block).
    std::uint64_t segment_end(std::uint64_t w) const
    {
        if(is_block_pattern())
        {
            const std::uint64_t base = w - w % period_;
            const std::size_t k = pattern_index(w % period_);
            const auto& b = std::get<BlockPatternRule>(cfg_.m_rule);
            return sat_add(base, block_starts_[k] + b.blocks[k].length - 1);
        }
        const std::uint64_t i = locate(w);
        if(i != 0 && w - m(i) <= cfg_.t) { return m(i) + cfg_.t; }
        return m(i + 1);
    }

    /// w - t, which lies in W_0 for every w outside W_0 of a strict config.
    std::uint64_t shift_into_w0(std::uint64_t w) const
    {
        if(in_w0(w)) { throw Error(ErrorCode::NotOutsideW0, std::to_string(w) + " already lies in W_0"); }
        if(!cfg_.strict) { throw Error(ErrorCode::NotStrict, "shift_into_w0 requires a strict config"); }
        const std::uint64_t shifted = w - cfg_.t;
        if(!in_w0(shifted))
        {
            throw Error(ErrorCode::StrictViolation, "shift of " + std::to_string(w) + " left W_0");
        }
        return shifted;
    }

    struct Interval
    {
        std::uint64_t lo;
        std::uint64_t hi;

        friend bool operator==(const Interval&, const Interval&) = default;
    };

    /// W_j ∩ [0, upto] as sorted, disjoint, maximal intervals.
    std::vector<Interval> intervals(ClassIndex j, std::uint64_t upto) const
    {
        std::vector<Interval> out;
        std::uint64_t w = 0;
        while(true)
        {
            const std::uint64_t e = std::min(segment_end(w), upto);
            if(classify(w) == j)
            {
                if(!out.empty() && out.back().hi + 1 == w) { out.back().hi = e; }
                else { out.push_back({w, e}); }
            }
            if(e >= upto) { break; }
            w = e + 1;
        }
        return out;
    }

    std::vector<Interval> w0_intervals(std::uint64_t upto) const { return intervals(ClassIndex{0}, upto); }

  private:
    static std::uint64_t sat_add(std::uint64_t a, std::uint64_t b)
    {
        return a > UINT64_MAX - b ? UINT64_MAX : a + b;
    }
    static std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b)
    {
        if(a != 0 && b > UINT64_MAX / a) { return UINT64_MAX; }
        return a * b;
    }

    /// Largest i with m_i < w, or 0 when w <= m_1.
    std::uint64_t locate(std::uint64_t w) const
    {
        if(const auto* a = std::get_if<ArithmeticRule>(&cfg_.m_rule))
        {
            if(w <= a->first) { return 0; }
            return (w - a->first - 1) / a->step + 1;
        }
        const auto& e = std::get<ExplicitRule>(cfg_.m_rule);
        const auto below = static_cast<std::uint64_t>(
            std::lower_bound(e.values.begin(), e.values.end(), w) - e.values.begin());
        if(below < e.values.size()) { return below; }
        return e.values.size() + (w - e.values.back() - 1) / e.tail_step;
    }

    std::size_t pattern_index(std::uint64_t r) const
    {
        auto it = std::upper_bound(block_starts_.begin(), block_starts_.end(), r);
        return static_cast<std::size_t>(it - block_starts_.begin()) - 1;
    }

    const BlockPatternRule::Block& pattern_block(std::uint64_t w) const
    {
        return std::get<BlockPatternRule>(cfg_.m_rule).blocks[pattern_index(w % period_)];
    }

    PartitionConfig cfg_;
    std::vector<std::uint64_t> block_starts_;
    std::uint64_t period_ = 0;
};

/// Returns the validated partition; throws on the first violated constraint.
inline Partition validate_config(const PartitionConfig& cfg) { return Partition(cfg); }

} // namespace nathanson
#endif // NATHANSON_PARTITION_HPP

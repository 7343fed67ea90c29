#ifndef NATHANSON_SPLITTER_HPP
#define NATHANSON_SPLITTER_HPP

// Decomposition for h > 2^t: rewrite the binary expansion of n as a sum of
// powers 2^w with every w in W_0, each power used at most 2^t + 1 times and
// no gap wider than 2t + 1 between consecutive exponents. Such a sum with at
// least h terms splits into h elements of A(W_0).

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nathanson/certificate.hpp"
#include "nathanson/numeral.hpp"
#include "nathanson/partition.hpp"

namespace nathanson
{

enum class SplitRule : std::uint8_t
{
    InitialShift,
    RuleA,
    RuleB,
};

inline constexpr std::string_view to_string(SplitRule r) noexcept
{
    switch(r)
    {
        case SplitRule::InitialShift: return "initial_shift";
        case SplitRule::RuleA:        return "rule_a";
        case SplitRule::RuleB:        return "rule_b";
    }
    return "?";
}

struct SplitStep
{
    SplitRule rule;
    Exponent w;

    friend bool operator==(const SplitStep&, const SplitStep&) = default;
};

struct SplitState
{
    ExponentMultiset terms;
    std::vector<SplitStep> trace;
    std::uint64_t steps = 0;
    bool keep_trace = true;

    void record(SplitRule rule, Exponent w)
    {
        ++steps;
        if(keep_trace) { trace.push_back({rule, w}); }
    }
};

struct SplitResult
{
    ExponentMultiset final_terms;
    std::uint64_t s = 0;              ///< term count with multiplicity
    std::uint64_t max_multiplicity = 0;
    std::vector<std::uint64_t> gaps;  ///< consecutive distinct exponents, starting from 0
    std::uint64_t steps = 0;          ///< rule applications, initial shifts included
    std::vector<SplitStep> trace;

    std::uint64_t max_gap() const
    {
        std::uint64_t g = 0;
        for(auto x : gaps) { g = std::max(g, x); }
        return g;
    }
};

struct SplitOptions
{
    bool keep_trace = false;
};

namespace detail
{
inline void require_case1(const Partition& p)
{
    if(!p.strict()) { throw Error(ErrorCode::NotStrict, "case-1 decomposition requires a strict config"); }
    if(p.mode() != Mode::Case1) { throw Error(ErrorCode::WrongMode, "config mode is not case1"); }
}

inline std::uint64_t two_pow_t(const Partition& p) { return std::uint64_t{1} << p.t(); }
} // namespace detail

/// Replaces each 2^f with f outside W_0 by 2^t copies of 2^(f-t).
inline SplitState initial_shift(const Partition& p, const ExponentSet& bits, bool keep_trace = false)
{
    detail::require_case1(p);
    SplitState st;
    st.keep_trace = keep_trace;
    for(Exponent f : bits.exponents())
    {
        if(p.in_w0(f)) { st.terms.add(f, 1); }
        else
        {
            st.terms.add(p.shift_into_w0(f), detail::two_pow_t(p));
            st.record(SplitRule::InitialShift, f);
        }
    }
    return st;
}

/// Largest w > 2t+1 present with no exponent in [w-2t-1, w-1].
inline std::optional<Exponent> find_splittable(const Partition& p, const SplitState& st)
{
    const std::uint64_t window = 2 * std::uint64_t{p.t()} + 1;
    const auto& entries = st.terms.entries();
    for(auto it = entries.rbegin(); it != entries.rend(); ++it)
    {
        const Exponent w = it->first;
        if(w <= window) { break; }
        if(!st.terms.any_in(w - window, w - 1)) { return w; }
    }
    return std::nullopt;
}

/// Terms that replace one 2^w under rule (b):
/// (2^t+1)·(2^(w-t-1) + ... + 2^(w-2t)) + 2·2^(w-2t-1).
inline ExponentMultiset rule_b_terms(std::uint32_t t, Exponent w)
{
    ExponentMultiset m;
    const std::uint64_t heavy = (std::uint64_t{1} << t) + 1;
    for(std::uint64_t i = 1; i <= t; ++i) { m.add(w - t - i, heavy); }
    m.add(w - 2 * std::uint64_t{t} - 1, 2);
    return m;
}

/// Splits one copy of 2^w: rule (a) if w-1 ∈ W_0, else rule (b).
inline void apply_split(const Partition& p, SplitState& st, Exponent w)
{
    const std::uint64_t t = p.t();
    if(w == 0 || !st.terms.contains(w))
    {
        throw Error(ErrorCode::InvalidConfig, "exponent " + std::to_string(w) + " is not splittable");
    }
    if(p.in_w0(w - 1))
    {
        st.terms.remove_one(w);
        st.terms.add(w - 1, 2);
        st.record(SplitRule::RuleA, w);
        return;
    }
    if(w < 2 * t + 1)
    {
        throw Error(ErrorCode::RuleBMembershipViolation, "rule (b) needs w >= 2t + 1, got " + std::to_string(w));
    }
    for(std::uint64_t i = 1; i <= t + 1; ++i)
    {
        if(!p.in_w0(w - t - i))
        {
            throw Error(ErrorCode::RuleBMembershipViolation,
                        "rule (b) at w = " + std::to_string(w) + ": " + std::to_string(w - t - i) +
                            " is outside W_0");
        }
    }
    st.terms.remove_one(w);
    const ExponentMultiset replacement = rule_b_terms(p.t(), w);
    for(const auto& [e, m] : replacement.entries()) { st.terms.add(e, m); }
    st.record(SplitRule::RuleB, w);
}

namespace detail
{
struct NoObserver
{
    void operator()(const SplitState&) const noexcept {}
};

inline SplitResult summarize(SplitState&& st)
{
    SplitResult r;
    r.s = st.terms.total();
    r.max_multiplicity = st.terms.max_multiplicity();
    std::uint64_t prev = 0;
    for(const auto& kv : st.terms.entries())
    {
        r.gaps.push_back(kv.first - prev);
        prev = kv.first;
    }
    r.steps = st.steps;
    r.trace = std::move(st.trace);
    r.final_terms = std::move(st.terms);
    return r;
}
} // namespace detail

/// Runs the splitting procedure to its fixed point. `observe` sees the state
/// after the initial shift and after every rule application.
template<class Observer = detail::NoObserver>
SplitResult run_split(const Partition& p, const ExponentSet& n, SplitOptions opts = {},
                      Observer&& observe = Observer{})
{
    detail::require_case1(p);
    if(n.empty()) { throw Error(ErrorCode::TooFewTerms, "n must be positive"); }
    SplitState st = initial_shift(p, n, opts.keep_trace);
    observe(std::as_const(st));
    while(auto w = find_splittable(p, st))
    {
        apply_split(p, st, *w);
        observe(std::as_const(st));
    }
    return detail::summarize(std::move(st));
}

/// h · 2^(h(2t+1)), above which the decomposition always has s >= h.
inline ExponentSet case1_threshold(const Partition& p)
{
    const std::uint64_t h = p.h();
    return shift_up(ExponentSet::from_u64(h), h * (2 * std::uint64_t{p.t()} + 1));
}

/// Deals the terms, sorted descending, round-robin into h parts. Copies of
/// one exponent are adjacent and number at most h, so each part gets
/// distinct exponents.
inline std::vector<ExponentSet> distribute(std::uint32_t h, const ExponentMultiset& terms)
{
    const std::uint64_t s = terms.total();
    if(s < h)
    {
        throw Error(ErrorCode::TooFewTerms,
                    "decomposition has " + std::to_string(s) + " terms, fewer than h = " + std::to_string(h));
    }
    if(terms.max_multiplicity() > h)
    {
        throw Error(ErrorCode::InvalidConfig, "a term repeats more than h times");
    }
    std::vector<std::vector<Exponent>> parts(h);
    std::uint64_t k = 0;
    const auto& entries = terms.entries();
    for(auto it = entries.rbegin(); it != entries.rend(); ++it)
    {
        for(std::uint64_t c = 0; c < it->second; ++c, ++k) { parts[k % h].push_back(it->first); }
    }
    std::vector<ExponentSet> out;
    out.reserve(h);
    for(auto& part : parts)
    {
        std::reverse(part.begin(), part.end());
        out.push_back(ExponentSet::from_sorted(std::move(part)));
    }
    return out;
}

inline std::vector<ExponentSet> distribute(const Partition& p, const SplitResult& r)
{
    return distribute(p.h(), r.final_terms);
}

/// 64-bit FNV-1a over (rule, w) pairs.
inline std::string trace_digest(const std::vector<SplitStep>& trace)
{
    std::uint64_t hash = 0xcbf29ce484222325ull;
    auto mix = [&hash](std::uint8_t byte) {
        hash ^= byte;
        hash *= 0x100000001b3ull;
    };
    for(const auto& step : trace)
    {
        mix(static_cast<std::uint8_t>(step.rule));
        for(int b = 0; b < 8; ++b) { mix(static_cast<std::uint8_t>(step.w >> (8 * b))); }
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

/// Certificate that n ∈ hA(W_0). Guaranteed for n >= case1_threshold;
/// below it the run may end with fewer than h terms (TooFewTerms).
inline RepresentationCertificate represent_case1(const Partition& p, const ExponentSet& n, SplitOptions opts = {},
                                                 SplitResult* result_out = nullptr)
{
    SplitResult r = run_split(p, n, opts);
    if(n >= case1_threshold(p))
    {
        const std::uint64_t bound = std::uint64_t{p.h()} * (2 * std::uint64_t{p.t()} + 1);
        const Exponent top = r.final_terms.entries().rbegin()->first;
        if(r.s < p.h() || top < bound)
        {
            throw Error(ErrorCode::TooFewTerms, "above-threshold run violated s >= h or w_s >= h(2t+1)");
        }
    }
    auto parts = distribute(p, r);
    RepresentationCertificate cert;
    cert.config = p.config();
    cert.n = n;
    cert.case_tag = std::string(case_tag::kCase1);
    for(const auto& part : parts) { cert.parts.push_back(CertificatePart{ClassIndex{0}, part.vec()}); }
    if(opts.keep_trace) { cert.trace_digest = trace_digest(r.trace); }
    if(result_out != nullptr) { *result_out = std::move(r); }
    return cert;
}

} // namespace nathanson
#endif // NATHANSON_SPLITTER_HPP

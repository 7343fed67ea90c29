#ifndef NATHANSON_AVOID4_HPP
#define NATHANSON_AVOID4_HPP

// Decomposition for h = 2^t: every n > m_2 is written as a sum of h
// elements of A, none of them equal to 4. The subcase is chosen from how
// the bits of n meet W_0.
//
// Notation below: F = bits of n, F0 = F ∩ W_0, Fout = F \ W_0.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nathanson/basis.hpp"
#include "nathanson/certificate.hpp"
#include "nathanson/numeral.hpp"
#include "nathanson/partition.hpp"

namespace nathanson
{

enum class SubcaseTag
{
    UniformShift,
    S211,
    S212,
    S213_k1,
    S213_rest_ok,
    S213_chain_merge,
    S22,
};

inline constexpr SubcaseTag kAllSubcaseTags[] = {
    SubcaseTag::UniformShift, SubcaseTag::S211,         SubcaseTag::S212, SubcaseTag::S213_k1,
    SubcaseTag::S213_rest_ok, SubcaseTag::S213_chain_merge, SubcaseTag::S22,
};

inline constexpr std::string_view to_string(SubcaseTag t) noexcept
{
    switch(t)
    {
        case SubcaseTag::UniformShift:     return "uniform_shift";
        case SubcaseTag::S211:             return "s211";
        case SubcaseTag::S212:             return "s212";
        case SubcaseTag::S213_k1:          return "s213_k1";
        case SubcaseTag::S213_rest_ok:     return "s213_rest_ok";
        case SubcaseTag::S213_chain_merge: return "s213_chain_merge";
        case SubcaseTag::S22:              return "s22";
    }
    return "?";
}

inline std::string case2_tag(SubcaseTag t) { return std::string(case_tag::kCase2Prefix) + std::string(to_string(t)); }

/// A place where the published branch formula does not yield a member of A;
/// reported in paper-faithful mode.
struct Divergence
{
    SubcaseTag subcase;
    std::size_t part;
    std::vector<Exponent> exponents;
    std::string check;
    std::string detail;
};

struct Avoid4Options
{
    /// Use the published g_1 = 2 formula whenever it verifies and report
    /// it as a Divergence when it does not.
    bool paper_faithful = false;
};

struct Avoid4Outcome
{
    RepresentationCertificate certificate;
    SubcaseTag tag;
    std::vector<Divergence> divergences;
};

namespace detail
{
struct BitSplit
{
    std::vector<Exponent> in_w0;   // ascending
    std::vector<Exponent> outside; // ascending
};

inline BitSplit split_bits(const Partition& p, const ExponentSet& n)
{
    BitSplit b;
    for(Exponent e : n.exponents()) { (p.in_w0(e) ? b.in_w0 : b.outside).push_back(e); }
    return b;
}

inline void require_case2(const Partition& p, const ExponentSet& n)
{
    if(!p.strict()) { throw Error(ErrorCode::NotStrict, "avoid-4 decomposition requires a strict config"); }
    if(p.mode() != Mode::Case2) { throw Error(ErrorCode::WrongMode, "config mode is not case2"); }
    const std::uint64_t m2 = p.m(2);
    if(n <= ExponentSet::from_u64(m2))
    {
        throw Error(ErrorCode::BelowGuarantee, "n <= m_2 = " + std::to_string(m2));
    }
}

inline RepresentationCertificate new_cert(const Partition& p, const ExponentSet& n, SubcaseTag tag)
{
    RepresentationCertificate c;
    c.config = p.config();
    c.n = n;
    c.case_tag = case2_tag(tag);
    return c;
}

inline void push(const Partition& p, RepresentationCertificate& c, std::vector<Exponent> exps)
{
    std::sort(exps.begin(), exps.end());
    c.parts.push_back(make_part(p, ExponentSet::from_sorted(std::move(exps))));
}

/// Shifts every exponent down by t (each must lie outside W_0).
inline std::vector<Exponent> shifted_into_w0(const Partition& p, const std::vector<Exponent>& exps)
{
    std::vector<Exponent> out;
    out.reserve(exps.size());
    for(Exponent f : exps) { out.push_back(p.shift_into_w0(f)); }
    return out;
}

inline bool is_four(const std::vector<Exponent>& exps) { return exps.size() == 1 && exps.front() == 2; }
} // namespace detail

inline SubcaseTag route(const Partition& p, const ExponentSet& n)
{
    detail::require_case2(p, n);
    const auto bits = detail::split_bits(p, n);
    if(detail::is_four(bits.in_w0)) { return SubcaseTag::S22; }
    if(bits.in_w0.empty()) { return SubcaseTag::UniformShift; }
    const std::size_t l = bits.outside.size();
    if(l >= p.h() - 1) { return SubcaseTag::S211; }
    if(l >= 1) { return SubcaseTag::S212; }
    if(n.size() == 1) { return SubcaseTag::S213_k1; }
    std::vector<Exponent> rest(n.vec().begin(), n.vec().end() - 1);
    return detail::is_four(rest) ? SubcaseTag::S213_chain_merge : SubcaseTag::S213_rest_ok;
}

/// Fout has at least h-1 bits: F0 is one part, and Fout is cut into h-1
/// class-pure groups. Groups start as the per-class bits; the largest group
/// gives up its top bit as a singleton until there are h-1 groups.
inline RepresentationCertificate build_s211(const Partition& p, const ExponentSet& n)
{
    const auto bits = detail::split_bits(p, n);
    std::map<std::uint32_t, std::vector<Exponent>> by_class;
    for(Exponent e : bits.outside) { by_class[p.classify(e).value].push_back(e); }
    std::vector<std::vector<Exponent>> groups;
    for(auto& kv : by_class) { groups.push_back(std::move(kv.second)); }
    while(groups.size() < p.h() - 1)
    {
        auto largest = std::max_element(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
            return a.size() != b.size() ? a.size() < b.size() : a.back() < b.back();
        });
        const Exponent top = largest->back();
        largest->pop_back();
        groups.push_back({top});
    }
    // Merging only ever happens by class; more than h-1 classes cannot occur.
    std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });

    auto c = detail::new_cert(p, n, SubcaseTag::S211);
    detail::push(p, c, bits.in_w0);
    for(auto& g : groups) { detail::push(p, c, std::move(g)); }
    return c;
}

/// 1 <= |Fout| = l <= h-2: keep F0 and the lower l-1 outside bits, and
/// replace the top outside bit f_0 by the chain 2^(f_0-1), ..., 2^(f_0-(h-1-l))
/// with its last term doubled.
inline RepresentationCertificate build_s212(const Partition& p, const ExponentSet& n)
{
    const auto bits = detail::split_bits(p, n);
    const std::size_t l = bits.outside.size();
    const Exponent f0 = bits.outside.back();

    auto c = detail::new_cert(p, n, SubcaseTag::S212);
    detail::push(p, c, bits.in_w0);
    for(std::size_t i = 1; i < l; ++i) { detail::push(p, c, {bits.outside[l - 1 - i]}); }
    const std::uint64_t chain = p.h() - 1 - l;
    for(std::uint64_t d = 1; d <= chain; ++d) { detail::push(p, c, {f0 - d}); }
    detail::push(p, c, {f0 - chain});
    return c;
}

namespace detail
{
/// 2^g0 as the h terms 2^(g0-1), ..., 2^(g0-h+1), 2^(g0-h+1).
inline std::vector<Exponent> full_chain(std::uint32_t h, Exponent g0)
{
    std::vector<Exponent> out;
    for(std::uint64_t i = 1; i < h; ++i) { out.push_back(g0 - i); }
    out.push_back(g0 - (h - 1));
    return out;
}

/// 4 merged into the first chain term whose exponent lies in W_0.
inline RepresentationCertificate chain_merge(const Partition& p, const ExponentSet& n)
{
    const Exponent g0 = n.highest();
    const auto chain = full_chain(p.h(), g0);
    std::optional<std::size_t> slot;
    for(std::size_t i = 0; i < chain.size(); ++i)
    {
        if(p.in_w0(chain[i]) && chain[i] != 2)
        {
            slot = i;
            break;
        }
    }
    if(!slot) { throw Error(ErrorCode::NoMergeSlot, "no chain exponent below " + std::to_string(g0) + " lies in W_0"); }
    auto c = new_cert(p, n, SubcaseTag::S213_chain_merge);
    for(std::size_t i = 0; i < chain.size(); ++i)
    {
        if(i == *slot) { push(p, c, {2, chain[i]}); }
        else { push(p, c, {chain[i]}); }
    }
    return c;
}

/// Published formula for k >= 2, g_1 = 2:
/// a_0 = 2^(g0-h+1) + rest, a_i = 2^(g0-i) for 1 <= i <= h-1.
inline RepresentationCertificate published_g1_eq_2(const Partition& p, const ExponentSet& n, SubcaseTag tag)
{
    const Exponent g0 = n.highest();
    auto c = new_cert(p, n, tag);
    std::vector<Exponent> a0(n.vec().begin(), n.vec().end() - 1);
    a0.push_back(g0 - (p.h() - 1));
    push(p, c, std::move(a0));
    for(std::uint64_t i = 1; i < p.h(); ++i) { push(p, c, {g0 - i}); }
    return c;
}
} // namespace detail

/// F ⊆ W_0, top bit g_0 >= h+4. k = 1: 2^g0 as the doubled chain from
/// g0-1; otherwise the lower bits form a_0 and 2^g0 becomes the doubled chain
/// from g0-1 over h-1 parts, unless the lower bits are exactly 4.
inline RepresentationCertificate build_s213(const Partition& p, const ExponentSet& n)
{
    const SubcaseTag tag = route(p, n);
    const Exponent g0 = n.highest();
    if(tag == SubcaseTag::S213_k1)
    {
        auto c = detail::new_cert(p, n, tag);
        for(Exponent e : detail::full_chain(p.h(), g0)) { detail::push(p, c, {e}); }
        return c;
    }
    if(tag == SubcaseTag::S213_rest_ok)
    {
        auto c = detail::new_cert(p, n, tag);
        detail::push(p, c, std::vector<Exponent>(n.vec().begin(), n.vec().end() - 1));
        for(std::uint64_t i = 1; i + 1 < p.h(); ++i) { detail::push(p, c, {g0 - i}); }
        detail::push(p, c, {g0 - (p.h() - 2)});
        return c;
    }
    if(tag == SubcaseTag::S213_chain_merge) { return detail::chain_merge(p, n); }
    throw Error(ErrorCode::InvalidConfig, "build_s213 called for subcase " + std::string(to_string(tag)));
}

/// F0 = {2}: a_0 = 4 + Σ 2^(f-t), a_1 = ... = a_(h-1) = Σ 2^(f-t) over Fout.
inline RepresentationCertificate build_s22(const Partition& p, const ExponentSet& n)
{
    const auto bits = detail::split_bits(p, n);
    const auto shifted = detail::shifted_into_w0(p, bits.outside);
    auto c = detail::new_cert(p, n, SubcaseTag::S22);
    auto a0 = shifted;
    a0.push_back(2);
    detail::push(p, c, std::move(a0));
    for(std::uint32_t i = 1; i < p.h(); ++i) { detail::push(p, c, shifted); }
    return c;
}

/// F0 empty: h identical parts Σ 2^(f-t), since h·2^(f-t) = 2^f.
inline RepresentationCertificate build_uniform_shift(const Partition& p, const ExponentSet& n)
{
    const auto shifted = detail::shifted_into_w0(p, n.vec());
    auto c = detail::new_cert(p, n, SubcaseTag::UniformShift);
    for(std::uint32_t i = 0; i < p.h(); ++i) { detail::push(p, c, shifted); }
    return c;
}

inline Avoid4Outcome represent_avoiding_4(const Partition& p, const ExponentSet& n, Avoid4Options opts = {})
{
    const SubcaseTag tag = route(p, n);
    Avoid4Outcome out{RepresentationCertificate{}, tag, {}};

    if(opts.paper_faithful && n.size() >= 2 && detail::split_bits(p, n).outside.empty() &&
       n.vec()[n.size() - 2] == 2)
    {
        // The published g_1 = 2 branch; check it with the verifier's rules.
        auto candidate = detail::published_g1_eq_2(p, n, tag);
        for(std::size_t i = 0; i < candidate.parts.size(); ++i)
        {
            const auto set = ExponentSet::from_sorted(candidate.parts[i].exponents);
            if(!classify_element(p, set))
            {
                std::string where;
                for(Exponent e : set.exponents())
                {
                    if(!where.empty()) { where += ", "; }
                    where += std::to_string(e) + " in W_" + std::to_string(p.classify(e).value);
                }
                out.divergences.push_back(
                    {tag, i, set.vec(), "class impurity", "g_1 = 2 branch part a_" + std::to_string(i) + ": " + where});
            }
        }
        if(out.divergences.empty() && verify(candidate).ok())
        {
            out.certificate = std::move(candidate);
            return out;
        }
    }

    switch(tag)
    {
        case SubcaseTag::S211:         out.certificate = build_s211(p, n); break;
        case SubcaseTag::S212:         out.certificate = build_s212(p, n); break;
        case SubcaseTag::S22:          out.certificate = build_s22(p, n); break;
        case SubcaseTag::UniformShift: out.certificate = build_uniform_shift(p, n); break;
        case SubcaseTag::S213_k1:
        case SubcaseTag::S213_rest_ok:
        case SubcaseTag::S213_chain_merge: out.certificate = build_s213(p, n); break;
    }
    return out;
}

} // namespace nathanson
#endif // NATHANSON_AVOID4_HPP

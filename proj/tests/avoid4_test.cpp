#include <gtest/gtest.h>

#include <random>

#include "nathanson/avoid4.hpp"
#include "test_support.hpp"

using namespace nathanson;
using namespace nathanson::testing;

namespace
{
const Partition kCase2(PartitionConfig{4, 2, ArithmeticRule{300, 300}, true, Mode::Case2});

std::vector<std::vector<Exponent>> part_lists(const RepresentationCertificate& c)
{
    std::vector<std::vector<Exponent>> out;
    for(const auto& p : c.parts) { out.push_back(p.exponents); }
    return out;
}

void expect_verified(const RepresentationCertificate& c)
{
    const auto v = verify(c);
    EXPECT_TRUE(v.ok()) << (v.ok() ? "" : v.violations.front().constraint + ": " + v.violations.front().detail);
}

/// Subcase by direct evaluation of the defining conditions.
SubcaseTag expected_tag(const Partition& p, const ExponentSet& n)
{
    std::vector<Exponent> in0, out;
    for(auto e : n.exponents()) { (p.classify(e).value == 0 ? in0 : out).push_back(e); }
    if(in0 == std::vector<Exponent>{2}) { return SubcaseTag::S22; }
    if(in0.empty()) { return SubcaseTag::UniformShift; }
    if(out.size() >= p.h() - 1) { return SubcaseTag::S211; }
    if(!out.empty()) { return SubcaseTag::S212; }
    if(n.size() == 1) { return SubcaseTag::S213_k1; }
    mpz_class rest = to_mpz(n) - (mpz_class(1) << n.highest());
    return rest == 4 ? SubcaseTag::S213_chain_merge : SubcaseTag::S213_rest_ok;
}
} // namespace

TEST(Avoid4, RouteExamples)
{
    EXPECT_EQ(route(kCase2, val({2, 301})), SubcaseTag::S22);
    EXPECT_EQ(route(kCase2, val({20})), SubcaseTag::S213_k1);
    EXPECT_EQ(route(kCase2, val({301, 302})), SubcaseTag::UniformShift);
    EXPECT_EQ(route(kCase2, val({2, 304})), SubcaseTag::S213_chain_merge);
    EXPECT_EQ(route(kCase2, val({1, 10, 20})), SubcaseTag::S213_rest_ok);
    EXPECT_EQ(route(kCase2, val({10, 301})), SubcaseTag::S212);
    EXPECT_EQ(route(kCase2, val({10, 301, 601, 901})), SubcaseTag::S211);
}

TEST(Avoid4, BelowGuarantee)
{
    for(std::uint64_t n : {std::uint64_t{4}, std::uint64_t{10}, std::uint64_t{600}})
    {
        try
        {
            (void)represent_avoiding_4(kCase2, to_exponent_set(n));
            FAIL() << n;
        }
        catch(const Error& e)
        {
            EXPECT_EQ(e.code(), ErrorCode::BelowGuarantee);
        }
    }
    EXPECT_NO_THROW((void)represent_avoiding_4(kCase2, to_exponent_set(601)));
}

TEST(Avoid4, RefusesNonStrictOrWrongMode)
{
    const Partition lab(PartitionConfig{4, 2, ArithmeticRule{8, 8}, false, Mode::Case2});
    EXPECT_THROW((void)represent_avoiding_4(lab, pow2(100)), Error);
    const Partition case1(PartitionConfig{5, 2, ArithmeticRule{600, 600}, true, Mode::Case1});
    EXPECT_THROW((void)represent_avoiding_4(case1, pow2(2000)), Error);
}

TEST(Avoid4, S211Examples)
{
    auto c = build_s211(kCase2, val({10, 301, 601, 901}));
    EXPECT_EQ(part_lists(c), (std::vector<std::vector<Exponent>>{{10}, {301}, {601}, {901}}));
    expect_verified(c);

    c = build_s211(kCase2, val({10, 301, 302, 601}));
    EXPECT_EQ(part_lists(c), (std::vector<std::vector<Exponent>>{{10}, {301}, {302}, {601}}));
    expect_verified(c);

    c = build_s211(kCase2, val({0, 2, 301, 601, 901}));
    EXPECT_EQ(c.parts[0].exponents, (std::vector<Exponent>{0, 2}));
    expect_verified(c);

    // Five outside bits in two classes collapse to three groups.
    c = build_s211(kCase2, val({5, 301, 302, 1201, 601, 1501}));
    EXPECT_EQ(c.parts.size(), 4u);
    expect_verified(c);
}

TEST(Avoid4, S212Examples)
{
    auto c = build_s212(kCase2, val({10, 301}));
    EXPECT_EQ(part_lists(c), (std::vector<std::vector<Exponent>>{{10}, {300}, {299}, {299}}));
    expect_verified(c);

    // l = 2: f_0 = 601 becomes 2^600 + 2^600; f_1 = 301 stays.
    c = build_s212(kCase2, val({0, 2, 301, 601}));
    EXPECT_EQ(part_lists(c), (std::vector<std::vector<Exponent>>{{0, 2}, {301}, {600}, {600}}));
    expect_verified(c);

    EXPECT_EQ(route(kCase2, val({2, 301})), SubcaseTag::S22);
}

TEST(Avoid4, S213Examples)
{
    auto c = build_s213(kCase2, val({20}));
    EXPECT_EQ(part_lists(c), (std::vector<std::vector<Exponent>>{{19}, {18}, {17}, {17}}));
    expect_verified(c);

    c = build_s213(kCase2, val({1, 10, 20}));
    EXPECT_EQ(part_lists(c), (std::vector<std::vector<Exponent>>{{1, 10}, {19}, {18}, {18}}));
    expect_verified(c);

    c = build_s213(kCase2, val({2, 304}));
    EXPECT_EQ(c.case_tag, "case2/s213_chain_merge");
    EXPECT_EQ(part_lists(c), (std::vector<std::vector<Exponent>>{{2, 303}, {302}, {301}, {301}}));
    expect_verified(c);

    // g_1 = 2 with more bits below routes to rest_ok: a_0 = 4 + 1 = 5.
    c = build_s213(kCase2, val({0, 2, 304}));
    EXPECT_EQ(c.case_tag, "case2/s213_rest_ok");
    expect_verified(c);

    EXPECT_THROW((void)build_s213(kCase2, val({301, 302})), Error);
}

TEST(Avoid4, ChainMergeSkipsBlockExponents)
{
    // g_0 = 303: g_0 - 1 = 302 and g_0 - 2 = 301 are in W_1, so 4 merges into 2^300.
    const auto c = build_s213(kCase2, val({2, 303}));
    EXPECT_EQ(part_lists(c), (std::vector<std::vector<Exponent>>{{302}, {301}, {2, 300}, {300}}));
    expect_verified(c);
}

TEST(Avoid4, S22Examples)
{
    auto c = build_s22(kCase2, val({2, 301}));
    EXPECT_EQ(part_lists(c), (std::vector<std::vector<Exponent>>{{2, 299}, {299}, {299}, {299}}));
    expect_verified(c);

    c = build_s22(kCase2, val({2, 301, 602}));
    EXPECT_EQ(part_lists(c), (std::vector<std::vector<Exponent>>{{2, 299, 600}, {299, 600}, {299, 600}, {299, 600}}));
    expect_verified(c);
}

TEST(Avoid4, UniformShiftExamples)
{
    auto c = build_uniform_shift(kCase2, val({301}));
    EXPECT_EQ(part_lists(c), (std::vector<std::vector<Exponent>>(4, {299})));
    expect_verified(c);
    c = build_uniform_shift(kCase2, val({301, 302}));
    EXPECT_EQ(part_lists(c), (std::vector<std::vector<Exponent>>(4, {299, 300})));
    expect_verified(c);
    c = build_uniform_shift(kCase2, val({301, 602}));
    EXPECT_EQ(part_lists(c), (std::vector<std::vector<Exponent>>(4, {299, 600})));
    expect_verified(c);
}

TEST(Avoid4, FaithfulModeReportsClassImpurity)
{
    const auto n = val({2, 304});
    const auto faithful = represent_avoiding_4(kCase2, n, Avoid4Options{true});
    ASSERT_EQ(faithful.divergences.size(), 1u);
    EXPECT_EQ(faithful.divergences[0].part, 0u);
    EXPECT_EQ(faithful.divergences[0].exponents, (std::vector<Exponent>{2, 301}));
    EXPECT_EQ(faithful.divergences[0].check, "class impurity");
    expect_verified(faithful.certificate);

    const auto plain = represent_avoiding_4(kCase2, n);
    EXPECT_TRUE(plain.divergences.empty());
    EXPECT_EQ(plain.certificate, faithful.certificate);
}

TEST(Avoid4, FaithfulModeKeepsValidPublishedFormula)
{
    // g_0 = 400: 2^(g_0 - 3) = 2^397 lies in W_0, so the published branch verifies.
    const auto n = val({0, 2, 400});
    const auto faithful = represent_avoiding_4(kCase2, n, Avoid4Options{true});
    EXPECT_TRUE(faithful.divergences.empty());
    EXPECT_EQ(part_lists(faithful.certificate),
              (std::vector<std::vector<Exponent>>{{0, 2, 397}, {399}, {398}, {397}}));
    expect_verified(faithful.certificate);
}

TEST(Avoid4, RouterTotalOnWindow)
{
    for(std::uint64_t n = 601; n <= 601 + 4096; ++n)
    {
        const auto v = to_exponent_set(n);
        const auto tag = route(kCase2, v);
        ASSERT_EQ(tag, expected_tag(kCase2, v)) << n;
        const auto out = represent_avoiding_4(kCase2, v);
        EXPECT_EQ(out.tag, tag);
        ASSERT_TRUE(verify(out.certificate).ok()) << n;
    }
}

TEST(Avoid4, RandomLargeInputs)
{
    std::mt19937_64 rng(99);
    for(int i = 0; i < 100; ++i)
    {
        auto n = random_value(rng, 400 + rng() % 1601);
        if(n <= to_exponent_set(600)) { continue; }
        const auto out = represent_avoiding_4(kCase2, n);
        EXPECT_EQ(out.tag, expected_tag(kCase2, n));
        ASSERT_TRUE(verify(out.certificate).ok());
    }
}

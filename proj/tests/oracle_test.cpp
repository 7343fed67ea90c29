#include <gtest/gtest.h>

#include <functional>

#include "nathanson/oracle.hpp"
#include "test_support.hpp"

using namespace nathanson;
using namespace nathanson::testing;

namespace
{
const Partition kLab4(PartitionConfig{4, 2, ArithmeticRule{8, 8}, false, Mode::GenericLab});
const Partition kLab3(PartitionConfig{3, 1, ArithmeticRule{3, 4}, false, Mode::GenericLab});
const Partition kBlocks2(PartitionConfig{2, 2, BlockPatternRule{{{0, 2}, {1, 2}}}, false, Mode::GenericLab});
const Partition kCase2(PartitionConfig{4, 2, ArithmeticRule{300, 300}, true, Mode::Case2});

/// Ordered h-tuples by nested loops over the elements; the last summand is
/// looked up rather than looped.
std::vector<std::uint64_t> naive_counts(const std::vector<std::uint64_t>& elems, std::uint32_t h, std::uint64_t N)
{
    std::vector<char> member(N + 1, 0);
    for(auto a : elems) { member[a] = 1; }
    std::vector<std::uint64_t> counts(N + 1, 0);
    std::function<void(std::uint32_t, std::uint64_t)> rec = [&](std::uint32_t depth, std::uint64_t sum) {
        if(depth == h - 1)
        {
            for(std::uint64_t n = sum + 1; n <= N; ++n) { counts[n] += member[n - sum]; }
            return;
        }
        for(auto a : elems)
        {
            if(sum + a > N) { break; }
            rec(depth + 1, sum + a);
        }
    };
    rec(0, 0);
    return counts;
}
} // namespace

TEST(Oracle, EnumerateToyWindow)
{
    const auto elems = enumerate_A(kLab4, 64);
    EXPECT_TRUE(std::binary_search(elems.begin(), elems.end(), 4u));
    std::size_t recount = 0;
    for(std::uint64_t n = 1; n <= 64; ++n)
    {
        const bool in = classify_element(kLab4, to_exponent_set(n)).has_value();
        EXPECT_EQ(in, std::binary_search(elems.begin(), elems.end(), n)) << n;
        recount += in ? 1 : 0;
    }
    EXPECT_EQ(recount, elems.size());

    // Bits 9 and 10 form a W_1 block; 2^9 + 4 straddles.
    const auto wide = enumerate_A(kLab4, 1 << 12);
    EXPECT_FALSE(std::binary_search(wide.begin(), wide.end(), 516u));
    EXPECT_TRUE(std::binary_search(wide.begin(), wide.end(), 512u + 1024u));
    for(std::uint64_t n = 1; n <= (1u << 12); ++n)
    {
        ASSERT_EQ(classify_element(kLab4, to_exponent_set(n)).has_value(),
                  std::binary_search(wide.begin(), wide.end(), n));
    }
}

TEST(Oracle, HandCountedTable)
{
    const auto t = r_h_table_from({1, 2}, 2, 4);
    EXPECT_EQ(t.counts, (std::vector<std::uint64_t>{0, 0, 1, 2, 1}));
    EXPECT_FALSE(t.saturated);
}

TEST(Oracle, ConvolutionMatchesNaive)
{
    for(const Partition* p : {&kLab4, &kLab3, &kBlocks2})
    {
        const std::uint64_t N = 300;
        const auto elems = enumerate_A(*p, N);
        for(std::uint32_t h : {2u, 3u, 4u})
        {
            EXPECT_EQ(r_h_table_from(elems, h, N).counts, naive_counts(elems, h, N)) << "h = " << h;
        }
        EXPECT_EQ(r_h_table(*p, N).counts[0], 0u);
    }
}

TEST(Oracle, ThreadedMatchesSerial)
{
    OracleOptions par;
    par.threads = 4;
    EXPECT_EQ(r_h_table(kLab4, 2000, par).counts, r_h_table(kLab4, 2000).counts);
}

TEST(Oracle, WindowMonotone)
{
    const auto small = enumerate_A(kLab3, 500);
    const auto big = enumerate_A(kLab3, 900);
    ASSERT_LE(small.size(), big.size());
    EXPECT_TRUE(std::equal(small.begin(), small.end(), big.begin()));
    const auto ts = r_h_table(kLab3, 500);
    const auto tb = r_h_table(kLab3, 900);
    for(std::uint64_t n = 0; n <= 500; ++n) { EXPECT_EQ(ts[n], tb[n]); }
}

TEST(Oracle, SaturationIsFlagged)
{
    OracleOptions opts;
    opts.count_cap = 100;
    const auto t = r_h_table(kCase2, 400, opts);
    EXPECT_TRUE(t.saturated);
    EXPECT_EQ(*std::max_element(t.counts.begin(), t.counts.end()), 100u);
    EXPECT_FALSE(r_h_table(kCase2, 400).saturated);
}

TEST(Oracle, WindowBudget)
{
    OracleOptions opts;
    opts.max_window = 1000;
    try
    {
        (void)enumerate_A(kLab4, 1001, opts);
        FAIL();
    }
    catch(const Error& e)
    {
        EXPECT_EQ(e.code(), ErrorCode::WindowTooLarge);
    }
    EXPECT_THROW((void)r_h_table(kLab4, 5000, opts), Error);
}

TEST(Oracle, EWindow)
{
    try
    {
        (void)e_window(kLab4, 516, 600);
        FAIL();
    }
    catch(const Error& e)
    {
        EXPECT_EQ(e.code(), ErrorCode::ElementNotInA);
    }
    EXPECT_THROW((void)e_window(kLab4, 0, 600), Error);

    // Every element of E_a has a representation using a.
    const std::uint64_t N = 1 << 11;
    const auto with = r_h_table(kBlocks2, N);
    for(std::uint64_t a : {1u, 2u, 3u, 16u, 19u})
    {
        const auto e = e_window(kBlocks2, a, N);
        EXPECT_FALSE(e.empty()) << a;
        for(auto n : e) { EXPECT_GT(with[n], 0u); }
    }
}

TEST(Oracle, AvoidFourWindowAboveM2IsEmpty)
{
    const std::uint64_t N = 1400;
    const auto e = e_window(kCase2, 4, N);
    for(auto n : e) { EXPECT_LE(n, 600u); }
}

TEST(Oracle, MeetInTheMiddleAgreesWithTable)
{
    for(const Partition* p : {&kLab4, &kLab3, &kBlocks2})
    {
        const std::uint64_t N = 400;
        auto elems = enumerate_A(*p, N);
        const auto full = r_h_table_from(elems, p->h(), N);
        const std::uint64_t a = elems[2];
        elems.erase(std::remove(elems.begin(), elems.end(), a), elems.end());
        const auto reduced = r_h_table_from(elems, p->h(), N);
        for(std::uint64_t n = 0; n <= N; ++n)
        {
            ASSERT_EQ(has_representation(*p, n), full[n] > 0) << n;
            ASSERT_EQ(has_representation(*p, n, {a}), reduced[n] > 0) << n;
        }
    }
}

TEST(Oracle, TheoremASpotCheck)
{
    try
    {
        (void)theorem_a_spot_check(kLab4, 1000);
        FAIL();
    }
    catch(const Error& e)
    {
        EXPECT_EQ(e.code(), ErrorCode::ParameterMismatch);
    }
    const Partition alternating1(PartitionConfig{2, 1, BlockPatternRule{{{0, 1}, {1, 1}}}, false, Mode::GenericLab});
    EXPECT_THROW((void)theorem_a_spot_check(alternating1, 1000), Error);
    const auto outside = theorem_a_spot_check(alternating1, 1 << 12, 20, {}, true);
    ASSERT_EQ(outside.unmet_hypotheses.size(), 1u);
    EXPECT_NE(outside.note.find("not covered"), std::string::npos);

    const auto rep = theorem_a_spot_check(kBlocks2, 1 << 14);
    ASSERT_TRUE(rep.threshold.has_value());
    EXPECT_LT(*rep.threshold, 1u << 13);
    EXPECT_EQ(rep.samples.size(), 20u);
    EXPECT_TRUE(rep.all_samples_nonempty);
    EXPECT_NE(rep.note.find("finite-window"), std::string::npos);
    EXPECT_TRUE(rep.unmet_hypotheses.empty());

    const auto table = r_h_table(kBlocks2, 1 << 14);
    for(std::uint64_t n = *rep.threshold + 1; n <= (1u << 14); ++n) { ASSERT_GT(table[n], 0u); }
    EXPECT_EQ(table[*rep.threshold], 0u);
}

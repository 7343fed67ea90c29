#ifndef NATHANSON_ORACLE_HPP
#define NATHANSON_ORACLE_HPP

// Dense brute force on a finite window [0, N]: the elements of A, exact
// counts r_h(A, n), the sets E_a = hA \ h(A \ {a}) and a bitset
// meet-in-the-middle membership test. Everything here is finite-window
// evidence and says nothing about n > N.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "nathanson/basis.hpp"
#include "nathanson/numeral.hpp"
#include "nathanson/partition.hpp"

namespace nathanson
{

struct OracleOptions
{
    std::uint64_t max_window = std::uint64_t{1} << 22;
    std::uint64_t count_cap = UINT32_MAX;
    unsigned threads = 1;
};

namespace detail
{
inline void check_window(std::uint64_t N, const OracleOptions& opts)
{
    if(N > opts.max_window)
    {
        throw Error(ErrorCode::WindowTooLarge,
                    "N = " + std::to_string(N) + " exceeds the window budget " + std::to_string(opts.max_window));
    }
}

/// Class of every bit position a 64-bit window value can use.
inline std::array<std::uint32_t, 64> bit_classes(const Partition& p)
{
    std::array<std::uint32_t, 64> out{};
    for(std::uint64_t b = 0; b < 64; ++b) { out[b] = p.classify(b).value; }
    return out;
}
} // namespace detail

/// A ∩ [1, N], ascending.
inline std::vector<std::uint64_t> enumerate_A(const Partition& p, std::uint64_t N, const OracleOptions& opts = {})
{
    detail::check_window(N, opts);
    const auto cls = detail::bit_classes(p);
    std::vector<std::uint64_t> out;
    for(std::uint64_t n = 1; n <= N; ++n)
    {
        const std::uint32_t c = cls[std::countr_zero(n)];
        std::uint64_t rest = n & (n - 1);
        bool pure = true;
        while(rest != 0 && pure)
        {
            pure = cls[std::countr_zero(rest)] == c;
            rest &= rest - 1;
        }
        if(pure) { out.push_back(n); }
    }
    return out;
}

struct RTable
{
    std::uint64_t N = 0;
    std::uint32_t h = 0;
    std::vector<std::uint64_t> counts; ///< counts[n] = r_h(n), saturated at the cap
    bool saturated = false;

    std::uint64_t operator[](std::uint64_t n) const { return counts[n]; }
};

/// Ordered h-tuple counts from `elements` (ascending, all >= 1), truncated
/// at N, by h-1 rounds of convolution with the indicator of `elements`.
inline RTable r_h_table_from(const std::vector<std::uint64_t>& elements, std::uint32_t h, std::uint64_t N,
                             const OracleOptions& opts = {})
{
    detail::check_window(N, opts);
    RTable t;
    t.N = N;
    t.h = h;
    std::vector<std::uint64_t> cur(N + 1, 0);
    for(auto a : elements)
    {
        if(a <= N) { cur[a] = 1; }
    }
    std::vector<std::uint64_t> next(N + 1, 0);
    const unsigned workers = std::max(1u, opts.threads);
    for(std::uint32_t round = 1; round < h; ++round)
    {
        std::vector<char> sat_flags(workers, 0);
        auto work = [&](unsigned w) {
            const std::uint64_t lo = (N + 1) * w / workers;
            const std::uint64_t hi = (N + 1) * (w + 1) / workers;
            for(std::uint64_t n = lo; n < hi; ++n)
            {
                unsigned __int128 acc = 0;
                for(auto a : elements)
                {
                    if(a > n) { break; }
                    acc += cur[n - a];
                }
                if(acc > opts.count_cap)
                {
                    acc = opts.count_cap;
                    sat_flags[w] = 1;
                }
                next[n] = static_cast<std::uint64_t>(acc);
            }
        };
        if(workers == 1) { work(0); }
        else
        {
            std::vector<std::jthread> pool;
            for(unsigned w = 0; w < workers; ++w) { pool.emplace_back(work, w); }
        }
        for(char f : sat_flags) { t.saturated = t.saturated || f != 0; }
        std::swap(cur, next);
    }
    if(h == 1)
    {
        for(auto& c : cur) { c = std::min(c, opts.count_cap); }
    }
    t.counts = std::move(cur);
    return t;
}

inline RTable r_h_table(const Partition& p, std::uint64_t N, const OracleOptions& opts = {})
{
    return r_h_table_from(enumerate_A(p, N, opts), p.h(), N, opts);
}

/// n <= N with r_h(n) = 0.
inline std::vector<std::uint64_t> gaps(const RTable& t)
{
    std::vector<std::uint64_t> out;
    for(std::uint64_t n = 0; n <= t.N; ++n)
    {
        if(t.counts[n] == 0) { out.push_back(n); }
    }
    return out;
}

namespace detail
{
inline void require_element(const Partition& p, std::uint64_t a)
{
    if(a == 0 || !classify_element(p, ExponentSet::from_u64(a)))
    {
        throw Error(ErrorCode::ElementNotInA, std::to_string(a) + " is not an element of A");
    }
}
} // namespace detail

/// (hA \ h(A \ {a})) ∩ [0, N].
inline std::vector<std::uint64_t> e_window(const Partition& p, std::uint64_t a, std::uint64_t N,
                                           const OracleOptions& opts = {})
{
    detail::require_element(p, a);
    auto elements = enumerate_A(p, N, opts);
    const RTable with = r_h_table_from(elements, p.h(), N, opts);
    elements.erase(std::remove(elements.begin(), elements.end(), a), elements.end());
    const RTable without = r_h_table_from(elements, p.h(), N, opts);
    std::vector<std::uint64_t> out;
    for(std::uint64_t n = 0; n <= N; ++n)
    {
        if(with.counts[n] != 0 && without.counts[n] == 0) { out.push_back(n); }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Meet in the middle

namespace detail
{
/// Fixed-width bitset over [0, n] with truncating shift-or.
class WindowBits
{
  public:
    explicit WindowBits(std::uint64_t n) : n_(n), words_(n / 64 + 1, 0) {}

    void set(std::uint64_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool test(std::uint64_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }

    /// this |= src << by, dropping bits beyond n.
    void or_shifted(const WindowBits& src, std::uint64_t by)
    {
        if(by > n_) { return; }
        const std::size_t ws = by / 64;
        const unsigned bs = by % 64;
        for(std::size_t i = words_.size(); i-- > ws;)
        {
            std::uint64_t v = src.words_[i - ws] << bs;
            if(bs != 0 && i - ws >= 1) { v |= src.words_[i - ws - 1] >> (64 - bs); }
            words_[i] |= v;
        }
        trim();
    }

  private:
    void trim()
    {
        const unsigned used = n_ % 64 + 1;
        if(used < 64) { words_.back() &= (std::uint64_t{1} << used) - 1; }
    }

    std::uint64_t n_;
    std::vector<std::uint64_t> words_;
};

inline WindowBits k_fold_sums(const std::vector<std::uint64_t>& elements, std::uint32_t k, std::uint64_t n)
{
    WindowBits cur(n);
    cur.set(0);
    for(std::uint32_t r = 0; r < k; ++r)
    {
        WindowBits nxt(n);
        for(auto e : elements) { nxt.or_shifted(cur, e); }
        cur = std::move(nxt);
    }
    return cur;
}
} // namespace detail

/// r_h(A \ excluded, n) >= 1, decided by splitting the h summands into two
/// halves and intersecting their reachable sums.
inline bool has_representation(const Partition& p, std::uint64_t n, const std::vector<std::uint64_t>& excluded = {},
                               const OracleOptions& opts = {})
{
    auto elements = enumerate_A(p, n, opts);
    std::erase_if(elements, [&](std::uint64_t a) {
        return std::find(excluded.begin(), excluded.end(), a) != excluded.end();
    });
    const std::uint32_t k1 = p.h() / 2;
    const auto left = detail::k_fold_sums(elements, k1, n);
    const auto right = detail::k_fold_sums(elements, p.h() - k1, n);
    for(std::uint64_t s = 0; s <= n; ++s)
    {
        if(left.test(s) && right.test(n - s)) { return true; }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Spot check for partitions whose classes each contain t consecutive
// integers with t > log2 h.

struct TheoremASample
{
    std::uint64_t a;
    std::size_t e_window_size;
    std::optional<std::uint64_t> smallest;
    std::optional<std::uint64_t> largest;
};

struct TheoremAReport
{
    std::uint64_t N = 0;
    std::uint32_t h = 0;
    std::uint32_t t = 0;
    /// Largest n <= N with r_h(n) = 0; every n in (threshold, N] is covered.
    std::optional<std::uint64_t> threshold;
    std::size_t gap_count = 0;
    std::vector<TheoremASample> samples;
    bool all_samples_nonempty = false;
    /// Empty when t > log2 h and every class has a run of t; otherwise the failed hypotheses.
    std::vector<std::string> unmet_hypotheses;
    std::string note;
};

inline constexpr std::string_view kFiniteWindowNote =
    "finite-window evidence only: coverage and E_a are checked on [0, N]; "
    "basis and minimality are statements about infinitely many n and are not established here";

inline constexpr std::string_view kOutsideHypothesesNote =
    "; the hypotheses listed in unmet_hypotheses fail, so the window data is not covered by the theorem";

/// Coverage threshold and sampled E_a on [0, N]. Throws ParameterMismatch when
/// the hypotheses fail unless `allow_unmet_hypotheses`, in which case the
/// failures are listed in the report.
inline TheoremAReport theorem_a_spot_check(const Partition& p, std::uint64_t N, std::size_t sample_count = 20,
                                           const OracleOptions& opts = {}, bool allow_unmet_hypotheses = false)
{
    const std::uint32_t h = p.h(), t = p.t();
    std::vector<std::string> unmet;
    if(t < 32 && (std::uint64_t{1} << t) <= h)
    {
        unmet.push_back("need t > log2 h, got t = " + std::to_string(t) + ", h = " + std::to_string(h));
    }
    for(std::uint32_t j = 0; j < h; ++j)
    {
        const auto runs = p.intervals(ClassIndex{j}, N);
        const bool long_run = std::any_of(runs.begin(), runs.end(), [&](const auto& iv) { return iv.hi - iv.lo + 1 >= t; });
        if(!long_run)
        {
            unmet.push_back("W_" + std::to_string(j) + " has no run of " + std::to_string(t) +
                            " consecutive integers in [0, N]");
        }
    }
    if(!unmet.empty() && !allow_unmet_hypotheses) { throw Error(ErrorCode::ParameterMismatch, unmet.front()); }

    TheoremAReport rep;
    rep.N = N;
    rep.h = h;
    rep.t = t;
    rep.note = std::string(kFiniteWindowNote);
    if(!unmet.empty()) { rep.note += kOutsideHypothesesNote; }
    rep.unmet_hypotheses = std::move(unmet);
    const auto elements = enumerate_A(p, N, opts);
    const RTable table = r_h_table_from(elements, h, N, opts);
    const auto g = gaps(table);
    rep.gap_count = g.size();
    if(!g.empty()) { rep.threshold = g.back(); }

    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(N)));
    std::vector<std::uint64_t> pool;
    for(auto a : elements)
    {
        if(a <= root) { pool.push_back(a); }
    }
    std::vector<std::uint64_t> chosen;
    if(pool.size() <= sample_count) { chosen = pool; }
    else
    {
        for(std::size_t i = 0; i < sample_count; ++i) { chosen.push_back(pool[i * pool.size() / sample_count]); }
    }

    rep.all_samples_nonempty = !chosen.empty();
    for(auto a : chosen)
    {
        auto without = elements;
        without.erase(std::remove(without.begin(), without.end(), a), without.end());
        const RTable reduced = r_h_table_from(without, h, N, opts);
        TheoremASample s{a, 0, std::nullopt, std::nullopt};
        for(std::uint64_t n = 0; n <= N; ++n)
        {
            if(table.counts[n] != 0 && reduced.counts[n] == 0)
            {
                ++s.e_window_size;
                if(!s.smallest) { s.smallest = n; }
                s.largest = n;
            }
        }
        rep.all_samples_nonempty = rep.all_samples_nonempty && s.e_window_size > 0;
        rep.samples.push_back(s);
    }
    return rep;
}

} // namespace nathanson
#endif // NATHANSON_ORACLE_HPP

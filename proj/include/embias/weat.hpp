#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "embias/rng.hpp"
#include "embias/similarity.hpp"

namespace embias {

// Equal-sized target groups, disjoint by surface word. Equal size is what
// keeps the effect size inside [-2, 2] and makes the permutation test's
// partition space symmetric.
class WeatPartition {
public:
    WeatPartition(std::vector<ResolvedWord> x, std::vector<ResolvedWord> y)
        : x_(std::move(x)), y_(std::move(y)) {
        if (x_.empty() || x_.size() != y_.size())
            throw ValidationError("weat partition needs |X| == |Y| >= 1");
        std::set<std::string> seen;
        for (const auto& w : x_)
            if (!seen.insert(w.surface).second)
                throw ValidationError("weat partition: duplicate word \"" + w.surface + "\"");
        for (const auto& w : y_)
            if (!seen.insert(w.surface).second)
                throw ValidationError("weat partition: word \"" + w.surface +
                                      "\" appears in both groups");
    }

    const std::vector<ResolvedWord>& x() const { return x_; }
    const std::vector<ResolvedWord>& y() const { return y_; }
    std::size_t group_size() const { return x_.size(); }

private:
    std::vector<ResolvedWord> x_;
    std::vector<ResolvedWord> y_;
};

// Differential association of one word with two attribute sets.
inline double weat_word(std::span<const double> w, const AttributeSet& a,
                        const AttributeSet& b) {
    return assoc(w, a) - assoc(w, b);
}

namespace detail {

inline constexpr double degenerate_sigma = 1e-12;

inline std::vector<double> weat_scores(const WeatPartition& part, const AttributeSet& a,
                                       const AttributeSet& b) {
    std::vector<double> s;
    s.reserve(2 * part.group_size());
    for (const auto& w : part.x()) s.push_back(weat_word(w.vector, a, b));
    for (const auto& w : part.y()) s.push_back(weat_word(w.vector, a, b));
    return s;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace detail

// Effect size: (mean_X - mean_Y) / population-stddev over X u Y. Population
// divisor (n, not n-1) is what gives the exact [-2, 2] range.
inline double weat_effect_size(const WeatPartition& part, const AttributeSet& a,
                               const AttributeSet& b) {
    std::vector<double> s = detail::weat_scores(part, a, b);
    double sigma = population_stddev(s);
    if (sigma <= detail::degenerate_sigma)
        throw DegenerateVariance("weat effect size: all word scores are equal");
    std::size_t m = part.group_size();
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean_x += s[i];
    for (std::size_t i = m; i < s.size(); ++i) mean_y += s[i];
    mean_x /= static_cast<double>(m);
    mean_y /= static_cast<double>(m);
    return clamp_range((mean_x - mean_y) / sigma, -2.0, 2.0);
}

inline double weat_test_statistic(const WeatPartition& part, const AttributeSet& a,
                                  const AttributeSet& b) {
    std::vector<double> s = detail::weat_scores(part, a, b);
    std::size_t m = part.group_size();
    double sum_x = 0.0, sum_y = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum_x += s[i];
    for (std::size_t i = m; i < s.size(); ++i) sum_y += s[i];
    return sum_x - sum_y;
}

enum class PMethod { exact, monte_carlo };

struct WeatPValue {
    double p = 0.0;
    PMethod method = PMethod::exact;
    // exact: number of enumerated partitions; monte-carlo: iterations.
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;  // monte-carlo only
};

inline constexpr std::uint64_t exact_partition_cap = 200000;

// One-sided permutation p-value: the fraction of equal-size partitions of
// X u Y whose statistic strictly exceeds the observed one. The identity
// partition is evaluated through the same accumulation formula, so it
// compares equal, never greater.
inline WeatPValue weat_p_value(const WeatPartition& part, const AttributeSet& a,
                               const AttributeSet& b, PMethod method,
                               std::uint64_t iterations = 10000, std::uint64_t seed = 0) {
    std::vector<double> s = detail::weat_scores(part, a, b);
    std::size_t n = s.size();
    std::size_t m = part.group_size();
    double total = 0.0;
    for (double v : s) total += v;

    auto stat_of = [&](const std::vector<std::size_t>& idx) {
        double sum = 0.0;
        for (std::size_t i : idx) sum += s[i];
        return 2.0 * sum - total;
    };

    std::vector<std::size_t> identity(m);
    for (std::size_t i = 0; i < m; ++i) identity[i] = i;
    double observed = stat_of(identity);

    if (method == PMethod::exact) {
        std::uint64_t count_total = detail::binomial(n, m);
        if (count_total > exact_partition_cap)
            throw NumericError("exact p-value: " + std::to_string(count_total) +
                               " partitions exceed the cap of " +
                               std::to_string(exact_partition_cap) + "; use monte-carlo");
        // lexicographic enumeration of m-subsets of {0..n-1}
        std::vector<std::size_t> c = identity;
        std::uint64_t greater = 0;
        for (;;) {
            if (stat_of(c) > observed) ++greater;
            std::size_t i = m;
            while (i > 0 && c[i - 1] == n - m + i - 1) --i;
            if (i == 0) break;
            ++c[i - 1];
            for (std::size_t j = i; j < m; ++j) c[j] = c[j - 1] + 1;
        }
        return {static_cast<double>(greater) / static_cast<double>(count_total), PMethod::exact,
                count_total, 0};
    }

    if (iterations == 0)
        throw NumericError("monte-carlo p-value: iterations must be positive");
    SplitMix64 rng(seed);
    std::vector<std::size_t> pool(n);
    std::vector<std::size_t> pick(m);
    std::uint64_t greater = 0;
    for (std::uint64_t it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) pool[i] = i;
        // partial Fisher-Yates: the first m entries are a uniform m-subset
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
            std::swap(pool[i], pool[j]);
            pick[i] = pool[i];
        }
        // index order fixes the accumulation order; a resampled identity (or
        // any stat tie) must compare equal, not drift past by an ulp
        std::sort(pick.begin(), pick.end());
        if (stat_of(pick) > observed) ++greater;
    }
    return {static_cast<double>(greater) / static_cast<double>(iterations), PMethod::monte_carlo,
            iterations, seed};
}

struct WeatResult {
    double effect_size = 0.0;
    double test_statistic = 0.0;
    std::vector<std::pair<std::string, double>> word_scores;  // X order, then Y order
    std::optional<WeatPValue> p_value;
};

inline WeatResult run_weat(const WeatPartition& part, const AttributeSet& a,
                           const AttributeSet& b,
                           std::optional<PMethod> p_method = std::nullopt,
                           std::uint64_t iterations = 10000, std::uint64_t seed = 0) {
    WeatResult r;
    r.effect_size = weat_effect_size(part, a, b);
    r.test_statistic = weat_test_statistic(part, a, b);
    for (const auto& w : part.x()) r.word_scores.emplace_back(w.surface, weat_word(w.vector, a, b));
    for (const auto& w : part.y()) r.word_scores.emplace_back(w.surface, weat_word(w.vector, a, b));
    if (p_method)
        r.p_value = weat_p_value(part, a, b, *p_method, iterations, seed);
    return r;
}

}

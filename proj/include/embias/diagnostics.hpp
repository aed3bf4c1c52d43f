#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "embias/direct_bias.hpp"
#include "embias/mac.hpp"
#include "embias/same.hpp"
#include "embias/weat.hpp"

namespace embias {

inline ResolvedWord make_word(std::string name, Vec v) {
    return ResolvedWord{std::move(name), std::move(v), Resolution::direct};
}

namespace detail {

inline double deg2rad(double deg) { return deg * (3.14159265358979323846 / 180.0); }

}  // namespace detail

// A small embedding configuration engineered so that a metric reports its
// "unbiased" value while the words are visibly biased (or vice versa).
struct CounterexampleFixture {
    std::string name;
    std::string claim;  // what the fixture demonstrates, in plain words
    AttributeFamily family;
    std::variant<TargetSet, WeatPartition> targets;
    std::vector<std::pair<std::string, double>> parameters;
};

// Two target words per group, mirrored around the attribute axis: every word
// carries the same association magnitude, the group means cancel, and the
// effect size lands on 0.
inline CounterexampleFixture weat_opposed_fixture(double phi_deg = 60.0, double gap_deg = 10.0) {
    if (phi_deg <= 0.0 || phi_deg >= 90.0 || gap_deg <= 0.0 || gap_deg >= 90.0)
        throw ValidationError("weat opposed fixture: angles must be inside (0, 90) degrees");
    double phi = detail::deg2rad(phi_deg);
    double g = detail::deg2rad(gap_deg);
    AttributeFamily family({
        AttributeSet("plus", {make_word("a+", {std::cos(g), std::sin(g)})}),
        AttributeSet("minus", {make_word("a-", {std::cos(g), -std::sin(g)})}),
    });
    WeatPartition part({make_word("x1", {std::cos(phi), std::sin(phi)}),
                        make_word("x2", {std::cos(phi), -std::sin(phi)})},
                       {make_word("y1", {-std::cos(phi), std::sin(phi)}),
                        make_word("y2", {-std::cos(phi), -std::sin(phi)})});
    return {"weat-opposed",
            "effect size reports 0 although every word has a nonzero association gap",
            std::move(family),
            std::move(part),
            {{"phi_deg", phi_deg},
             {"gap_deg", gap_deg},
             {"word_score_magnitude", 2.0 * std::sin(phi) * std::sin(g)},
             {"same_binary_set", std::sin(phi)}}};
}

// Four copies of one maximally leaning word: a strong uniform skew that the
// effect size cannot score at all (zero variance).
inline CounterexampleFixture weat_constant_scores_fixture() {
    Vec w{1.0, 0.0};
    AttributeFamily family({
        AttributeSet("plus", {make_word("a+", {1.0, 0.0})}),
        AttributeSet("minus", {make_word("a-", {0.0, 1.0})}),
    });
    WeatPartition part({make_word("x1", w), make_word("x2", w)},
                       {make_word("y1", w), make_word("y2", w)});
    return {"weat-constant",
            "uniformly skewed words leave the effect size undefined (degenerate variance)",
            std::move(family),
            std::move(part),
            {{"same_skew", 1.0 / std::sqrt(2.0)}}};
}

// The same configuration with a +-eps rotation inside each group: variance
// becomes positive, the skew stays near maximal, and the effect size is
// still blind to it.
inline CounterexampleFixture weat_constant_scores_perturbed_fixture(double eps_deg = 1.0) {
    if (eps_deg <= 0.0 || eps_deg >= 45.0)
        throw ValidationError("perturbed fixture: eps must be inside (0, 45) degrees");
    double e = detail::deg2rad(eps_deg);
    Vec up{std::cos(e), std::sin(e)};
    Vec down{std::cos(e), -std::sin(e)};
    AttributeFamily family({
        AttributeSet("plus", {make_word("a+", {1.0, 0.0})}),
        AttributeSet("minus", {make_word("a-", {0.0, 1.0})}),
    });
    WeatPartition part({make_word("x1", up), make_word("x2", down)},
                       {make_word("y1", up), make_word("y2", down)});
    return {"weat-constant-perturbed",
            "near-uniform skew: effect size stays near 0 while the mean leaning is near maximal",
            std::move(family),
            std::move(part),
            {{"eps_deg", eps_deg}}};
}

// Attribute set paired with its exact mirror: cosine distances to the two
// sets sum to 2 for every word, so the mean lands on the unbiased reading 1
// regardless of the targets.
inline CounterexampleFixture mac_antipodal_fixture() {
    Vec a{0.6, 0.8};
    AttributeFamily family({
        AttributeSet("plus", {make_word("a+", a)}),
        AttributeSet("minus", {make_word("a-", {-a[0], -a[1]})}),
    });
    TargetSet targets("probes", {make_word("t1", {1.0, 0.0}), make_word("t2", {0.0, 1.0}),
                                 make_word("t3", {-1.0, 0.0})});
    return {"mac-antipodal",
            "mirrored attribute sets pin the score to 1 for every target set, hiding both skew "
            "and stereotype",
            std::move(family),
            std::move(targets),
            {}};
}

// A target equidistant from both attribute words at 45 degrees: the value is
// 1 - cos(pi/4), nowhere near the metric's unbiased reading.
inline CounterexampleFixture mac_equidistant_fixture() {
    AttributeFamily family({
        AttributeSet("axis", {make_word("a1", {1.0, 0.0}), make_word("a2", {0.0, 1.0})}),
        AttributeSet("other", {make_word("b1", {-1.0, 0.0})}),
    });
    TargetSet targets("probes", {make_word("w", {1.0, 1.0})});
    return {"mac-equidistant",
            "a perfectly balanced word scores 1 - cos(pi/4), not the unbiased value",
            std::move(family),
            std::move(targets),
            {{"expected", 1.0 - std::cos(detail::deg2rad(45.0))}}};
}

// Defining pairs arranged so the top principal direction is orthogonal to
// the real association gap: the most strongly leaning word scores 0.
inline CounterexampleFixture direct_bias_neutral_fixture(double r = 2.0) {
    if (r <= 1.0)
        throw ValidationError("direct bias fixture: r must be > 1");
    AttributeFamily family({
        AttributeSet("left", {make_word("a1", {-1.0, r}), make_word("a2", {-1.0, -r})}),
        AttributeSet("right", {make_word("c1", {1.0, -r}), make_word("c2", {1.0, r})}),
    });
    TargetSet targets("probes", {make_word("aligned", {0.0, 5.0}), make_word("leaning", {1.0, 0.0})});
    return {"direct-bias-neutral",
            "the principal component tracks in-pair spread, scoring the most leaning word 0 and "
            "a neutral word 1",
            std::move(family),
            std::move(targets),
            {{"r", r}}};
}

// Defining sets for the fixture above: members of the two attribute sets
// zipped by position.
inline std::vector<DefiningSet> zip_defining_sets(const AttributeFamily& family) {
    if (family.size() != 2)
        throw ValidationError("zip defining sets: need exactly 2 attribute sets");
    const auto& a = family[0].members();
    const auto& b = family[1].members();
    if (a.size() != b.size())
        throw ValidationError("zip defining sets: attribute sets must have equal size");
    std::vector<DefiningSet> out;
    for (std::size_t i = 0; i < a.size(); ++i)
        out.push_back(DefiningSet({a[i], b[i]}));
    return out;
}

// ---- subset deviation bound ------------------------------------------------

// For any m-subset S of n values: |sum_{S}(x - mean)/stddev| <= sqrt(m(n-m)),
// with population stddev. Verified by full enumeration; |xs| capped at 12.
inline bool check_subset_deviation_bound(const std::vector<double>& xs, double tol = 1e-9) {
    std::size_t n = xs.size();
    if (n == 0 || n > 12)
        throw ValidationError("subset bound check: list size must be in [1, 12]");
    double mu = mean(xs);
    double sigma = population_stddev(xs);
    if (sigma <= 1e-15)
        throw DegenerateVariance("subset bound check: constant list");
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = (xs[i] - mu) / sigma;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        double sum = 0.0;
        std::size_t m = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ULL << i)) {
                sum += z[i];
                ++m;
            }
        double bound = std::sqrt(static_cast<double>(m) * static_cast<double>(n - m));
        if (std::abs(sum) > bound + tol) return false;
    }
    return true;
}

// The two-level list that attains the bound with equality: m entries above
// the mean, n-m below, spread so mean and stddev come out as requested.
// sign = +1 puts the selected m entries on the high side.
inline std::vector<double> two_level_list(std::size_t n, std::size_t m, double sign, double mu,
                                          double sigma) {
    if (n < 2 || m < 1 || m >= n)
        throw ValidationError("two level list: need 1 <= m < n, n >= 2");
    if (sigma <= 0.0)
        throw ValidationError("two level list: sigma must be positive");
    double nm = static_cast<double>(n - m);
    double md = static_cast<double>(m);
    std::vector<double> out;
    for (std::size_t i = 0; i < m; ++i) out.push_back(mu + sign * std::sqrt(nm / md) * sigma);
    for (std::size_t i = m; i < n; ++i) out.push_back(mu - sign * std::sqrt(md / nm) * sigma);
    return out;
}

// Largest |sum of (x - mean)/stddev| over subsets of size m, by enumeration.
inline double max_subset_deviation(const std::vector<double>& xs, std::size_t m) {
    std::size_t n = xs.size();
    if (n == 0 || n > 12 || m > n)
        throw ValidationError("max subset deviation: need m <= n <= 12");
    double mu = mean(xs);
    double sigma = population_stddev(xs);
    if (sigma <= 1e-15)
        throw DegenerateVariance("max subset deviation: constant list");
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) != m) continue;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ULL << i)) sum += (xs[i] - mu) / sigma;
        best = std::max(best, std::abs(sum));
    }
    return best;
}

// ---- definition checkers ---------------------------------------------------

// No pairwise association gap above eps.
inline bool is_word_unbiased(std::span<const double> w, const AttributeFamily& family,
                             double eps = 0.0) {
    std::vector<double> s;
    for (const auto& a : family.sets()) s.push_back(assoc(w, a));
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (std::abs(s[i] - s[j]) > eps) return false;
    return true;
}

// Some attribute set is preferred on average across the word list.
inline bool is_skewed(const std::vector<ResolvedWord>& words, const AttributeFamily& family,
                      double eps = 0.0) {
    std::vector<double> means(family.size(), 0.0);
    for (const auto& w : words)
        for (std::size_t i = 0; i < family.size(); ++i) means[i] += assoc(w.vector, family[i]);
    for (std::size_t i = 0; i < means.size(); ++i)
        for (std::size_t j = 0; j < means.size(); ++j)
            if (means[i] - means[j] > eps * static_cast<double>(words.size())) return true;
    return false;
}

// Two words disagree on some pairwise association gap.
inline bool has_stereotype(const std::vector<ResolvedWord>& words, const AttributeFamily& family,
                           double eps = 0.0) {
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            for (std::size_t a = 0; a < words.size(); ++a) {
                double ga = assoc(words[a].vector, family[i]) - assoc(words[a].vector, family[j]);
                for (std::size_t b = a + 1; b < words.size(); ++b) {
                    double gb =
                        assoc(words[b].vector, family[i]) - assoc(words[b].vector, family[j]);
                    if (std::abs(ga - gb) > eps) return true;
                }
            }
        }
    return false;
}

// ---- pairing paradox demo --------------------------------------------------

struct VarianceParadoxDemo {
    // six words, planted pairwise biases +-0.3 (two each) and +-0.9 (one each)
    std::vector<std::pair<std::string, double>> planted;
    double d_mild = 0.0;        // two mild positives vs two mild negatives
    double d_aligned = 0.0;     // positives vs negatives, mild + extreme each side
    double d_cancelling = 0.0;  // mild pair vs extreme pair, signs mixed within groups
    double same_aligned = 0.0;
    double same_cancelling = 0.0;
};

// How the effect size swings with the pairing of the same six words while
// the set bias stays put: the within-group variance, not the bias, drives d.
inline VarianceParadoxDemo variance_paradox_demo() {
    Vec g{1.0, 0.0, 0.0, 0.0};
    auto planted_word = [&](std::string name, double beta, std::size_t axis) {
        Vec w(4, 0.0);
        w[0] = beta;
        w[axis] = std::sqrt(1.0 - beta * beta);
        return make_word(std::move(name), std::move(w));
    };
    ResolvedWord mild_a = planted_word("mild+a", 0.3, 1);
    ResolvedWord mild_b = planted_word("mild+b", 0.3, 2);
    ResolvedWord mild_c = planted_word("mild-a", -0.3, 1);
    ResolvedWord mild_d = planted_word("mild-b", -0.3, 2);
    ResolvedWord ext_p = planted_word("extreme+", 0.9, 1);
    ResolvedWord ext_n = planted_word("extreme-", -0.9, 1);

    AttributeSet plus("plus", {make_word("a+", g)});
    AttributeSet minus("minus", {make_word("a-", {-1.0, 0.0, 0.0, 0.0})});

    VarianceParadoxDemo demo;
    for (const auto* w : {&mild_a, &mild_b, &ext_p, &mild_c, &mild_d, &ext_n})
        demo.planted.emplace_back(w->surface, same_pairwise(w->vector, plus, minus));

    WeatPartition mild({mild_a, mild_b}, {mild_c, mild_d});
    WeatPartition aligned({mild_a, ext_p}, {mild_c, ext_n});
    WeatPartition cancelling({mild_a, mild_c}, {ext_p, ext_n});
    demo.d_mild = weat_effect_size(mild, plus, minus);
    demo.d_aligned = weat_effect_size(aligned, plus, minus);
    demo.d_cancelling = weat_effect_size(cancelling, plus, minus);

    auto pool_of = [](const WeatPartition& p) {
        std::vector<ResolvedWord> pool = p.x();
        pool.insert(pool.end(), p.y().begin(), p.y().end());
        return pool;
    };
    demo.same_aligned = same_binary_set(pool_of(aligned), plus, minus);
    demo.same_cancelling = same_binary_set(pool_of(cancelling), plus, minus);
    return demo;
}

// Angle between the top principal direction and the normalized mean of the
// per-pair directions, folded into [0, 90] degrees.
inline double pca_vs_mean_direction_angle(const std::vector<DefiningSet>& sets) {
    BiasSubspace pca = subspace_pca(sets, 1);
    Vec mean_dir = mean_pair_direction(sets);
    return angle_degrees(pca.basis[0], mean_dir);
}

// ---- the runnable check table ----------------------------------------------

struct DiagnosticResult {
    std::string id;
    std::string claim;
    bool passed = false;
    std::string detail;
    std::vector<std::pair<std::string, double>> values;
};

namespace detail {

inline std::string fmt_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace detail

// Every engineered counterexample, evaluated. Each row re-derives the
// metric outputs from the fixture and checks them against the closed-form
// expectations; a thrown error fails the row unless the error is the point.
inline std::vector<DiagnosticResult> run_all_diagnostics() {
    std::vector<DiagnosticResult> rows;
    auto add = [&](DiagnosticResult r) { rows.push_back(std::move(r)); };

    {
        DiagnosticResult r{"T4",
                           "effect size returns 0 on mirrored target pairs although every word "
                           "has association gap 2*sin(phi)*sin(gap)",
                           false,
                           "",
                           {}};
        try {
            CounterexampleFixture fx = weat_opposed_fixture();
            const auto& part = std::get<WeatPartition>(fx.targets);
            const AttributeSet& a = fx.family[0];
            const AttributeSet& b = fx.family[1];
            double d = weat_effect_size(part, a, b);
            double expected_gap = fx.parameters[2].second;
            double min_gap = 1e300, max_gap = 0.0;
            std::vector<ResolvedWord> pool = part.x();
            pool.insert(pool.end(), part.y().begin(), part.y().end());
            for (const auto& w : pool) {
                double gap = std::abs(weat_word(w.vector, a, b));
                min_gap = std::min(min_gap, gap);
                max_gap = std::max(max_gap, gap);
            }
            double binary = same_binary_set(pool, a, b);
            double expected_binary = fx.parameters[3].second;
            r.values = {{"effect_size", d},
                        {"word_gap", min_gap},
                        {"expected_word_gap", expected_gap},
                        {"same_binary_set", binary}};
            r.passed = std::abs(d) < 1e-9 && std::abs(min_gap - expected_gap) < 1e-9 &&
                       std::abs(max_gap - expected_gap) < 1e-9 &&
                       std::abs(binary - expected_binary) < 1e-9;
            r.detail = "d = " + detail::fmt_value(d) + ", |word score| = " +
                       detail::fmt_value(min_gap) + ", set bias = " + detail::fmt_value(binary);
        } catch (const Error& e) {
            r.detail = e.what();
        }
        add(std::move(r));
    }

    {
        DiagnosticResult r{"T7a",
                           "uniform maximal skew: effect size raises degenerate-variance while "
                           "the mean pairwise bias is 1/sqrt(2)",
                           false,
                           "",
                           {}};
        try {
            CounterexampleFixture fx = weat_constant_scores_fixture();
            const auto& part = std::get<WeatPartition>(fx.targets);
            const AttributeSet& a = fx.family[0];
            const AttributeSet& b = fx.family[1];
            bool raised = false;
            try {
                (void)weat_effect_size(part, a, b);
            } catch (const DegenerateVariance&) {
                raised = true;
            }
            std::vector<ResolvedWord> pool = part.x();
            pool.insert(pool.end(), part.y().begin(), part.y().end());
            double skew = same_skew(pool, a, b);
            r.values = {{"degenerate_variance", raised ? 1.0 : 0.0}, {"same_skew", skew}};
            r.passed = raised && std::abs(skew - 1.0 / std::sqrt(2.0)) < 1e-8;
            r.detail = std::string("degenerate variance ") + (raised ? "raised" : "NOT raised") +
                       ", skew = " + detail::fmt_value(skew);
        } catch (const Error& e) {
            r.detail = e.what();
        }
        add(std::move(r));
    }

    {
        DiagnosticResult r{"T7b",
                           "slightly perturbed uniform skew: |d| < 0.05 while the mean pairwise "
                           "bias stays above 0.7",
                           false,
                           "",
                           {}};
        try {
            CounterexampleFixture fx = weat_constant_scores_perturbed_fixture();
            const auto& part = std::get<WeatPartition>(fx.targets);
            const AttributeSet& a = fx.family[0];
            const AttributeSet& b = fx.family[1];
            double d = weat_effect_size(part, a, b);
            std::vector<ResolvedWord> pool = part.x();
            pool.insert(pool.end(), part.y().begin(), part.y().end());
            double skew = same_skew(pool, a, b);
            double stereo = same_stereotype(pool, a, b);
            r.values = {{"effect_size", d}, {"same_skew", skew}, {"same_stereotype", stereo}};
            r.passed = std::abs(d) < 0.05 && skew > 0.7 && stereo < 0.02;
            r.detail = "d = " + detail::fmt_value(d) + ", skew = " + detail::fmt_value(skew) +
                       ", stereotype = " + detail::fmt_value(stereo);
        } catch (const Error& e) {
            r.detail = e.what();
        }
        add(std::move(r));
    }

    {
        DiagnosticResult r{"T8a",
                           "mirrored attribute sets force the mean-cosine-distance score to "
                           "exactly 1 whatever the targets",
                           false,
                           "",
                           {}};
        try {
            CounterexampleFixture fx = mac_antipodal_fixture();
            const auto& targets = std::get<TargetSet>(fx.targets);
            double v = mac(targets, fx.family);
            r.values = {{"mac", v}};
            r.passed = v == 1.0;
            r.detail = "mac = " + detail::fmt_value(v) + (v == 1.0 ? " (exact)" : " (not exact)");
        } catch (const Error& e) {
            r.detail = e.what();
        }
        add(std::move(r));
    }

    {
        DiagnosticResult r{"T8b",
                           "a target equidistant from both attribute words scores 1 - cos(pi/4), "
                           "far from the unbiased reading",
                           false,
                           "",
                           {}};
        try {
            CounterexampleFixture fx = mac_equidistant_fixture();
            const auto& targets = std::get<TargetSet>(fx.targets);
            double v = mac_word_set(targets.members()[0].vector, fx.family[0]);
            double expected = fx.parameters[0].second;
            r.values = {{"mac_word_set", v}, {"expected", expected}};
            r.passed = std::abs(v - expected) < 1e-12;
            r.detail = "value = " + detail::fmt_value(v) + ", expected = " +
                       detail::fmt_value(expected);
        } catch (const Error& e) {
            r.detail = e.what();
        }
        add(std::move(r));
    }

    {
        DiagnosticResult r{"T10",
                           "on mirrored attribute sets the mean-cosine-distance score neither "
                           "moves with skew nor with stereotype: targets leaning hard both ways "
                           "score the same 1",
                           false,
                           "",
                           {}};
        try {
            CounterexampleFixture fx = mac_antipodal_fixture();
            Vec a = fx.family[0].members()[0].vector;
            TargetSet skewed("skewed", {make_word("s1", a), make_word("s2", a)});
            TargetSet split("split", {make_word("p1", a), make_word("p2", {-a[0], -a[1]})});
            double v_skewed = mac(skewed, fx.family);
            double v_split = mac(split, fx.family);
            r.values = {{"mac_skewed", v_skewed}, {"mac_split", v_split}};
            r.passed = v_skewed == 1.0 && v_split == 1.0;
            r.detail = "skewed targets = " + detail::fmt_value(v_skewed) +
                       ", stereotyped targets = " + detail::fmt_value(v_split);
        } catch (const Error& e) {
            r.detail = e.what();
        }
        add(std::move(r));
    }

    {
        DiagnosticResult r{"T12",
                           "principal-component direction tracks in-pair spread: the most "
                           "leaning word scores 0, a neutral word scores 1",
                           false,
                           "",
                           {}};
        try {
            CounterexampleFixture fx = direct_bias_neutral_fixture();
            auto defining = zip_defining_sets(fx.family);
            BiasSubspace g = subspace_pca(defining, 1);
            const auto& targets = std::get<TargetSet>(fx.targets);
            double db_aligned = direct_bias({targets.members()[0]}, g, 1.0);
            double db_leaning = direct_bias({targets.members()[1]}, g, 1.0);
            double gap = std::abs(weat_word(targets.members()[1].vector, fx.family[0], fx.family[1]));
            r.values = {{"direct_bias_aligned", db_aligned},
                        {"direct_bias_leaning", db_leaning},
                        {"leaning_word_gap", gap}};
            r.passed = std::abs(db_aligned - 1.0) < 1e-9 && std::abs(db_leaning) < 1e-9 &&
                       gap > 0.1;
            r.detail = "aligned word = " + detail::fmt_value(db_aligned) + ", leaning word = " +
                       detail::fmt_value(db_leaning) + " (association gap " +
                       detail::fmt_value(gap) + ")";
        } catch (const Error& e) {
            r.detail = e.what();
        }
        add(std::move(r));
    }

    {
        DiagnosticResult r{"L1",
                           "subset deviation sums respect the sqrt(m(n-m)) bound and the "
                           "two-level construction attains it",
                           false,
                           "",
                           {}};
        try {
            bool ok = check_subset_deviation_bound({1.0, -1.0}) &&
                      check_subset_deviation_bound({3.0, 3.0, -1.0, -1.0, -1.0, -1.0}) &&
                      check_subset_deviation_bound({0.3, -2.0, 5.5, 1.1, 0.0, 4.2, -3.3});
            std::vector<double> attain = two_level_list(6, 2, 1.0, 1.0 / 3.0, 2.0);
            double reached = max_subset_deviation(attain, 2);
            double bound = std::sqrt(2.0 * 4.0);
            bool degenerate_raised = false;
            try {
                (void)check_subset_deviation_bound({5.0, 5.0, 5.0});
            } catch (const DegenerateVariance&) {
                degenerate_raised = true;
            }
            r.values = {{"attained", reached}, {"bound", bound}};
            r.passed = ok && std::abs(reached - bound) < 1e-9 && degenerate_raised;
            r.detail = "max subset deviation = " + detail::fmt_value(reached) + " vs bound " +
                       detail::fmt_value(bound);
        } catch (const Error& e) {
            r.detail = e.what();
        }
        add(std::move(r));
    }

    {
        DiagnosticResult r{"P1",
                           "re-pairing the same six words swings the effect size from 2 to 0 "
                           "while the set bias stays fixed",
                           false,
                           "",
                           {}};
        try {
            VarianceParadoxDemo demo = variance_paradox_demo();
            r.values = {{"d_mild", demo.d_mild},
                        {"d_aligned", demo.d_aligned},
                        {"d_cancelling", demo.d_cancelling},
                        {"same_aligned", demo.same_aligned},
                        {"same_cancelling", demo.same_cancelling}};
            r.passed = std::abs(demo.d_mild) > 1.5 && std::abs(demo.d_aligned) > 1.5 &&
                       std::abs(demo.d_cancelling) < 0.01 &&
                       std::abs(demo.same_aligned - demo.same_cancelling) < 1e-12;
            r.detail = "d: " + detail::fmt_value(demo.d_mild) + " / " +
                       detail::fmt_value(demo.d_aligned) + " / " +
                       detail::fmt_value(demo.d_cancelling) + "; set bias stays " +
                       detail::fmt_value(demo.same_aligned);
        } catch (const Error& e) {
            r.detail = e.what();
        }
        add(std::move(r));
    }

    {
        DiagnosticResult r{"A1",
                           "principal direction vs mean pair direction: 90 degrees apart on the "
                           "spread fixture, 0 on a single pair",
                           false,
                           "",
                           {}};
        try {
            CounterexampleFixture fx = direct_bias_neutral_fixture();
            double wide = pca_vs_mean_direction_angle(zip_defining_sets(fx.family));
            std::vector<DefiningSet> single;
            single.push_back(DefiningSet(
                {make_word("p", {0.3, 0.7}), make_word("q", {0.1, -0.2})}));
            double zero = pca_vs_mean_direction_angle(single);
            r.values = {{"angle_spread_fixture", wide}, {"angle_single_pair", zero}};
            r.passed = std::abs(wide - 90.0) < 1e-6 && zero < 1e-6;
            r.detail = "spread fixture = " + detail::fmt_value(wide) + " deg, single pair = " +
                       detail::fmt_value(zero) + " deg";
        } catch (const Error& e) {
            r.detail = e.what();
        }
        add(std::move(r));
    }

    return rows;
}

}

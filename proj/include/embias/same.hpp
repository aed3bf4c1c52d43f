#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "embias/direct_bias.hpp"
#include "embias/similarity.hpp"

namespace embias {

namespace detail {

inline constexpr double equal_centroid_eps = 1e-12;
inline constexpr double degenerate_direction_eps = 1e-10;

}  // namespace detail

// Signed association gap between w and two attribute sets, normalized by the
// centroid distance. Algebraically identical to cos(w, centroid_i -
// centroid_j), which pins the range to [-1, 1] and makes scores comparable
// across attribute pairs.
inline double same_pairwise(std::span<const double> w, const AttributeSet& ai,
                            const AttributeSet& aj) {
    Vec d = sub(ai.centroid(), aj.centroid());
    double dist = norm(d);
    if (dist < detail::equal_centroid_eps)
        throw EqualCentroids("same: attribute sets \"" + ai.name() + "\" and \"" + aj.name() +
                             "\" have coinciding centroids");
    return clamp_range((assoc(w, ai) - assoc(w, aj)) / dist, -1.0, 1.0);
}

// Mean magnitude of pairwise bias over a word list (two-set case).
inline double same_binary_set(const std::vector<ResolvedWord>& words, const AttributeSet& ai,
                              const AttributeSet& aj) {
    if (words.empty())
        throw ValidationError("same: empty word list");
    double s = 0.0;
    for (const auto& w : words) s += std::abs(same_pairwise(w.vector, ai, aj));
    return clamp_range(s / static_cast<double>(words.size()), 0.0, 1.0);
}

// Orthonormal basis spanning the centroid-difference directions against the
// family's first set, in family order. Directions whose Gram-Schmidt
// residual falls under a fixed threshold are dropped and recorded by family
// index; their information is already inside the span.
inline BiasSubspace same_subspace(const AttributeFamily& family) {
    std::size_t n = family.size();
    if (n > family.dim())
        throw ValidationError("same: " + std::to_string(n) + " attribute sets in dimension " +
                              std::to_string(family.dim()) +
                              "; need at most one set per dimension");
    BiasSubspace out;
    out.construction = SubspaceConstruction::same_gram_schmidt;
    const Vec& ref = family[0].centroid();
    for (std::size_t i = 1; i < n; ++i) {
        Vec d = sub(family[i].centroid(), ref);
        if (norm(d) < detail::equal_centroid_eps)
            throw EqualCentroids("same: attribute sets \"" + family[i].name() + "\" and \"" +
                                 family[0].name() + "\" have coinciding centroids");
        // modified Gram-Schmidt with one re-orthogonalization pass
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& b : out.basis) {
                double proj = dot(d, b);
                for (std::size_t t = 0; t < d.size(); ++t) d[t] -= proj * b[t];
            }
        double r = norm(d);
        if (r < detail::degenerate_direction_eps) {
            out.dropped_directions.push_back(i);
            continue;
        }
        for (double& x : d) x /= r;
        out.basis.push_back(std::move(d));
    }
    if (out.basis.empty())
        throw NumericError("same: all centroid-difference directions are degenerate");
    return out;
}

// Coordinates of w's normalized direction in the bias basis.
inline Vec same_bias_vector(std::span<const double> w, const BiasSubspace& subspace) {
    if (subspace.basis.empty())
        throw ValidationError("same: empty bias subspace");
    Vec out;
    out.reserve(subspace.basis.size());
    for (const Vec& b : subspace.basis) out.push_back(cosine(w, b));
    return out;
}

// Length of the bias vector: how much of w's direction lies in the bias
// subspace. Clamped into [0, 1].
inline double same_word(std::span<const double> w, const BiasSubspace& subspace) {
    return clamp_range(norm(same_bias_vector(w, subspace)), 0.0, 1.0);
}

inline double same_set(const std::vector<ResolvedWord>& words, const BiasSubspace& subspace) {
    if (words.empty())
        throw ValidationError("same: empty word list");
    double s = 0.0;
    for (const auto& w : words) s += same_word(w.vector, subspace);
    return clamp_range(s / static_cast<double>(words.size()), 0.0, 1.0);
}

// Signed mean of pairwise biases: direction of the leaning, in [-1, 1].
inline double same_skew(const std::vector<ResolvedWord>& words, const AttributeSet& ai,
                        const AttributeSet& aj) {
    if (words.empty())
        throw ValidationError("same: empty word list");
    double s = 0.0;
    for (const auto& w : words) s += same_pairwise(w.vector, ai, aj);
    return clamp_range(s / static_cast<double>(words.size()), -1.0, 1.0);
}

enum class StereotypeMode {
    population_stddev,  // spread of pairwise biases around the skew; range [0, 1]
    rss_over_n,         // root-sum-of-squares scaled by 1/|W| (= stddev / sqrt(|W|))
};

inline double same_stereotype(const std::vector<ResolvedWord>& words, const AttributeSet& ai,
                              const AttributeSet& aj,
                              StereotypeMode mode = StereotypeMode::population_stddev) {
    if (words.empty())
        throw ValidationError("same: empty word list");
    std::vector<double> biases;
    biases.reserve(words.size());
    for (const auto& w : words) biases.push_back(same_pairwise(w.vector, ai, aj));
    double skew = mean(biases);
    double ss = 0.0;
    for (double b : biases) ss += (b - skew) * (b - skew);
    double n = static_cast<double>(words.size());
    if (mode == StereotypeMode::population_stddev)
        return clamp_range(std::sqrt(ss / n), 0.0, 1.0);
    return clamp_range(std::sqrt(ss) / n, 0.0, 1.0);
}

struct SamePairStats {
    std::size_t i = 0;
    std::size_t j = 0;
    std::string set_i;
    std::string set_j;
    double skew = 0.0;
    double stereotype = 0.0;
};

struct SameOneVsRestStats {
    std::size_t i = 0;
    std::string set_name;
    double skew = 0.0;
    double stereotype = 0.0;
};

struct SameReport {
    double same_set = 0.0;
    std::vector<std::pair<std::string, double>> word_magnitudes;
    std::vector<SamePairStats> pairwise;
    StereotypeMode stereotype_mode = StereotypeMode::population_stddev;
    std::vector<std::size_t> dropped_directions;
    std::string reference_set;
    // cosines between the spanning directions (centroid_i - centroid_0),
    // informational: how strongly the family's bias directions correlate
    std::vector<std::vector<double>> direction_cosines;
    std::optional<std::vector<SameOneVsRestStats>> one_vs_rest;
};

// Full multi-set report: per-word magnitudes over the family subspace plus
// skew/stereotype for every unordered set pair, optionally each set against
// the pooled rest.
inline SameReport same_pairwise_report(const std::vector<ResolvedWord>& words,
                                       const AttributeFamily& family,
                                       StereotypeMode mode = StereotypeMode::population_stddev,
                                       bool one_vs_rest = false) {
    if (words.empty())
        throw ValidationError("same: empty word list");
    BiasSubspace subspace = same_subspace(family);

    SameReport rep;
    rep.stereotype_mode = mode;
    rep.dropped_directions = subspace.dropped_directions;
    rep.reference_set = family[0].name();

    double total = 0.0;
    for (const auto& w : words) {
        double mag = same_word(w.vector, subspace);
        rep.word_magnitudes.emplace_back(w.surface, mag);
        total += mag;
    }
    rep.same_set = clamp_range(total / static_cast<double>(words.size()), 0.0, 1.0);

    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            SamePairStats st;
            st.i = i;
            st.j = j;
            st.set_i = family[i].name();
            st.set_j = family[j].name();
            st.skew = same_skew(words, family[i], family[j]);
            st.stereotype = same_stereotype(words, family[i], family[j], mode);
            rep.pairwise.push_back(std::move(st));
        }

    std::vector<Vec> directions;
    for (std::size_t i = 1; i < family.size(); ++i)
        directions.push_back(sub(family[i].centroid(), family[0].centroid()));
    rep.direction_cosines.assign(directions.size(), std::vector<double>(directions.size(), 1.0));
    for (std::size_t i = 0; i < directions.size(); ++i)
        for (std::size_t j = 0; j < directions.size(); ++j)
            rep.direction_cosines[i][j] = cosine(directions[i], directions[j]);

    if (one_vs_rest) {
        std::vector<SameOneVsRestStats> rows;
        for (std::size_t i = 0; i < family.size(); ++i) {
            std::vector<ResolvedWord> pooled;
            for (std::size_t j = 0; j < family.size(); ++j)
                if (j != i)
                    for (const auto& m : family[j].members()) pooled.push_back(m);
            AttributeSet rest("rest-of-family", std::move(pooled));
            SameOneVsRestStats row;
            row.i = i;
            row.set_name = family[i].name();
            row.skew = same_skew(words, family[i], rest);
            row.stereotype = same_stereotype(words, family[i], rest, mode);
            rows.push_back(std::move(row));
        }
        rep.one_vs_rest = std::move(rows);
    }
    return rep;
}

}

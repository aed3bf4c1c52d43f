#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "embias/similarity.hpp"
#include "embias/vec.hpp"

namespace embias {

// Words that differ (ideally) only in the protected concept. The mean is
// over raw vectors; residuals against it carry the concept's variation.
class DefiningSet {
public:
    explicit DefiningSet(std::vector<ResolvedWord> members) : members_(std::move(members)) {
        if (members_.size() < 2)
            throw ValidationError("defining set needs at least 2 members");
        std::size_t dim = members_[0].vector.size();
        mean_.assign(dim, 0.0);
        for (const auto& m : members_) {
            if (m.vector.size() != dim)
                throw ValidationError("defining set: mixed dimensions");
            for (std::size_t i = 0; i < dim; ++i) mean_[i] += m.vector[i];
        }
        for (double& x : mean_) x /= static_cast<double>(members_.size());
    }

    const std::vector<ResolvedWord>& members() const { return members_; }
    const Vec& mean() const { return mean_; }
    std::size_t dim() const { return mean_.size(); }

private:
    std::vector<ResolvedWord> members_;
    Vec mean_;
};

enum class SubspaceConstruction { word_pair, pca, same_gram_schmidt };

struct BiasSubspace {
    std::vector<Vec> basis;  // orthonormal
    SubspaceConstruction construction = SubspaceConstruction::word_pair;
    std::size_t pca_k = 0;
    std::vector<double> explained_variance;         // pca only: eigenvalue / total variance
    std::vector<std::size_t> dropped_directions;    // gram-schmidt only: family indices
};

inline BiasSubspace direction_from_pair(std::span<const double> a, std::span<const double> b) {
    Vec d = sub(a, b);
    if (norm(d) <= 0.0)
        throw NumericError("direction_from_pair: identical vectors");
    BiasSubspace s;
    s.basis.push_back(normalized(d));
    s.construction = SubspaceConstruction::word_pair;
    return s;
}

namespace detail {

// Orientation convention so eigenvector signs are reproducible: the
// largest-magnitude component (first such index on ties) is made positive.
inline void orient_largest_positive(Vec& v) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    if (v[arg] < 0.0)
        for (double& x : v) x = -x;
}

}  // namespace detail

// Top-k directions of the pooled residual second-moment matrix, by power
// iteration with deflation. Residuals are centered per defining set and not
// re-normalized. Deterministic: fixed start vector, fixed tolerances.
inline BiasSubspace subspace_pca(const std::vector<DefiningSet>& sets, std::size_t k) {
    if (sets.empty())
        throw ValidationError("pca: no defining sets");
    std::size_t dim = sets[0].dim();
    for (const auto& s : sets)
        if (s.dim() != dim)
            throw ValidationError("pca: defining sets have mixed dimensions");
    if (k < 1 || k > dim)
        throw ValidationError("pca: k must be in [1, dim]");

    std::vector<Vec> residuals;
    for (const auto& s : sets)
        for (const auto& m : s.members()) residuals.push_back(sub(m.vector, s.mean()));

    // d x d second-moment matrix of the residuals
    std::vector<Vec> m(dim, Vec(dim, 0.0));
    for (const auto& r : residuals)
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) m[i][j] += r[i] * r[j];

    double total_variance = 0.0;
    for (std::size_t i = 0; i < dim; ++i) total_variance += m[i][i];
    const double rank_floor = 1e-10 * (total_variance > 0.0 ? total_variance : 1.0);

    constexpr double tol = 1e-12;
    constexpr int max_iterations = 10000;

    BiasSubspace out;
    out.construction = SubspaceConstruction::pca;
    out.pca_k = k;

    for (std::size_t comp = 0; comp < k; ++comp) {
        // first standard basis vector, perturbed so an eigenvector exactly
        // orthogonal to e0 cannot stall the iteration
        Vec v(dim, 0.0);
        v[0] = 1.0;
        for (std::size_t i = 1; i < dim; ++i) v[i] = 1e-4 / static_cast<double>(i + 1);
        v = normalized(v);

        double lambda = 0.0;
        bool converged = false;
        for (int it = 0; it < max_iterations; ++it) {
            Vec w(dim, 0.0);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j) w[i] += m[i][j] * v[j];
            lambda = norm(w);
            if (lambda < rank_floor)
                throw NumericError("pca: k = " + std::to_string(k) +
                                   " exceeds the residual rank of " + std::to_string(comp));
            for (double& x : w) x /= lambda;
            double drift = 0.0;
            for (std::size_t i = 0; i < dim; ++i)
                drift += (w[i] - v[i]) * (w[i] - v[i]);
            v = std::move(w);
            if (std::sqrt(drift) < tol) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw NumericError("pca: power iteration did not converge for component " +
                               std::to_string(comp + 1));
        if (lambda < rank_floor)
            throw NumericError("pca: k = " + std::to_string(k) +
                               " exceeds the residual rank of " + std::to_string(comp));

        detail::orient_largest_positive(v);
        out.explained_variance.push_back(total_variance > 0.0 ? lambda / total_variance : 0.0);

        // deflate: m -= lambda v v^T
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) m[i][j] -= lambda * v[i] * v[j];
        out.basis.push_back(std::move(v));
    }
    return out;
}

// Mean absolute cosine (raised to c) between target words and a single bias
// direction. 0 reads as unbiased, 1 as fully aligned.
inline double direct_bias(const std::vector<ResolvedWord>& words, const BiasSubspace& subspace,
                          double c = 1.0) {
    if (words.empty())
        throw ValidationError("direct bias: empty word list");
    if (subspace.basis.size() != 1)
        throw ValidationError("direct bias: needs a 1-dimensional bias subspace");
    if (c < 0.0)
        throw ValidationError("direct bias: strictness c must be >= 0");
    const Vec& g = subspace.basis[0];
    double s = 0.0;
    for (const auto& w : words) s += std::pow(std::abs(cosine(w.vector, g)), c);
    return clamp_range(s / static_cast<double>(words.size()), 0.0, 1.0);
}

// Per-word direct bias against a single direction, before averaging.
inline double direct_bias_word(std::span<const double> w, const BiasSubspace& subspace,
                               double c = 1.0) {
    if (subspace.basis.size() != 1)
        throw ValidationError("direct bias: needs a 1-dimensional bias subspace");
    if (c < 0.0)
        throw ValidationError("direct bias: strictness c must be >= 0");
    return std::pow(std::abs(cosine(w, subspace.basis[0])), c);
}

// Normalized mean of the per-pair difference directions (first member minus
// second). The alternative to PCA when every defining set is a literal pair.
inline Vec mean_pair_direction(const std::vector<DefiningSet>& sets) {
    if (sets.empty())
        throw ValidationError("mean pair direction: no defining sets");
    std::size_t dim = sets[0].dim();
    Vec sum(dim, 0.0);
    for (const auto& s : sets) {
        if (s.members().size() != 2)
            throw ValidationError("mean pair direction: every defining set must be a pair");
        Vec d = sub(s.members()[0].vector, s.members()[1].vector);
        double n = norm(d);
        if (n <= 0.0)
            throw NumericError("mean pair direction: a pair has identical members");
        for (std::size_t i = 0; i < dim; ++i) sum[i] += d[i] / n;
    }
    if (norm(sum) <= 0.0)
        throw NumericError("mean pair direction: pair directions cancel");
    for (double& x : sum) x /= static_cast<double>(sets.size());
    return normalized(sum);
}

// Angle between two directions folded into [0, 90] degrees (sign of either
// vector is irrelevant for a subspace comparison).
inline double angle_degrees(std::span<const double> u, std::span<const double> v) {
    double c = std::abs(cosine(u, v));
    return std::acos(clamp_range(c, 0.0, 1.0)) * (180.0 / 3.14159265358979323846);
}

}

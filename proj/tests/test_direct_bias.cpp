// bias directions: word pairs, PCA over defining sets, direct bias scores

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "embias/direct_bias.hpp"
#include "embias/rng.hpp"

using namespace embias;

namespace {

ResolvedWord rw(const std::string& name, Vec v) {
    return ResolvedWord{name, std::move(v), Resolution::direct};
}

DefiningSet pair_set(Vec a, Vec b) {
    return DefiningSet({rw("p", std::move(a)), rw("q", std::move(b))});
}

// dense symmetric second-moment matrix of pooled residuals, for checking
// eigenpairs independently of the power iteration
std::vector<Vec> moment_matrix(const std::vector<DefiningSet>& sets) {
    std::size_t d = sets[0].dim();
    std::vector<Vec> m(d, Vec(d, 0.0));
    for (const auto& set : sets)
        for (const auto& w : set.members())
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    m[i][j] += (w.vector[i] - set.mean()[i]) * (w.vector[j] - set.mean()[j]);
    return m;
}

}  // namespace

TEST_CASE("defining sets use the raw mean") {
    DefiningSet ds = pair_set({1.0, 3.0}, {3.0, 1.0});
    REQUIRE(ds.mean() == Vec{2.0, 2.0});
    REQUIRE(ds.members().size() == 2);
    REQUIRE_THROWS_AS(DefiningSet({rw("only", {1.0, 0.0})}), ValidationError);
    REQUIRE_THROWS_AS(DefiningSet({rw("a", {1.0, 0.0}), rw("b", {1.0, 0.0, 0.0})}),
                      ValidationError);
}

TEST_CASE("direction from a word pair") {
    BiasSubspace s = direction_from_pair(Vec{1.0, 0.0}, Vec{0.0, 1.0});
    REQUIRE(s.construction == SubspaceConstruction::word_pair);
    REQUIRE(s.basis.size() == 1);
    REQUIRE(std::abs(s.basis[0][0] - 0.7071067811865475) < 1e-15);
    REQUIRE(std::abs(s.basis[0][1] + 0.7071067811865475) < 1e-15);
    REQUIRE_THROWS_AS(direction_from_pair(Vec{1.0, 0.0}, Vec{1.0, 0.0}), NumericError);
}

TEST_CASE("pca on the spread fixture") {
    // residuals lie on the y axis after centering each pair
    std::vector<DefiningSet> sets = {pair_set({-1.0, 2.0}, {1.0, -2.0}),
                                     pair_set({-1.0, -2.0}, {1.0, 2.0})};
    BiasSubspace s = subspace_pca(sets, 1);
    REQUIRE(s.construction == SubspaceConstruction::pca);
    REQUIRE(s.basis.size() == 1);
    REQUIRE(std::abs(s.basis[0][0] - 0.0) < 1e-12);
    REQUIRE(std::abs(s.basis[0][1] - 1.0) < 1e-12);
    REQUIRE(std::abs(s.explained_variance[0] - 0.8) < 1e-12);

    BiasSubspace both = subspace_pca(sets, 2);
    REQUIRE(both.basis.size() == 2);
    REQUIRE(std::abs(both.explained_variance[0] - 0.8) < 1e-12);
    REQUIRE(std::abs(both.explained_variance[1] - 0.2) < 1e-12);
    REQUIRE(std::abs(dot(both.basis[0], both.basis[1])) < 1e-10);
}

TEST_CASE("pca sign convention: largest component positive") {
    std::vector<DefiningSet> sets = {pair_set({3.0, -1.0}, {-3.0, 1.0})};
    BiasSubspace s = subspace_pca(sets, 1);
    REQUIRE(std::abs(s.basis[0][0] - 0.9486832980505138) < 1e-12);
    REQUIRE(std::abs(s.basis[0][1] + 0.31622776601683794) < 1e-12);
}

TEST_CASE("pca eigenpairs verified against the moment matrix") {
    SplitMix64 rng(86);
    for (int rep = 0; rep < 50; ++rep) {
        std::size_t dim = 3 + rng.next_below(4);
        std::size_t n_sets = 2 + rng.next_below(3);
        std::vector<DefiningSet> sets;
        std::size_t rank_bound = 0;  // residuals of an m-member set span at most m - 1 dims
        for (std::size_t i = 0; i < n_sets; ++i) {
            std::vector<ResolvedWord> members;
            std::size_t m = 2 + rng.next_below(3);
            rank_bound += m - 1;
            for (std::size_t j = 0; j < m; ++j) {
                Vec v(dim);
                for (auto& x : v) x = rng.next_gaussian();
                if (norm(v) < 1e-9) v[0] += 1.0;
                members.push_back(rw("m" + std::to_string(i) + "_" + std::to_string(j), v));
            }
            sets.push_back(DefiningSet(members));
        }
        std::size_t k = 1 + rng.next_below(std::min({std::size_t{3}, dim, rank_bound}));
        BiasSubspace s = subspace_pca(sets, k);
        REQUIRE(s.basis.size() == k);

        std::vector<Vec> m = moment_matrix(sets);
        double trace = 0.0;
        for (std::size_t i = 0; i < dim; ++i) trace += m[i][i];

        for (std::size_t c = 0; c < k; ++c) {
            REQUIRE(std::abs(norm(s.basis[c]) - 1.0) < 1e-10);
            for (std::size_t c2 = 0; c2 < c; ++c2)
                REQUIRE(std::abs(dot(s.basis[c], s.basis[c2])) < 1e-9);
            // M v = lambda v, with lambda recovered from the variance ratio
            double lambda = s.explained_variance[c] * trace;
            Vec mv(dim, 0.0);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j) mv[i] += m[i][j] * s.basis[c][j];
            double resid = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                double diff = mv[i] - lambda * s.basis[c][i];
                resid += diff * diff;
            }
            REQUIRE(std::sqrt(resid) < 1e-7 * std::max(1.0, lambda));
        }
        // components come out in decreasing variance order
        for (std::size_t c = 1; c < k; ++c)
            REQUIRE(s.explained_variance[c] <= s.explained_variance[c - 1] + 1e-12);
    }
}

TEST_CASE("pca validation and rank errors") {
    std::vector<DefiningSet> sets = {pair_set({1.0, 0.0}, {0.0, 1.0})};
    REQUIRE_THROWS_AS(subspace_pca({}, 1), ValidationError);
    REQUIRE_THROWS_AS(subspace_pca(sets, 0), ValidationError);
    REQUIRE_THROWS_AS(subspace_pca(sets, 3), ValidationError);  // k > dim

    // identical members leave zero residual variance: no direction exists
    std::vector<DefiningSet> flat = {pair_set({1.0, 2.0}, {1.0, 2.0})};
    REQUIRE_THROWS_AS(subspace_pca(flat, 1), NumericError);

    // rank 1 data cannot produce 2 components
    std::vector<DefiningSet> rank1 = {pair_set({1.0, 1.0}, {-1.0, -1.0})};
    REQUIRE_THROWS_AS(subspace_pca(rank1, 2), NumericError);
}

TEST_CASE("direct bias scores") {
    std::vector<DefiningSet> sets = {pair_set({-1.0, 2.0}, {1.0, -2.0}),
                                     pair_set({-1.0, -2.0}, {1.0, 2.0})};
    BiasSubspace dir = subspace_pca(sets, 1);  // y axis

    SECTION("aligned and orthogonal words hit the extremes") {
        REQUIRE(std::abs(direct_bias({rw("up", {0.0, 5.0})}, dir, 1.0) - 1.0) < 1e-12);
        REQUIRE(std::abs(direct_bias({rw("flat", {1.0, 0.0})}, dir, 1.0) - 0.0) < 1e-12);
        double both = direct_bias({rw("up", {0.0, 5.0}), rw("flat", {1.0, 0.0})}, dir, 1.0);
        REQUIRE(std::abs(both - 0.5) < 1e-12);
    }
    SECTION("strictness exponent") {
        std::vector<ResolvedWord> w45 = {rw("diag", {1.0, 1.0})};
        REQUIRE(std::abs(direct_bias(w45, dir, 2.0) - 0.5) < 1e-12);
        REQUIRE(direct_bias(w45, dir, 0.0) == 1.0);  // |cos|^0 counts every word fully
    }
    SECTION("validation") {
        REQUIRE_THROWS_AS(direct_bias({}, dir, 1.0), ValidationError);
        REQUIRE_THROWS_AS(direct_bias({rw("w", {1.0, 0.0})}, dir, -0.5), ValidationError);
        BiasSubspace wide = subspace_pca(sets, 2);
        REQUIRE_THROWS_AS(direct_bias({rw("w", {1.0, 0.0})}, wide, 1.0), ValidationError);
    }
    SECTION("range under fuzz") {
        SplitMix64 rng(11);
        for (int rep = 0; rep < 200; ++rep) {
            Vec v(2);
            v[0] = rng.next_gaussian();
            v[1] = rng.next_gaussian();
            if (norm(v) < 1e-9) v[0] += 1.0;
            double b = direct_bias_word(v, dir, 0.5 + rng.next_double() * 3.0);
            REQUIRE(b >= 0.0);
            REQUIRE(b <= 1.0);
        }
    }
}

TEST_CASE("mean pair direction") {
    std::vector<DefiningSet> one = {pair_set({-1.0, 2.0}, {1.0, -2.0})};
    Vec d1 = mean_pair_direction(one);
    REQUIRE(std::abs(d1[0] + 0.4472135954999579) < 1e-12);
    REQUIRE(std::abs(d1[1] - 0.8944271909999159) < 1e-12);

    std::vector<DefiningSet> two = {pair_set({-1.0, 2.0}, {1.0, -2.0}),
                                    pair_set({-1.0, -2.0}, {1.0, 2.0})};
    Vec d2 = mean_pair_direction(two);
    REQUIRE(std::abs(d2[0] + 1.0) < 1e-12);
    REQUIRE(std::abs(d2[1]) < 1e-12);

    REQUIRE_THROWS_AS(mean_pair_direction({}), ValidationError);
    REQUIRE_THROWS_AS(
        mean_pair_direction({DefiningSet(
            {rw("a", {1.0, 0.0}), rw("b", {0.0, 1.0}), rw("c", {0.0, -1.0})})}),
        ValidationError);
    REQUIRE_THROWS_AS(mean_pair_direction({pair_set({1.0, 0.0}, {1.0, 0.0})}), NumericError);
    // opposite pairs cancel to the zero vector
    REQUIRE_THROWS_AS(mean_pair_direction(
                          {pair_set({1.0, 0.0}, {0.0, 1.0}), pair_set({0.0, 1.0}, {1.0, 0.0})}),
                      NumericError);
}

TEST_CASE("angles fold into [0, 90]") {
    REQUIRE(std::abs(angle_degrees(Vec{1.0, 0.0}, Vec{0.0, 1.0}) - 90.0) < 1e-12);
    REQUIRE(std::abs(angle_degrees(Vec{1.0, 0.0}, Vec{1.0, 0.0})) < 1e-6);
    REQUIRE(std::abs(angle_degrees(Vec{1.0, 0.0}, Vec{-1.0, 0.0})) < 1e-6);
    REQUIRE(std::abs(angle_degrees(Vec{1.0, 1.0}, Vec{1.0, 0.0}) - 45.0) < 1e-12);
}

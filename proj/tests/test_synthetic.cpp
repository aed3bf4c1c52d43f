// planted-bias spaces, the measurement grid, and the robustness probes

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "embias/synthetic.hpp"

using namespace embias;

namespace {

SyntheticSpec small_spec(double mu = 0.5, double sigma = 0.15, double noise = 0.0,
                         std::uint64_t seed = 3) {
    SyntheticSpec spec;
    spec.dim = 8;
    spec.n_words = 48;
    spec.mu = mu;
    spec.sigma = sigma;
    spec.noise = noise;
    spec.seed = seed;
    return spec;
}

}  // namespace

TEST_CASE("spec validation") {
    auto bad = [](auto mutate) {
        SyntheticSpec spec;
        mutate(spec);
        REQUIRE_THROWS_AS(generate(spec), ValidationError);
    };
    bad([](SyntheticSpec& s) { s.dim = 2; });
    bad([](SyntheticSpec& s) { s.n_words = 1; });
    bad([](SyntheticSpec& s) { s.n_words = 10000; });
    bad([](SyntheticSpec& s) { s.mu = -0.1; });
    bad([](SyntheticSpec& s) { s.mu = 1.1; });
    bad([](SyntheticSpec& s) { s.sigma = 0.0; });
    bad([](SyntheticSpec& s) { s.noise = -1e-9; });
}

TEST_CASE("generated space structure") {
    SyntheticSpec spec = small_spec();
    SyntheticSpace s = generate(spec);

    REQUIRE(s.words.size() == spec.n_words);
    REQUIRE(s.planted.size() == spec.n_words);
    REQUIRE(s.residuals.size() == spec.n_words);
    REQUIRE(s.words.front().surface == "w0000");
    REQUIRE(s.words.back().surface == "w0047");
    REQUIRE(s.space.dim() == spec.dim);
    REQUIRE(std::abs(norm(s.axis) - 1.0) < 1e-12);

    for (std::size_t k = 0; k < spec.n_words; ++k) {
        REQUIRE(std::abs(norm(s.words[k].vector) - 1.0) < 1e-12);
        REQUIRE(std::abs(dot(s.residuals[k], s.axis)) < 1e-10);
        REQUIRE(s.planted[k] >= -1.0);
        REQUIRE(s.planted[k] <= 1.0);
        // the planted score is exactly the word's coordinate along the axis
        REQUIRE(std::abs(dot(s.words[k].vector, s.axis) - s.planted[k]) < 1e-12);
    }

    SECTION("noiseless attribute sets recover the planted scores") {
        for (std::size_t k = 0; k < spec.n_words; ++k)
            REQUIRE(std::abs(same_pairwise(s.words[k].vector, s.family[0], s.family[1]) -
                             s.planted[k]) < 1e-12);
    }
    SECTION("same spec, same space") {
        SyntheticSpace again = generate(spec);
        for (std::size_t k = 0; k < spec.n_words; ++k)
            REQUIRE(again.words[k].vector == s.words[k].vector);
        REQUIRE(again.planted == s.planted);
    }
    SECTION("attribute words are registered in the space") {
        REQUIRE(norm(s.space.vector_of("attr+")) > 0.0);
        REQUIRE(norm(s.space.vector_of("attr-")) > 0.0);
    }
}

TEST_CASE("seed streams are separable") {
    SyntheticSpec s1 = small_spec(0.5, 0.15, 0.0, 1);
    SyntheticSpec s2 = small_spec(0.5, 0.15, 0.0, 2);
    SyntheticSpace a = generate(s1);
    SyntheticSpace b = generate(s2);
    REQUIRE(a.planted != b.planted);
    REQUIRE(a.axis != b.axis);

    SECTION("pinning the plant seed freezes the scores across base seeds") {
        SyntheticSpec s3 = s2;
        s3.plant_seed = derive_seed(s1.seed, detail::plant_tag);
        SyntheticSpace c = generate(s3);
        REQUIRE(c.planted == a.planted);
        REQUIRE(c.axis == b.axis);  // geometry still follows seed 2
    }
    SECTION("attribute noise has its own stream") {
        SyntheticSpec n1 = small_spec(0.5, 0.15, 0.1, 5);
        SyntheticSpec n2 = n1;
        n2.attribute_seed = derive_seed(99, detail::attribute_tag);
        SyntheticSpace x = generate(n1);
        SyntheticSpace y = generate(n2);
        for (std::size_t k = 0; k < x.words.size(); ++k)
            REQUIRE(x.words[k].vector == y.words[k].vector);
        REQUIRE(x.family[0].centroid() != y.family[0].centroid());
    }
    SECTION("noiseless generation leaves the attribute stream untouched") {
        SyntheticSpec n0 = small_spec();
        SyntheticSpec n0_other = n0;
        n0_other.attribute_seed = 777;
        SyntheticSpace x = generate(n0);
        SyntheticSpace y = generate(n0_other);
        REQUIRE(x.family[0].centroid() == y.family[0].centroid());
    }
}

TEST_CASE("squared correlation") {
    REQUIRE(std::abs(r2(std::vector<double>{0.0, 1.0, 2.0}, std::vector<double>{0.0, 1.0, 1.0}) -
                     0.75) < 1e-15);

    SECTION("perfect lines score 1 regardless of slope sign") {
        std::vector<double> xs = {1.0, 2.0, 5.0, -3.0};
        std::vector<double> up, down;
        for (double x : xs) {
            up.push_back(2.0 * x + 1.0);
            down.push_back(-0.5 * x + 3.0);
        }
        REQUIRE(std::abs(r2(xs, up) - 1.0) < 1e-12);
        REQUIRE(std::abs(r2(xs, down) - 1.0) < 1e-12);
    }
    SECTION("affine invariance") {
        SplitMix64 rng(2024);
        std::vector<double> xs, ys;
        for (int i = 0; i < 20; ++i) {
            xs.push_back(rng.next_gaussian());
            ys.push_back(rng.next_gaussian());
        }
        double base = r2(xs, ys);
        std::vector<double> xs2, ys2;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            xs2.push_back(-3.0 * xs[i] + 7.0);
            ys2.push_back(0.25 * ys[i] - 2.0);
        }
        REQUIRE(std::abs(r2(xs2, ys2) - base) < 1e-12);
    }
    SECTION("degenerate inputs") {
        std::vector<double> flat = {4.0, 4.0, 4.0};
        std::vector<double> live = {0.0, 1.0, 2.0};
        REQUIRE_THROWS_AS(r2(flat, live), UndefinedCorrelation);
        REQUIRE_THROWS_AS(r2(live, flat), UndefinedCorrelation);
        REQUIRE_THROWS_AS(r2(live, std::vector<double>{1.0}), UndefinedCorrelation);
        REQUIRE_THROWS_AS(r2(std::vector<double>{1.0}, std::vector<double>{1.0}),
                          UndefinedCorrelation);
    }
}

TEST_CASE("correlation experiment at zero noise") {
    SyntheticSpace s = generate(small_spec());
    CorrelationReport rep = correlation_experiment(s);

    // pairwise bias is exactly the planted score here, so the fit is perfect
    REQUIRE(rep.r2_same_weat.has_value());
    REQUIRE(std::abs(*rep.r2_same_weat - 1.0) < 1e-9);

    // |cos| varies across words, the correlation exists (if weakly)
    REQUIRE(rep.r2_direct_bias.has_value());

    // antipodal attribute sets pin every distance score to 1: no variance
    REQUIRE(!rep.r2_mac.has_value());
}

TEST_CASE("grid cells share word-level streams at fixed rep") {
    GridSpec grid;
    grid.mu_values = {0.3, 0.6};
    grid.sigma_values = {0.1, 0.2};
    grid.reps = 2;
    grid.dim = 8;
    grid.n_words = 24;
    grid.base_seed = 11;

    SyntheticSpec c00 = grid_cell_spec(grid, 0, 0, 1);
    SyntheticSpec c11 = grid_cell_spec(grid, 1, 1, 1);
    REQUIRE(c00.plant_seed == c11.plant_seed);
    REQUIRE(c00.geometry_seed == c11.geometry_seed);
    REQUIRE(c00.attribute_seed != c11.attribute_seed);
    REQUIRE(c00.mu == 0.3);
    REQUIRE(c11.sigma == 0.2);

    SyntheticSpec other_rep = grid_cell_spec(grid, 0, 0, 0);
    REQUIRE(other_rep.plant_seed != c00.plant_seed);

    // shared streams mean shared geometry: only the planted scores differ
    SyntheticSpace a = generate(c00);
    SyntheticSpace b = generate(c11);
    REQUIRE(a.axis == b.axis);
    REQUIRE(a.residuals == b.residuals);
    REQUIRE(a.planted != b.planted);
}

TEST_CASE("grid experiment") {
    GridSpec grid;
    grid.mu_values = {0.4, 0.6};
    grid.sigma_values = {0.1, 0.2};
    grid.reps = 2;
    grid.dim = 8;
    grid.n_words = 24;
    grid.base_seed = 7;

    GridReport one = grid_experiment(grid, 1);
    REQUIRE(one.rows.size() == 2 * 2 * 2 * 10);
    REQUIRE(one.rows.front().mu == 0.4);
    REQUIRE(one.rows.front().sigma == 0.1);
    REQUIRE(one.rows.front().rep == 0);

    SECTION("thread count never changes a row") {
        GridReport four = grid_experiment(grid, 4);
        REQUIRE(four.rows.size() == one.rows.size());
        for (std::size_t i = 0; i < one.rows.size(); ++i) {
            REQUIRE(four.rows[i].metric == one.rows[i].metric);
            REQUIRE(four.rows[i].mu == one.rows[i].mu);
            REQUIRE(four.rows[i].sigma == one.rows[i].sigma);
            REQUIRE(four.rows[i].rep == one.rows[i].rep);
            REQUIRE(four.rows[i].value == one.rows[i].value);
            REQUIRE(four.rows[i].status == one.rows[i].status);
        }
    }
    SECTION("one-sided planted signs are reported as skipped") {
        GridSpec onesided = grid;
        onesided.mu_values = {0.99};
        onesided.sigma_values = {0.01};
        GridReport rep = grid_experiment(onesided, 1);
        bool saw_skip = false;
        for (const auto& row : rep.rows)
            if (row.metric == "weat_effect_size") {
                REQUIRE(row.status == "skipped");
                saw_skip = true;
            }
        REQUIRE(saw_skip);
    }
    SECTION("empty grid axes are rejected") {
        GridSpec broken = grid;
        broken.mu_values.clear();
        REQUIRE_THROWS_AS(grid_experiment(broken, 1), ValidationError);
        broken = grid;
        broken.reps = 0;
        REQUIRE_THROWS_AS(grid_experiment(broken, 1), ValidationError);
    }
}

TEST_CASE("leaning shift leaves the effect size fixed") {
    MuShiftCheck check = weat_mu_shift_check(small_spec(0.5, 0.15, 0.0, 3));
    REQUIRE(check.delta != 0.0);
    REQUIRE(std::abs(check.delta) <= 0.05);
    REQUIRE(std::abs(check.d_base - check.d_shifted) < 1e-9);

    SyntheticSpec noisy = small_spec(0.5, 0.15, 0.1, 3);
    REQUIRE_THROWS_AS(weat_mu_shift_check(noisy), ValidationError);
}

TEST_CASE("metric helpers") {
    REQUIRE(std::string(metric_name(MetricId::weat_effect_size)) == "weat_effect_size");
    REQUIRE(std::string(metric_name(MetricId::same_stereotype)) == "same_stereotype");
    REQUIRE(metric_interval(MetricId::weat_effect_size) == 4.0);
    REQUIRE(metric_interval(MetricId::mac) == 2.0);
    REQUIRE(metric_interval(MetricId::same_skew) == 2.0);
    REQUIRE(metric_interval(MetricId::same_set) == 1.0);
    REQUIRE(metric_interval(MetricId::direct_bias) == 1.0);
}

TEST_CASE("subset robustness") {
    SyntheticSpace s = generate(small_spec(0.5, 0.2, 0.05, 9));

    RobustnessResult r = subset_robustness(s, MetricId::same_set, 50, 1);
    REQUIRE(r.used + r.skipped == 50);
    REQUIRE(r.used > 0);
    REQUIRE(r.value >= 0.0);

    SECTION("deterministic under a fixed seed") {
        RobustnessResult again = subset_robustness(s, MetricId::same_set, 50, 1);
        REQUIRE(again.value == r.value);
        RobustnessResult shifted = subset_robustness(s, MetricId::same_set, 50, 2);
        REQUIRE(shifted.value != r.value);
    }
    SECTION("input validation") {
        REQUIRE_THROWS_AS(subset_robustness(s, MetricId::same_set, 0, 1), ValidationError);
        SyntheticSpec tiny = small_spec();
        tiny.n_words = 3;
        REQUIRE_THROWS_AS(subset_robustness(generate(tiny), MetricId::same_set, 10, 1),
                          ValidationError);
    }
    SECTION("one-sided plants cannot feed the effect size at all") {
        SyntheticSpace onesided = generate(small_spec(0.99, 0.01, 0.0, 4));
        REQUIRE_THROWS_AS(subset_robustness(onesided, MetricId::weat_effect_size, 10, 1),
                          NumericError);
    }
}

TEST_CASE("rerun stability") {
    SyntheticSpec spec = small_spec(0.5, 0.2, 0.05, 13);
    StabilityReport rep = rerun_stability(spec, 3);
    REQUIRE(rep.weat >= 0.0);
    REQUIRE(rep.same >= 0.0);
    REQUIRE(rep.direct_bias >= 0.0);
    REQUIRE(rep.mac >= 0.0);

    StabilityReport again = rerun_stability(spec, 3);
    REQUIRE(again.weat == rep.weat);
    REQUIRE(again.same == rep.same);

    REQUIRE_THROWS_AS(rerun_stability(spec, 1), ValidationError);
}

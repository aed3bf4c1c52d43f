// vec, rng and similarity primitives

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "embias/rng.hpp"
#include "embias/similarity.hpp"
#include "embias/vec.hpp"

using namespace embias;

namespace {

ResolvedWord rw(const char* name, Vec v) {
    return ResolvedWord{name, std::move(v), Resolution::direct};
}

}  // namespace

TEST_CASE("vector primitives") {
    Vec a{3.0, 4.0};
    REQUIRE(dot(a, a) == 25.0);
    REQUIRE(norm(a) == 5.0);
    Vec u = normalized(a);
    REQUIRE(std::abs(u[0] - 0.6) < 1e-15);
    REQUIRE(std::abs(u[1] - 0.8) < 1e-15);

    Vec s = sub(Vec{1.0, 2.0}, Vec{0.5, 0.25});
    REQUIRE(s == Vec{0.5, 1.75});
    Vec t = add(Vec{1.0, 2.0}, Vec{0.5, 0.25});
    REQUIRE(t == Vec{1.5, 2.25});
    REQUIRE(scaled(Vec{1.0, -2.0}, 2.0) == Vec{2.0, -4.0});

    REQUIRE(mean(Vec{1.0, 2.0, 3.0}) == 2.0);
    REQUIRE(population_stddev(Vec{0.5, -0.5}) == 0.5);
    // divisor is n, not n-1
    REQUIRE(std::abs(population_stddev(Vec{1.0, 2.0, 3.0}) - std::sqrt(2.0 / 3.0)) < 1e-15);

    REQUIRE(clamp_range(1.0 + 1e-16, 0.0, 1.0) == 1.0);
    REQUIRE(clamp_range(-2.5, -2.0, 2.0) == -2.0);
    REQUIRE(clamp_range(0.25, 0.0, 1.0) == 0.25);
}

TEST_CASE("splitmix64 reference stream") {
    // canonical splitmix64 outputs for seed 0
    SplitMix64 rng(0);
    REQUIRE(rng.next_u64() == 0xE220A8397B1DCDAFULL);
    REQUIRE(rng.next_u64() == 0x6E789E6AA1B965F4ULL);
    REQUIRE(rng.next_u64() == 0x06C45D188009454FULL);

    SplitMix64 rng42(42);
    REQUIRE(rng42.next_u64() == 0xBDD732262FEB6E95ULL);

    SplitMix64 d(0);
    REQUIRE(d.next_double() == 0.8833108082136426);

    SplitMix64 g(0);
    REQUIRE(g.next_gaussian() == -0.452757740217458);
    REQUIRE(g.next_gaussian() == 0.20776603893419193);  // cached second value

    REQUIRE(derive_seed(0, 0) == 0xE220A8397B1DCDAFULL);
    REQUIRE(derive_seed(7, 3) == 0x953AEB70673E29CBULL);
    REQUIRE(derive_seed(1, 2, 3) == derive_seed(derive_seed(1, 2), 3));
    REQUIRE(derive_seed(1, 2, 3, 4) == derive_seed(derive_seed(1, 2, 3), 4));
}

TEST_CASE("splitmix64 derived draws") {
    SECTION("next_double stays in [0,1)") {
        SplitMix64 rng(123);
        for (int i = 0; i < 10000; ++i) {
            double x = rng.next_double();
            REQUIRE(x >= 0.0);
            REQUIRE(x < 1.0);
        }
    }
    SECTION("next_below covers every residue without bias artifacts") {
        SplitMix64 rng(9);
        std::set<std::uint64_t> seen;
        for (int i = 0; i < 1000; ++i) {
            std::uint64_t v = rng.next_below(7);
            REQUIRE(v < 7);
            seen.insert(v);
        }
        REQUIRE(seen.size() == 7);
    }
    SECTION("gaussian moments are sane") {
        SplitMix64 rng(2024);
        double sum = 0.0, sumsq = 0.0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) {
            double x = rng.next_gaussian();
            sum += x;
            sumsq += x * x;
        }
        double m = sum / n;
        double var = sumsq / n - m * m;
        REQUIRE(std::abs(m) < 0.02);
        REQUIRE(std::abs(var - 1.0) < 0.05);
    }
    SECTION("same seed, same stream") {
        SplitMix64 a(77), b(77);
        for (int i = 0; i < 100; ++i) REQUIRE(a.next_gaussian() == b.next_gaussian());
    }
}

TEST_CASE("cosine") {
    REQUIRE(cosine(Vec{1.0, 1.0}, Vec{1.0, 0.0}) == 0.7071067811865475);
    REQUIRE(cosine(Vec{1.0, 0.0}, Vec{1.0, 0.0}) == 1.0);
    REQUIRE(cosine(Vec{1.0, 0.0}, Vec{-1.0, 0.0}) == -1.0);
    REQUIRE(cosine(Vec{1.0, 0.0}, Vec{0.0, 3.0}) == 0.0);
    // scale invariance
    REQUIRE(std::abs(cosine(Vec{2.0, 4.0}, Vec{0.5, 0.25}) -
                     cosine(Vec{1.0, 2.0}, Vec{2.0, 1.0})) < 1e-15);

    REQUIRE_THROWS_AS(cosine(Vec{1.0, 0.0}, Vec{1.0, 0.0, 0.0}), NumericError);
    REQUIRE_THROWS_AS(cosine(Vec{0.0, 0.0}, Vec{1.0, 0.0}), NumericError);

    SECTION("clamped into [-1, 1] even when rounding overshoots") {
        SplitMix64 rng(5);
        for (int i = 0; i < 2000; ++i) {
            Vec v(7), w(7);
            for (int k = 0; k < 7; ++k) {
                v[k] = rng.next_gaussian() * 1e3;
                w[k] = v[k] * 1e-3;  // parallel up to rounding
            }
            double c = cosine(v, w);
            REQUIRE(c >= -1.0);
            REQUIRE(c <= 1.0);
        }
    }
}

TEST_CASE("attribute sets and association") {
    AttributeSet a("A", {rw("p", {0.0, 1.0})});
    REQUIRE(a.name() == "A");
    REQUIRE(std::abs(assoc(Vec{3.0, 4.0}, a) - 0.8) < 1e-15);

    SECTION("centroid averages unit-normalized members") {
        AttributeSet two("two", {rw("x", {2.0, 0.0}), rw("y", {0.0, 2.0})});
        REQUIRE(std::abs(two.centroid()[0] - 0.5) < 1e-15);
        REQUIRE(std::abs(two.centroid()[1] - 0.5) < 1e-15);
    }
    SECTION("association equals mean of member cosines") {
        SplitMix64 rng(31);
        for (int rep = 0; rep < 200; ++rep) {
            std::vector<ResolvedWord> members;
            int m = 1 + static_cast<int>(rng.next_below(5));
            for (int i = 0; i < m; ++i) {
                Vec v(4);
                for (auto& x : v) x = rng.next_gaussian();
                if (norm(v) < 1e-6) v[0] += 1.0;
                members.push_back(rw("m", v));
            }
            Vec w(4);
            for (auto& x : w) x = rng.next_gaussian();
            if (norm(w) < 1e-6) w[0] += 1.0;
            AttributeSet set("S", members);
            double expect = 0.0;
            for (const auto& mem : members) expect += cosine(w, mem.vector);
            expect /= m;
            REQUIRE(std::abs(assoc(w, set) - expect) < 1e-12);
        }
    }
    SECTION("validation") {
        REQUIRE_THROWS_AS(AttributeSet("empty", {}), ValidationError);
        REQUIRE_THROWS_AS(AttributeSet("zero", {rw("z", {0.0, 0.0})}), NumericError);
    }
}

TEST_CASE("attribute families") {
    AttributeSet a("A", {rw("a", {1.0, 0.0})});
    AttributeSet b("B", {rw("b", {0.0, 1.0})});
    AttributeFamily fam({a, b});
    REQUIRE(fam.size() == 2);
    REQUIRE(fam[0].name() == "A");  // declaration order is meaningful
    REQUIRE(fam[1].name() == "B");

    REQUIRE_THROWS_AS(AttributeFamily({a}), ValidationError);
    REQUIRE_THROWS_AS(AttributeFamily({a, a}), ValidationError);  // duplicate names
    AttributeSet c3("C", {rw("c", {0.0, 1.0, 0.0})});
    REQUIRE_THROWS_AS(AttributeFamily({a, c3}), ValidationError);  // dim mismatch
}

TEST_CASE("target sets") {
    TargetSet t("jobs", {rw("nurse", {1.0, 2.0})});
    REQUIRE(t.name() == "jobs");
    REQUIRE(t.members().size() == 1);
    REQUIRE_THROWS_AS(TargetSet("none", {}), ValidationError);
}

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "embias/diagnostics.hpp"
#include "embias/direct_bias.hpp"
#include "embias/embedding.hpp"
#include "embias/mac.hpp"
#include "embias/rng.hpp"
#include "embias/same.hpp"
#include "embias/weat.hpp"

namespace embias {

// Planted-bias embedding: each word k gets bias beta_k = 2p_k - 1 with
// p_k ~ Normal(mu, sigma) clipped to [0, 1], and the word vector is
// beta_k * g + sqrt(1 - beta_k^2) * u_k with u_k a unit residual
// orthogonal to the unit bias axis g.
struct SyntheticSpec {
    std::size_t dim = 32;
    std::size_t n_words = 258;
    double mu = 0.5;
    double sigma = 0.1;
    double noise = 0.0;  // scale of the Gaussian perturbation on the attribute vectors
    std::uint64_t seed = 0;
    // Draw streams are separable so sweeps can share some draws and vary
    // others (defaults derive from seed with the tags below).
    std::optional<std::uint64_t> plant_seed;
    std::optional<std::uint64_t> geometry_seed;
    std::optional<std::uint64_t> attribute_seed;
};

namespace detail {

inline constexpr std::uint64_t plant_tag = 1;
inline constexpr std::uint64_t geometry_tag = 2;
inline constexpr std::uint64_t attribute_tag = 3;

inline void validate(const SyntheticSpec& spec) {
    if (spec.dim < 3)
        throw ValidationError("synthetic: dim must be >= 3");
    if (spec.n_words < 2 || spec.n_words > 9999)
        throw ValidationError("synthetic: n_words must be in [2, 9999]");
    if (spec.mu < 0.0 || spec.mu > 1.0)
        throw ValidationError("synthetic: mu must be in [0, 1]");
    if (spec.sigma <= 0.0)
        throw ValidationError("synthetic: sigma must be positive");
    if (spec.noise < 0.0)
        throw ValidationError("synthetic: noise must be >= 0");
}

inline Vec gaussian_vec(SplitMix64& rng, std::size_t dim) {
    Vec v(dim);
    for (double& x : v) x = rng.next_gaussian();
    return v;
}

inline Vec random_unit(SplitMix64& rng, std::size_t dim) {
    for (;;) {
        Vec v = gaussian_vec(rng, dim);
        if (norm(v) > 1e-8) return normalized(v);
    }
}

// unit vector orthogonal to g
inline Vec random_unit_orthogonal(SplitMix64& rng, std::span<const double> g) {
    for (;;) {
        Vec v = gaussian_vec(rng, g.size());
        double proj = dot(v, g);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * g[i];
        if (norm(v) > 1e-8) return normalized(v);
    }
}

}  // namespace detail

struct SyntheticSpace {
    SyntheticSpec spec;
    EmbeddingSpace space;
    std::vector<ResolvedWord> words;      // index order, named w0000...
    std::vector<double> planted;          // beta_k
    Vec axis;                             // g
    std::vector<Vec> residuals;           // u_k
    AttributeFamily family;               // {plus, minus}
};

inline SyntheticSpace generate(const SyntheticSpec& spec) {
    detail::validate(spec);
    std::uint64_t plant_seed = spec.plant_seed.value_or(derive_seed(spec.seed, detail::plant_tag));
    std::uint64_t geom_seed =
        spec.geometry_seed.value_or(derive_seed(spec.seed, detail::geometry_tag));
    std::uint64_t attr_seed =
        spec.attribute_seed.value_or(derive_seed(spec.seed, detail::attribute_tag));

    SplitMix64 plant(plant_seed);
    SplitMix64 geom(geom_seed);
    SplitMix64 attr(attr_seed);

    Vec g = detail::random_unit(geom, spec.dim);

    std::vector<double> planted(spec.n_words);
    for (double& beta : planted) {
        double p = spec.mu + spec.sigma * plant.next_gaussian();
        p = clamp_range(p, 0.0, 1.0);
        beta = 2.0 * p - 1.0;
    }

    EmbeddingSpace space(spec.dim, CasePolicy::exact, "synthetic");
    std::vector<ResolvedWord> words;
    std::vector<Vec> residuals;
    char name[32];
    for (std::size_t k = 0; k < spec.n_words; ++k) {
        Vec u = detail::random_unit_orthogonal(geom, g);
        double beta = planted[k];
        double rest = std::sqrt(std::max(0.0, 1.0 - beta * beta));
        Vec w(spec.dim);
        for (std::size_t i = 0; i < spec.dim; ++i) w[i] = beta * g[i] + rest * u[i];
        std::snprintf(name, sizeof name, "w%04zu", k);  // n_words capped at 9999
        space.add(name, w);
        words.push_back(ResolvedWord{name, std::move(w), Resolution::direct});
        residuals.push_back(std::move(u));
    }

    Vec a = g;
    Vec b = scaled(g, -1.0);
    if (spec.noise > 0.0) {
        for (;;) {
            Vec eta = detail::gaussian_vec(attr, spec.dim);
            Vec eta2 = detail::gaussian_vec(attr, spec.dim);
            a = g;
            b = scaled(g, -1.0);
            for (std::size_t i = 0; i < spec.dim; ++i) {
                a[i] += spec.noise * eta[i];
                b[i] += spec.noise * eta2[i];
            }
            if (norm(a) < 1e-8 || norm(b) < 1e-8) continue;
            if (norm(sub(normalized(a), normalized(b))) < 1e-10) continue;  // coinciding centroids
            break;
        }
    }
    space.add("attr+", a);
    space.add("attr-", b);

    AttributeFamily family({
        AttributeSet("plus", {ResolvedWord{"attr+", a, Resolution::direct}}),
        AttributeSet("minus", {ResolvedWord{"attr-", b, Resolution::direct}}),
    });

    return SyntheticSpace{spec,    std::move(space),     std::move(words), std::move(planted),
                          std::move(g), std::move(residuals), std::move(family)};
}

// ---- squared Pearson correlation --------------------------------------------

// Variance below ~1e-10 of the value scale means the inputs are constant up
// to rounding; correlating rounding noise is meaningless, so it errors.
inline double r2(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw UndefinedCorrelation("r2: length mismatch");
    if (xs.size() < 2)
        throw UndefinedCorrelation("r2: need at least 2 points");
    double mx = mean(xs);
    double my = mean(ys);
    double sxx = 0.0, syy = 0.0, sxy = 0.0, scale_x = 0.0, scale_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
        sxy += (xs[i] - mx) * (ys[i] - my);
        scale_x = std::max(scale_x, std::abs(xs[i]));
        scale_y = std::max(scale_y, std::abs(ys[i]));
    }
    double n = static_cast<double>(xs.size());
    if (sxx / n <= 1e-20 * std::max(1.0, scale_x * scale_x))
        throw UndefinedCorrelation("r2: xs variance is zero");
    if (syy / n <= 1e-20 * std::max(1.0, scale_y * scale_y))
        throw UndefinedCorrelation("r2: ys variance is zero");
    double r = sxy / std::sqrt(sxx * syy);
    return clamp_range(r * r, 0.0, 1.0);
}

// ---- per-word metric scores --------------------------------------------------

namespace detail {

inline BiasSubspace pca_direction_of(const SyntheticSpace& s) {
    return subspace_pca(zip_defining_sets(s.family), 1);
}

inline double mac_word(const SyntheticSpace& s, std::span<const double> w) {
    double total = 0.0;
    for (const auto& a : s.family.sets()) total += mac_word_set(w, a);
    return total / static_cast<double>(s.family.size());
}

}  // namespace detail

// R^2 between each metric's word scores and the planted biases. The
// normalized pairwise score and the raw association gap are exact scalar
// multiples, so they share one entry. Entries are absent when the word
// scores are constant (correlation undefined).
struct CorrelationReport {
    std::optional<double> r2_same_weat;
    std::optional<double> r2_direct_bias;
    std::optional<double> r2_mac;
};

inline CorrelationReport correlation_experiment(const SyntheticSpace& s) {
    const AttributeSet& plus = s.family[0];
    const AttributeSet& minus = s.family[1];
    std::vector<double> same_scores, db_scores, mac_scores;
    BiasSubspace dir = detail::pca_direction_of(s);
    for (const auto& w : s.words) {
        same_scores.push_back(same_pairwise(w.vector, plus, minus));
        db_scores.push_back(direct_bias_word(w.vector, dir, 1.0));
        mac_scores.push_back(detail::mac_word(s, w.vector));
    }
    CorrelationReport rep;
    auto try_r2 = [&](const std::vector<double>& ys) -> std::optional<double> {
        try {
            return r2(ys, s.planted);
        } catch (const UndefinedCorrelation&) {
            return std::nullopt;
        }
    };
    rep.r2_same_weat = try_r2(same_scores);
    rep.r2_direct_bias = try_r2(db_scores);
    rep.r2_mac = try_r2(mac_scores);
    return rep;
}

// ---- balanced sign partition --------------------------------------------------

namespace detail {

// X = planted-nonnegative words, Y = planted-negative, truncated in index
// order to equal sizes. Empty side leaves nothing to partition.
inline std::optional<WeatPartition> balanced_sign_partition(const SyntheticSpace& s,
                                                            const std::vector<std::size_t>& idx) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i : idx)
        (s.planted[i] >= 0.0 ? pos : neg).push_back(i);
    std::size_t m = std::min(pos.size(), neg.size());
    if (m == 0) return std::nullopt;
    std::vector<ResolvedWord> x, y;
    for (std::size_t i = 0; i < m; ++i) {
        x.push_back(s.words[pos[i]]);
        y.push_back(s.words[neg[i]]);
    }
    return WeatPartition(std::move(x), std::move(y));
}

inline std::vector<std::size_t> all_indices(const SyntheticSpace& s) {
    std::vector<std::size_t> idx(s.words.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return idx;
}

}  // namespace detail

// ---- grid experiment -----------------------------------------------------------

struct GridSpec {
    std::vector<double> mu_values;
    std::vector<double> sigma_values;
    std::size_t reps = 5;
    std::size_t dim = 32;
    std::size_t n_words = 258;
    double noise = 0.0;
    std::uint64_t base_seed = 0;
};

inline GridSpec default_grid() {
    GridSpec g;
    for (int i = 0; i <= 10; ++i) g.mu_values.push_back(0.25 + 0.05 * i);
    for (int j = 0; j <= 5; ++j) g.sigma_values.push_back(0.10 + 0.05 * j);
    return g;
}

struct GridRow {
    double mu = 0.0;
    double sigma = 0.0;
    std::size_t rep = 0;
    std::string metric;
    double value = 0.0;
    std::string status;  // ok | skipped | degenerate
};

struct GridReport {
    GridSpec spec;
    std::vector<GridRow> rows;
};

// Cell spec for grid position (i, j, rep). Word-level draws (planted
// probabilities, residual directions) are shared across the whole grid at a
// fixed rep, so mu sweeps at fixed sigma (and vice versa) see common random
// numbers; only attribute noise is cell-specific.
inline SyntheticSpec grid_cell_spec(const GridSpec& grid, std::size_t i, std::size_t j,
                                    std::size_t rep) {
    SyntheticSpec spec;
    spec.dim = grid.dim;
    spec.n_words = grid.n_words;
    spec.mu = grid.mu_values[i];
    spec.sigma = grid.sigma_values[j];
    spec.noise = grid.noise;
    spec.seed = grid.base_seed;
    spec.plant_seed = derive_seed(grid.base_seed, detail::plant_tag, rep);
    spec.geometry_seed = derive_seed(grid.base_seed, detail::geometry_tag, rep);
    spec.attribute_seed = derive_seed(derive_seed(grid.base_seed, detail::attribute_tag, i, j), rep);
    return spec;
}

namespace detail {

inline void grid_cell_rows(const GridSpec& grid, std::size_t i, std::size_t j, std::size_t rep,
                           std::vector<GridRow>& out) {
    SyntheticSpace s = generate(grid_cell_spec(grid, i, j, rep));
    double mu = grid.mu_values[i];
    double sigma = grid.sigma_values[j];
    auto push = [&](const std::string& metric, double value, const std::string& status) {
        out.push_back(GridRow{mu, sigma, rep, metric, value, status});
    };
    auto guarded = [&](const std::string& metric, auto fn) {
        try {
            push(metric, fn(), "ok");
        } catch (const NumericError&) {
            push(metric, 0.0, "degenerate");
        }
    };

    const AttributeSet& plus = s.family[0];
    const AttributeSet& minus = s.family[1];
    guarded("same_skew", [&] { return same_skew(s.words, plus, minus); });
    guarded("same_stereotype", [&] { return same_stereotype(s.words, plus, minus); });
    guarded("same_set", [&] { return same_set(s.words, same_subspace(s.family)); });
    guarded("mac", [&] { return mac(TargetSet("words", s.words), s.family); });
    guarded("direct_bias", [&] { return direct_bias(s.words, pca_direction_of(s), 1.0); });

    auto part = balanced_sign_partition(s, all_indices(s));
    if (!part) {
        push("weat_effect_size", 0.0, "skipped");
    } else {
        try {
            push("weat_effect_size", weat_effect_size(*part, plus, minus), "ok");
        } catch (const NumericError&) {
            push("weat_effect_size", 0.0, "degenerate");
        }
    }

    double absolute = 0.0;
    for (double beta : s.planted) absolute += std::abs(beta);
    push("absolute_bias", absolute / 2.0, "ok");

    CorrelationReport corr = correlation_experiment(s);
    auto push_r2 = [&](const std::string& name, const std::optional<double>& v) {
        if (v)
            push(name, *v, "ok");
        else
            push(name, 0.0, "degenerate");
    };
    push_r2("r2_same_weat", corr.r2_same_weat);
    push_r2("r2_direct_bias", corr.r2_direct_bias);
    push_r2("r2_mac", corr.r2_mac);
}

}  // namespace detail

// Runs every (mu, sigma, rep) cell. Cells are pure functions of the grid
// spec and their indices, so the thread count changes wall time only, never
// a row.
inline GridReport grid_experiment(const GridSpec& grid, unsigned threads = 1) {
    if (grid.mu_values.empty() || grid.sigma_values.empty() || grid.reps == 0)
        throw ValidationError("grid: mu values, sigma values and reps must be nonempty");
    std::size_t n_cells = grid.mu_values.size() * grid.sigma_values.size() * grid.reps;
    std::vector<std::vector<GridRow>> cell_rows(n_cells);

    auto run_cell = [&](std::size_t cell) {
        std::size_t rep = cell % grid.reps;
        std::size_t j = (cell / grid.reps) % grid.sigma_values.size();
        std::size_t i = cell / (grid.reps * grid.sigma_values.size());
        detail::grid_cell_rows(grid, i, j, rep, cell_rows[cell]);
    };

    if (threads <= 1) {
        for (std::size_t c = 0; c < n_cells; ++c) run_cell(c);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                std::size_t c = next.fetch_add(1);
                if (c >= n_cells) return;
                run_cell(c);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    GridReport rep;
    rep.spec = grid;
    for (auto& rows : cell_rows)
        for (auto& r : rows) rep.rows.push_back(std::move(r));
    return rep;
}

// ---- mu-shift invariance check ---------------------------------------------

struct MuShiftCheck {
    double delta = 0.0;    // applied shift, in planted-score units
    double d_base = 0.0;
    double d_shifted = 0.0;
};

// Shifts every planted score by a constant small enough to keep all scores
// in [-1, 1] and every sign unchanged, rebuilds the words on the same axis
// and residuals, and evaluates the effect size on the same partition. A
// pure leaning shift moves every word score equally, so d must not move.
inline MuShiftCheck weat_mu_shift_check(const SyntheticSpec& spec) {
    if (spec.noise != 0.0)
        throw ValidationError("mu shift check: requires noise = 0");
    SyntheticSpace base = generate(spec);

    double up_room = 1.0, down_room = 1.0;
    for (double beta : base.planted) {
        if (beta >= 0.0) {
            up_room = std::min(up_room, 1.0 - beta);
            down_room = std::min(down_room, beta);
        } else {
            up_room = std::min(up_room, -beta);
            down_room = std::min(down_room, 1.0 + beta);
        }
    }
    double delta = 0.0;
    if (up_room >= down_room)
        delta = 0.5 * std::min(0.1, up_room);
    else
        delta = -0.5 * std::min(0.1, down_room);

    auto part_base = detail::balanced_sign_partition(base, detail::all_indices(base));
    if (!part_base)
        throw NumericError("mu shift check: one-sided planted signs, no partition");

    // same words, same geometry, shifted planted scores
    std::vector<ResolvedWord> shifted_words;
    for (std::size_t k = 0; k < base.words.size(); ++k) {
        double beta = base.planted[k] + delta;
        double rest = std::sqrt(std::max(0.0, 1.0 - beta * beta));
        Vec w(spec.dim);
        for (std::size_t i = 0; i < spec.dim; ++i)
            w[i] = beta * base.axis[i] + rest * base.residuals[k][i];
        shifted_words.push_back(ResolvedWord{base.words[k].surface, std::move(w),
                                             Resolution::direct});
    }
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < base.planted.size(); ++i)
        (base.planted[i] >= 0.0 ? pos : neg).push_back(i);
    std::size_t m = std::min(pos.size(), neg.size());
    std::vector<ResolvedWord> xs, ys;
    for (std::size_t i = 0; i < m; ++i) {
        xs.push_back(shifted_words[pos[i]]);
        ys.push_back(shifted_words[neg[i]]);
    }
    WeatPartition part_shifted(std::move(xs), std::move(ys));

    MuShiftCheck out;
    out.delta = delta;
    out.d_base = weat_effect_size(*part_base, base.family[0], base.family[1]);
    out.d_shifted = weat_effect_size(part_shifted, base.family[0], base.family[1]);
    return out;
}

// ---- subset robustness -------------------------------------------------------

enum class MetricId { weat_effect_size, mac, direct_bias, same_set, same_skew, same_stereotype };

inline const char* metric_name(MetricId m) {
    switch (m) {
        case MetricId::weat_effect_size: return "weat_effect_size";
        case MetricId::mac: return "mac";
        case MetricId::direct_bias: return "direct_bias";
        case MetricId::same_set: return "same_set";
        case MetricId::same_skew: return "same_skew";
        case MetricId::same_stereotype: return "same_stereotype";
    }
    return "?";
}

// Length of the metric's score interval, for cross-metric comparability.
inline double metric_interval(MetricId m) {
    switch (m) {
        case MetricId::weat_effect_size: return 4.0;
        case MetricId::mac: return 2.0;
        case MetricId::same_skew: return 2.0;
        default: return 1.0;
    }
}

struct RobustnessResult {
    double value = 0.0;      // mean |subset - full| / interval length
    std::size_t used = 0;
    std::size_t skipped = 0;
};

namespace detail {

inline double eval_metric(const SyntheticSpace& s, MetricId metric,
                          const std::vector<std::size_t>& idx, const BiasSubspace& db_dir,
                          const BiasSubspace& same_dir) {
    const AttributeSet& plus = s.family[0];
    const AttributeSet& minus = s.family[1];
    std::vector<ResolvedWord> words;
    words.reserve(idx.size());
    for (std::size_t i : idx) words.push_back(s.words[i]);
    switch (metric) {
        case MetricId::weat_effect_size: {
            auto part = balanced_sign_partition(s, idx);
            if (!part)
                throw NumericError("one-sided subset");
            return weat_effect_size(*part, plus, minus);
        }
        case MetricId::mac:
            return mac(TargetSet("subset", words), s.family);
        case MetricId::direct_bias:
            return direct_bias(words, db_dir, 1.0);
        case MetricId::same_set:
            return same_set(words, same_dir);
        case MetricId::same_skew:
            return same_skew(words, plus, minus);
        case MetricId::same_stereotype:
            return same_stereotype(words, plus, minus);
    }
    throw NumericError("unknown metric");
}

}  // namespace detail

// Mean absolute deviation of the metric between random half-subsets of the
// words and the full list, scaled by the metric's interval length. Subsets
// where the metric is undefined are skipped and counted.
inline RobustnessResult subset_robustness(const SyntheticSpace& s, MetricId metric,
                                          std::size_t iterations = 100, std::uint64_t seed = 0) {
    std::size_t n = s.words.size();
    if (n < 4)
        throw ValidationError("subset robustness: need at least 4 words");
    if (iterations == 0)
        throw ValidationError("subset robustness: iterations must be positive");

    BiasSubspace db_dir = detail::pca_direction_of(s);
    BiasSubspace same_dir = same_subspace(s.family);
    double full = detail::eval_metric(s, metric, detail::all_indices(s), db_dir, same_dir);

    SplitMix64 rng(seed);
    std::vector<std::size_t> pool(n);
    RobustnessResult result;
    double deviation = 0.0;
    for (std::size_t it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) pool[i] = i;
        std::size_t h = n / 2;
        for (std::size_t i = 0; i < h; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
            std::swap(pool[i], pool[j]);
        }
        std::vector<std::size_t> half(pool.begin(), pool.begin() + h);
        std::sort(half.begin(), half.end());
        try {
            deviation += std::abs(detail::eval_metric(s, metric, half, db_dir, same_dir) - full);
            ++result.used;
        } catch (const NumericError&) {
            ++result.skipped;
        }
    }
    if (result.used == 0)
        throw NumericError("subset robustness: every subset was degenerate");
    result.value = deviation / static_cast<double>(result.used) / metric_interval(metric);
    return result;
}

// ---- rerun stability ----------------------------------------------------------

// Regenerates the space `reps` times with identical planted biases but fresh
// geometry and attribute noise, then compares the spread of each metric's
// word scores across reruns: mean pairwise relative difference of the
// per-rerun score stddevs. Scores that track only the planted biases give 0.
struct StabilityReport {
    double weat = 0.0;
    double same = 0.0;
    double direct_bias = 0.0;
    double mac = 0.0;
};

inline StabilityReport rerun_stability(const SyntheticSpec& spec, std::size_t reps = 5) {
    if (reps < 2)
        throw ValidationError("rerun stability: need at least 2 reruns");
    std::vector<double> sd_weat, sd_same, sd_db, sd_mac;
    for (std::size_t r = 0; r < reps; ++r) {
        SyntheticSpec rep_spec = spec;
        rep_spec.plant_seed = spec.plant_seed.value_or(derive_seed(spec.seed, detail::plant_tag));
        rep_spec.geometry_seed = derive_seed(spec.seed, detail::geometry_tag, r);
        rep_spec.attribute_seed = derive_seed(spec.seed, detail::attribute_tag, r);
        SyntheticSpace s = generate(rep_spec);
        const AttributeSet& plus = s.family[0];
        const AttributeSet& minus = s.family[1];
        BiasSubspace dir = detail::pca_direction_of(s);
        std::vector<double> weat_scores, same_scores, db_scores, mac_scores;
        for (const auto& w : s.words) {
            weat_scores.push_back(weat_word(w.vector, plus, minus));
            same_scores.push_back(same_pairwise(w.vector, plus, minus));
            db_scores.push_back(direct_bias_word(w.vector, dir, 1.0));
            mac_scores.push_back(detail::mac_word(s, w.vector));
        }
        sd_weat.push_back(population_stddev(weat_scores));
        sd_same.push_back(population_stddev(same_scores));
        sd_db.push_back(population_stddev(db_scores));
        sd_mac.push_back(population_stddev(mac_scores));
    }
    auto mean_pairwise_reldiff = [](const std::vector<double>& v) {
        double total = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = i + 1; j < v.size(); ++j) {
                double denom = 0.5 * (v[i] + v[j]);
                total += denom > 0.0 ? std::abs(v[i] - v[j]) / denom : 0.0;
                ++pairs;
            }
        return total / static_cast<double>(pairs);
    };
    return StabilityReport{mean_pairwise_reldiff(sd_weat), mean_pairwise_reldiff(sd_same),
                           mean_pairwise_reldiff(sd_db), mean_pairwise_reldiff(sd_mac)};
}

}

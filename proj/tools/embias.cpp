// embias command-line tool: score | diagnose | synth

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "embias/embias.hpp"

namespace {

// exit codes: 0 ok, 1 validation, 2 numeric/runtime, 3 failed diagnostics
constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_numeric = 2;
constexpr int exit_diagnostics = 3;

unsigned env_threads() {
    const char* v = std::getenv("EMBIAS_THREADS");
    if (!v) return 1;
    char* end = nullptr;
    unsigned long n = std::strtoul(v, &end, 10);
    if (end == v || *end != '\0' || n == 0 || n > 512) return 1;
    return static_cast<unsigned>(n);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw embias::ValidationError("cannot write file: " + path.string());
    out << content;
    if (!out)
        throw embias::ValidationError("write failed: " + path.string());
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_score(const std::string& config_path, const std::string& out_path,
              const std::string& csv_path) {
    embias::RunConfig cfg = embias::load_run_config(config_path);
    embias::Report report = embias::run_score(cfg);
    std::string json = report.dump(2);
    json += '\n';
    if (out_path.empty())
        std::cout << json;
    else
        write_file(out_path, json);
    if (!csv_path.empty())
        write_file(csv_path, embias::word_scores_csv(report));
    return exit_ok;
}

int cmd_diagnose(bool as_json) {
    std::vector<embias::DiagnosticResult> rows = embias::run_all_diagnostics();
    bool all_passed = true;
    for (const auto& row : rows) all_passed = all_passed && row.passed;

    if (as_json) {
        nlohmann::ordered_json doc;
        doc["tool"] = "embias";
        doc["version"] = embias::version;
        doc["passed"] = all_passed;
        auto checks = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json item;
            item["id"] = row.id;
            item["claim"] = row.claim;
            item["passed"] = row.passed;
            item["detail"] = row.detail;
            nlohmann::ordered_json values;
            for (const auto& [k, v] : row.values) values[k] = v;
            item["values"] = std::move(values);
            checks.push_back(std::move(item));
        }
        doc["checks"] = std::move(checks);
        std::cout << doc.dump(2) << '\n';
    } else {
        std::size_t id_w = 2, claim_w = 5;
        for (const auto& row : rows) {
            id_w = std::max(id_w, row.id.size());
            claim_w = std::max(claim_w, row.claim.size());
        }
        for (const auto& row : rows) {
            std::printf("%-*s  %-*s  %s\n", static_cast<int>(id_w), row.id.c_str(),
                        static_cast<int>(claim_w), row.claim.c_str(),
                        row.passed ? "PASS" : "FAIL");
            if (!row.passed && !row.detail.empty())
                std::printf("%-*s    %s\n", static_cast<int>(id_w), "", row.detail.c_str());
        }
        std::printf("%zu/%zu checks passed\n",
                    static_cast<std::size_t>(
                        std::count_if(rows.begin(), rows.end(),
                                      [](const auto& r) { return r.passed; })),
                    rows.size());
    }
    return all_passed ? exit_ok : exit_diagnostics;
}

int cmd_synth(std::vector<double> mu, std::vector<double> sigma, std::size_t reps,
              std::size_t dim, std::size_t n_words, double noise, std::uint64_t seed,
              const std::string& out_dir, unsigned threads) {
    embias::GridSpec grid = embias::default_grid();
    if (!mu.empty()) grid.mu_values = std::move(mu);
    if (!sigma.empty()) grid.sigma_values = std::move(sigma);
    grid.reps = reps;
    grid.dim = dim;
    grid.n_words = n_words;
    grid.noise = noise;
    grid.base_seed = seed;

    embias::GridReport report = embias::grid_experiment(grid, threads);

    std::string csv = "mu,sigma,rep,metric,value,status\n";
    for (const auto& row : report.rows) {
        csv += fmt17(row.mu);
        csv += ',';
        csv += fmt17(row.sigma);
        csv += ',';
        csv += std::to_string(row.rep);
        csv += ',';
        csv += row.metric;
        csv += ',';
        csv += fmt17(row.value);
        csv += ',';
        csv += row.status;
        csv += '\n';
    }

    // mean over ok reps, per cell per metric
    struct CellAgg {
        std::map<std::string, std::pair<double, std::size_t>> by_metric;
    };
    std::map<std::pair<std::size_t, std::size_t>, CellAgg> cells;
    auto index_of = [](const std::vector<double>& vals, double v) {
        for (std::size_t i = 0; i < vals.size(); ++i)
            if (vals[i] == v) return i;
        return vals.size();
    };
    for (const auto& row : report.rows) {
        if (row.status != "ok") continue;
        std::size_t i = index_of(grid.mu_values, row.mu);
        std::size_t j = index_of(grid.sigma_values, row.sigma);
        auto& slot = cells[{i, j}].by_metric[row.metric];
        slot.first += row.value;
        slot.second += 1;
    }

    nlohmann::ordered_json summary;
    summary["tool"] = "embias";
    summary["version"] = embias::version;
    summary["grid"] = {{"mu_values", grid.mu_values}, {"sigma_values", grid.sigma_values},
                       {"reps", grid.reps},           {"dim", grid.dim},
                       {"n_words", grid.n_words},     {"noise", grid.noise},
                       {"base_seed", grid.base_seed}};
    summary["schema_notes"] = {
        {"absolute_bias", "sum of |planted beta| / 2 over generated words"},
        {"half_minus_mu", "0.5 - mu, the distance from the unbiased point, for reading "
                          "unsigned metrics against the sweep"},
    };
    auto r2_table = nlohmann::ordered_json::array();
    std::printf("%8s  %8s  %13s  %15s  %8s\n", "mu", "sigma", "r2_same_weat",
                "r2_direct_bias", "r2_mac");
    for (std::size_t i = 0; i < grid.mu_values.size(); ++i) {
        for (std::size_t j = 0; j < grid.sigma_values.size(); ++j) {
            auto it = cells.find({i, j});
            nlohmann::ordered_json rowj;
            rowj["mu"] = grid.mu_values[i];
            rowj["half_minus_mu"] = 0.5 - grid.mu_values[i];
            rowj["sigma"] = grid.sigma_values[j];
            double shown[3] = {-1.0, -1.0, -1.0};
            const char* names[3] = {"r2_same_weat", "r2_direct_bias", "r2_mac"};
            for (int k = 0; k < 3; ++k) {
                if (it == cells.end()) break;
                auto mit = it->second.by_metric.find(names[k]);
                if (mit == it->second.by_metric.end() || mit->second.second == 0) continue;
                shown[k] = mit->second.first / static_cast<double>(mit->second.second);
                rowj[names[k]] = shown[k];
            }
            r2_table.push_back(std::move(rowj));
            auto cell = [](double v) {
                return v < 0 ? std::string("-") : fmt17(v).substr(0, 8);
            };
            std::string s0 = cell(shown[0]), s1 = cell(shown[1]), s2 = cell(shown[2]);
            std::printf("%8.4f  %8.4f  %13s  %15s  %8s\n", grid.mu_values[i],
                        grid.sigma_values[j], s0.c_str(), s1.c_str(), s2.c_str());
        }
    }
    summary["r2_table"] = std::move(r2_table);

    if (grid.noise == 0.0) {
        embias::SyntheticSpec spec;
        spec.dim = grid.dim;
        spec.n_words = grid.n_words;
        spec.mu = grid.mu_values[grid.mu_values.size() / 2];
        spec.sigma = grid.sigma_values[0];
        spec.noise = 0.0;
        spec.seed = grid.base_seed;
        embias::MuShiftCheck check = embias::weat_mu_shift_check(spec);
        summary["mu_shift_check"] = {{"mu", spec.mu},
                                     {"sigma", spec.sigma},
                                     {"delta", check.delta},
                                     {"d_base", check.d_base},
                                     {"d_shifted", check.d_shifted}};
    }

    std::filesystem::create_directories(out_dir);
    std::filesystem::path dir(out_dir);
    write_file(dir / "grid.csv", csv);
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    std::printf("wrote %s and %s\n", (dir / "grid.csv").string().c_str(),
                (dir / "summary.json").string().c_str());
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"embias: bias metrics for word embeddings"};
    app.require_subcommand(1);

    auto* score = app.add_subcommand("score", "score embeddings per a JSON run config");
    std::string config_path, out_path, csv_path;
    score->add_option("--config", config_path, "run configuration JSON file")->required();
    score->add_option("--out", out_path, "write the JSON report here instead of stdout");
    score->add_option("--csv", csv_path, "also write per-word scores as CSV");

    auto* diagnose = app.add_subcommand("diagnose", "run the built-in metric self-checks");
    bool diag_json = false;
    diagnose->add_flag("--json", diag_json, "machine-readable results");

    auto* synth = app.add_subcommand("synth", "planted-bias synthetic benchmark grid");
    std::vector<double> mu_values, sigma_values;
    std::size_t reps = 5, dim = 32, n_words = 258;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string out_dir = "synth-out";
    unsigned threads = env_threads();
    synth->add_option("--mu", mu_values, "mu values (repeatable; default 0.25..0.75 by 0.05)");
    synth->add_option("--sigma", sigma_values,
                      "sigma values (repeatable; default 0.10..0.35 by 0.05)");
    synth->add_option("--reps", reps, "repetitions per cell")->default_val(reps);
    synth->add_option("--dim", dim, "embedding dimension")->default_val(dim);
    synth->add_option("--words", n_words, "words per space")->default_val(n_words);
    synth->add_option("--noise", noise, "attribute noise scale")->default_val(noise);
    synth->add_option("--seed", seed, "base seed")->default_val(seed);
    synth->add_option("--out-dir", out_dir, "output directory")->default_val(out_dir);
    synth->add_option("--threads", threads, "worker threads (default EMBIAS_THREADS or 1)")
        ->default_val(threads);

    bool timing = false;
    app.add_flag("--timing", timing, "print wall time to stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return exit_validation;
    }

    auto started = std::chrono::steady_clock::now();
    int rc = exit_ok;
    try {
        if (score->parsed())
            rc = cmd_score(config_path, out_path, csv_path);
        else if (diagnose->parsed())
            rc = cmd_diagnose(diag_json);
        else if (synth->parsed())
            rc = cmd_synth(mu_values, sigma_values, reps, dim, n_words, noise, seed, out_dir,
                           threads);
    } catch (const embias::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        rc = exit_validation;
    } catch (const embias::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        rc = exit_numeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        rc = exit_numeric;
    }
    if (timing) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - started)
                      .count();
        std::cerr << "wall_ms " << ms << '\n';
    }
    return rc;
}

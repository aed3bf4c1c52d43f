#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "embias/direct_bias.hpp"
#include "embias/embedding.hpp"
#include "embias/errors.hpp"
#include "embias/same.hpp"

namespace embias {

enum class PValueMethod { off, exact, monte_carlo };

struct NamedWordList {
    std::string name;
    std::vector<std::string> words;
};

struct RunConfig {
    std::filesystem::path embeddings_path;
    EmbeddingFormat format = EmbeddingFormat::auto_detect;
    CasePolicy case_policy = CasePolicy::exact;
    PhrasePolicy phrase_policy = PhrasePolicy::error;
    bool skip_missing = false;
    std::vector<NamedWordList> attribute_sets;
    std::vector<NamedWordList> targets;
    std::optional<std::pair<std::string, std::string>> weat_partition;  // target-set names
    std::vector<std::pair<std::string, std::string>> defining_sets;     // word pairs
    std::vector<std::string> metrics;
    double c = 1.0;
    StereotypeMode stereotype_mode = StereotypeMode::population_stddev;
    PValueMethod p_method = PValueMethod::off;
    std::size_t p_iterations = 10000;
    std::uint64_t seed = 0;
    bool one_vs_rest = false;
};

inline const std::set<std::string>& known_metrics() {
    static const std::set<std::string> names = {"weat",  "mac",       "direct-bias",
                                                "same",  "same-skew", "same-stereotype"};
    return names;
}

namespace detail {

// Accumulates problems so a bad config reports every issue in one pass.
struct ConfigErrors {
    std::vector<std::string> items;
    void add(const std::string& msg) { items.push_back(msg); }
    void raise_if_any() const {
        if (items.empty()) return;
        std::string joined = "config:";
        for (const auto& item : items) joined += "\n  - " + item;
        throw ValidationError(joined);
    }
};

inline std::vector<std::string> read_word_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open word list file: " + path.string());
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t a = line.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t");
        words.push_back(line.substr(a, b - a + 1));
    }
    return words;
}

inline std::vector<NamedWordList> parse_word_lists(const nlohmann::json& arr,
                                                   const std::string& field,
                                                   const std::filesystem::path& base_dir,
                                                   ConfigErrors& errs) {
    std::vector<NamedWordList> lists;
    if (!arr.is_array()) {
        errs.add(field + " must be an array");
        return lists;
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& item = arr[i];
        std::string where = field + "[" + std::to_string(i) + "]";
        if (!item.is_object()) {
            errs.add(where + " must be an object");
            continue;
        }
        NamedWordList list;
        if (!item.contains("name") || !item["name"].is_string() ||
            item["name"].get<std::string>().empty()) {
            errs.add(where + " needs a nonempty string \"name\"");
            continue;
        }
        list.name = item["name"].get<std::string>();
        if (!seen.insert(list.name).second)
            errs.add(field + " has duplicate name \"" + list.name + "\"");
        bool has_words = item.contains("words");
        bool has_file = item.contains("words_file");
        if (has_words == has_file) {
            errs.add(where + " needs exactly one of \"words\" or \"words_file\"");
            continue;
        }
        if (has_words) {
            if (!item["words"].is_array()) {
                errs.add(where + ".words must be an array of strings");
                continue;
            }
            for (const auto& w : item["words"]) {
                if (!w.is_string() || w.get<std::string>().empty()) {
                    errs.add(where + ".words entries must be nonempty strings");
                    list.words.clear();
                    break;
                }
                list.words.push_back(w.get<std::string>());
            }
        } else {
            if (!item["words_file"].is_string()) {
                errs.add(where + ".words_file must be a string path");
                continue;
            }
            try {
                list.words = read_word_file(base_dir / item["words_file"].get<std::string>());
            } catch (const ValidationError& e) {
                errs.add(where + ": " + e.what());
                continue;
            }
        }
        if (list.words.empty()) {
            errs.add(where + " resolved to an empty word list");
            continue;
        }
        lists.push_back(std::move(list));
    }
    return lists;
}

}  // namespace detail

// base_dir anchors relative paths inside the document (embeddings path,
// words_file entries).
inline RunConfig parse_run_config(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir) {
    detail::ConfigErrors errs;
    RunConfig cfg;
    if (!doc.is_object()) {
        errs.add("top-level document must be a JSON object");
        errs.raise_if_any();
    }

    if (!doc.contains("embeddings") || !doc["embeddings"].is_object()) {
        errs.add("\"embeddings\" object with a \"path\" is required");
    } else {
        const auto& emb = doc["embeddings"];
        if (!emb.contains("path") || !emb["path"].is_string())
            errs.add("embeddings.path must be a string");
        else
            cfg.embeddings_path = base_dir / emb["path"].get<std::string>();
        if (emb.contains("format")) {
            std::string f = emb["format"].is_string() ? emb["format"].get<std::string>() : "";
            if (f == "auto")
                cfg.format = EmbeddingFormat::auto_detect;
            else if (f == "word2vec-text")
                cfg.format = EmbeddingFormat::word2vec_text;
            else if (f == "glove-text")
                cfg.format = EmbeddingFormat::glove_text;
            else
                errs.add("embeddings.format must be \"auto\", \"word2vec-text\" or \"glove-text\"");
        }
    }

    if (doc.contains("attribute_sets"))
        cfg.attribute_sets =
            detail::parse_word_lists(doc["attribute_sets"], "attribute_sets", base_dir, errs);
    else
        errs.add("\"attribute_sets\" is required");
    if (doc.contains("targets"))
        cfg.targets = detail::parse_word_lists(doc["targets"], "targets", base_dir, errs);

    if (doc.contains("weat_partition")) {
        const auto& wp = doc["weat_partition"];
        if (!wp.is_object() || !wp.contains("x") || !wp.contains("y") || !wp["x"].is_string() ||
            !wp["y"].is_string())
            errs.add("weat_partition must be an object {\"x\": target-name, \"y\": target-name}");
        else
            cfg.weat_partition = {wp["x"].get<std::string>(), wp["y"].get<std::string>()};
    }

    if (doc.contains("defining_sets")) {
        const auto& ds = doc["defining_sets"];
        if (!ds.is_array()) {
            errs.add("defining_sets must be an array of 2-element word arrays");
        } else {
            for (std::size_t i = 0; i < ds.size(); ++i) {
                const auto& pair = ds[i];
                if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
                    !pair[1].is_string())
                    errs.add("defining_sets[" + std::to_string(i) +
                             "] must be a 2-element array of words");
                else
                    cfg.defining_sets.push_back(
                        {pair[0].get<std::string>(), pair[1].get<std::string>()});
            }
        }
    }

    if (!doc.contains("metrics") || !doc["metrics"].is_array() || doc["metrics"].empty()) {
        errs.add("\"metrics\" must be a nonempty array");
    } else {
        std::set<std::string> seen;
        for (const auto& m : doc["metrics"]) {
            std::string name = m.is_string() ? m.get<std::string>() : "";
            if (!known_metrics().count(name)) {
                errs.add("unknown metric \"" + name + "\"");
                continue;
            }
            if (seen.insert(name).second) cfg.metrics.push_back(name);
        }
    }

    if (doc.contains("options")) {
        const auto& opt = doc["options"];
        if (!opt.is_object()) {
            errs.add("options must be an object");
        } else {
            if (opt.contains("c")) {
                if (!opt["c"].is_number() || opt["c"].get<double>() < 0.0)
                    errs.add("options.c must be a number >= 0");
                else
                    cfg.c = opt["c"].get<double>();
            }
            if (opt.contains("stereotype_mode")) {
                std::string m = opt["stereotype_mode"].is_string()
                                    ? opt["stereotype_mode"].get<std::string>()
                                    : "";
                if (m == "stddev")
                    cfg.stereotype_mode = StereotypeMode::population_stddev;
                else if (m == "rss-over-n")
                    cfg.stereotype_mode = StereotypeMode::rss_over_n;
                else
                    errs.add("options.stereotype_mode must be \"stddev\" or \"rss-over-n\"");
            }
            if (opt.contains("p_value")) {
                const auto& pv = opt["p_value"];
                std::string m = pv.is_object() && pv.contains("method") && pv["method"].is_string()
                                    ? pv["method"].get<std::string>()
                                    : "";
                if (m == "off")
                    cfg.p_method = PValueMethod::off;
                else if (m == "exact")
                    cfg.p_method = PValueMethod::exact;
                else if (m == "monte-carlo")
                    cfg.p_method = PValueMethod::monte_carlo;
                else
                    errs.add("options.p_value.method must be \"off\", \"exact\" or \"monte-carlo\"");
                if (pv.is_object() && pv.contains("iterations")) {
                    const auto& it = pv["iterations"];
                    bool non_negative = it.is_number_unsigned() ||
                                        (it.is_number_integer() && it.get<std::int64_t>() >= 0);
                    if (!non_negative || it.get<std::uint64_t>() == 0)
                        errs.add("options.p_value.iterations must be a positive integer");
                    else
                        cfg.p_iterations = it.get<std::size_t>();
                }
            }
            if (opt.contains("seed")) {
                const auto& sd = opt["seed"];
                if (!sd.is_number_unsigned() &&
                    !(sd.is_number_integer() && sd.get<std::int64_t>() >= 0))
                    errs.add("options.seed must be a non-negative integer");
                else
                    cfg.seed = sd.get<std::uint64_t>();
            }
            if (opt.contains("skip_missing")) {
                if (!opt["skip_missing"].is_boolean())
                    errs.add("options.skip_missing must be a boolean");
                else
                    cfg.skip_missing = opt["skip_missing"].get<bool>();
            }
            if (opt.contains("one_vs_rest")) {
                if (!opt["one_vs_rest"].is_boolean())
                    errs.add("options.one_vs_rest must be a boolean");
                else
                    cfg.one_vs_rest = opt["one_vs_rest"].get<bool>();
            }
            if (opt.contains("phrase_policy")) {
                std::string p = opt["phrase_policy"].is_string()
                                    ? opt["phrase_policy"].get<std::string>()
                                    : "";
                if (p == "error")
                    cfg.phrase_policy = PhrasePolicy::error;
                else if (p == "average-tokens")
                    cfg.phrase_policy = PhrasePolicy::average_tokens;
                else
                    errs.add("options.phrase_policy must be \"error\" or \"average-tokens\"");
            }
            if (opt.contains("case_policy")) {
                std::string p = opt["case_policy"].is_string()
                                    ? opt["case_policy"].get<std::string>()
                                    : "";
                if (p == "exact")
                    cfg.case_policy = CasePolicy::exact;
                else if (p == "lowercase")
                    cfg.case_policy = CasePolicy::lowercase;
                else
                    errs.add("options.case_policy must be \"exact\" or \"lowercase\"");
            }
        }
    }

    // cross-field preconditions, checked before any scoring work starts
    auto requested = [&](const char* m) {
        for (const auto& name : cfg.metrics)
            if (name == m) return true;
        return false;
    };
    auto has_target = [&](const std::string& name) {
        for (const auto& t : cfg.targets)
            if (t.name == name) return true;
        return false;
    };
    if (requested("weat")) {
        if (!cfg.weat_partition) {
            errs.add("metric \"weat\" requires \"weat_partition\"");
        } else {
            if (!has_target(cfg.weat_partition->first))
                errs.add("weat_partition.x \"" + cfg.weat_partition->first +
                         "\" is not a target set name");
            if (!has_target(cfg.weat_partition->second))
                errs.add("weat_partition.y \"" + cfg.weat_partition->second +
                         "\" is not a target set name");
        }
        if (cfg.attribute_sets.size() != 2)
            errs.add("metric \"weat\" requires exactly 2 attribute sets");
    }
    bool needs_targets = requested("mac") || requested("direct-bias") || requested("same") ||
                         requested("same-skew") || requested("same-stereotype");
    if (needs_targets && cfg.targets.empty())
        errs.add("requested metrics need at least one target set");
    if ((requested("mac") || requested("same")) && cfg.attribute_sets.size() < 2)
        errs.add("metrics \"mac\" and \"same\" require at least 2 attribute sets");
    if ((requested("same-skew") || requested("same-stereotype")) &&
        cfg.attribute_sets.size() != 2)
        errs.add("metrics \"same-skew\" and \"same-stereotype\" require exactly 2 attribute sets");
    if (requested("direct-bias") && cfg.defining_sets.empty()) {
        bool zippable = cfg.attribute_sets.size() == 2 &&
                        cfg.attribute_sets[0].words.size() == cfg.attribute_sets[1].words.size();
        if (!zippable)
            errs.add("metric \"direct-bias\" requires defining_sets, or exactly 2 attribute "
                     "sets of equal size to pair up");
    }

    errs.raise_if_any();
    return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open config file: " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("config is not valid JSON: " + std::string(e.what()));
    }
    return parse_run_config(doc, path.parent_path());
}

}

#pragma once

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "embias/config.hpp"
#include "embias/direct_bias.hpp"
#include "embias/embedding.hpp"
#include "embias/mac.hpp"
#include "embias/same.hpp"
#include "embias/version.hpp"
#include "embias/weat.hpp"

namespace embias {

namespace detail {

struct ResolvedList {
    std::string name;
    std::vector<ResolvedWord> words;
    std::vector<std::string> dropped;
};

inline ResolvedList resolve_list(const EmbeddingSpace& space, const NamedWordList& list,
                                 PhrasePolicy phrases, bool skip_missing) {
    ResolvedList out;
    out.name = list.name;
    for (const auto& word : list.words) {
        try {
            out.words.push_back(resolve(space, word, phrases));
        } catch (const OutOfVocabulary&) {
            if (!skip_missing) throw;
            out.dropped.push_back(word);
        }
    }
    if (out.words.empty())
        throw ValidationError("word list \"" + list.name +
                              "\" has no resolvable words in the embedding");
    return out;
}

inline const char* resolution_name(Resolution r) {
    return r == Resolution::direct ? "direct" : "averaged-tokens";
}

inline const char* format_name(EmbeddingFormat f) {
    switch (f) {
        case EmbeddingFormat::word2vec_text: return "word2vec-text";
        case EmbeddingFormat::glove_text: return "glove-text";
        default: return "auto";
    }
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// first-seen order, deduplicated by surface form
inline std::vector<ResolvedWord> union_of(const std::vector<ResolvedList>& lists) {
    std::vector<ResolvedWord> words;
    std::set<std::string> seen;
    for (const auto& list : lists)
        for (const auto& w : list.words)
            if (seen.insert(w.surface).second) words.push_back(w);
    return words;
}

}  // namespace detail

using Report = nlohmann::ordered_json;

inline Report run_score(const RunConfig& cfg) {
    EmbeddingSpace space =
        load_text_embeddings(cfg.embeddings_path.string(), cfg.format, cfg.case_policy);

    std::vector<detail::ResolvedList> attr_lists;
    for (const auto& list : cfg.attribute_sets)
        attr_lists.push_back(
            detail::resolve_list(space, list, cfg.phrase_policy, cfg.skip_missing));
    std::vector<detail::ResolvedList> target_lists;
    for (const auto& list : cfg.targets)
        target_lists.push_back(
            detail::resolve_list(space, list, cfg.phrase_policy, cfg.skip_missing));

    std::vector<AttributeSet> sets;
    for (const auto& list : attr_lists) sets.emplace_back(list.name, list.words);

    auto find_target = [&](const std::string& name) -> const detail::ResolvedList& {
        for (const auto& t : target_lists)
            if (t.name == name) return t;
        throw ValidationError("target set \"" + name + "\" not found");  // pre-validated
    };

    Report report;
    report["tool"] = "embias";
    report["version"] = version;
    report["embeddings"] = {{"path", cfg.embeddings_path.string()},
                            {"format", detail::format_name(cfg.format)},
                            {"dim", space.dim()},
                            {"words", space.size()}};
    {
        Report opts;
        opts["case_policy"] = cfg.case_policy == CasePolicy::exact ? "exact" : "lowercase";
        opts["phrase_policy"] =
            cfg.phrase_policy == PhrasePolicy::error ? "error" : "average-tokens";
        opts["skip_missing"] = cfg.skip_missing;
        opts["c"] = cfg.c;
        opts["stereotype_mode"] = cfg.stereotype_mode == StereotypeMode::population_stddev
                                      ? "stddev"
                                      : "rss-over-n";
        switch (cfg.p_method) {
            case PValueMethod::off: opts["p_value"] = {{"method", "off"}}; break;
            case PValueMethod::exact: opts["p_value"] = {{"method", "exact"}}; break;
            case PValueMethod::monte_carlo:
                opts["p_value"] = {{"method", "monte-carlo"}, {"iterations", cfg.p_iterations}};
                break;
        }
        opts["seed"] = cfg.seed;
        opts["one_vs_rest"] = cfg.one_vs_rest;
        report["options"] = std::move(opts);
    }
    auto list_summary = [](const std::vector<detail::ResolvedList>& lists) {
        Report arr = Report::array();
        for (const auto& list : lists) {
            Report item;
            item["name"] = list.name;
            item["size"] = list.words.size();
            item["dropped"] = list.dropped;
            arr.push_back(std::move(item));
        }
        return arr;
    };
    report["attribute_sets"] = list_summary(attr_lists);
    report["targets"] = list_summary(target_lists);

    Report results;
    Report score_rows = Report::array();
    auto add_row = [&](const std::string& metric, const ResolvedWord& w, double value) {
        Report row;
        row["word"] = w.surface;
        row["metric"] = metric;
        row["value"] = value;
        row["resolution"] = detail::resolution_name(w.resolution);
        score_rows.push_back(std::move(row));
    };

    for (const std::string& metric : cfg.metrics) {
        if (metric == "weat") {
            const auto& xs = find_target(cfg.weat_partition->first);
            const auto& ys = find_target(cfg.weat_partition->second);
            WeatPartition part(xs.words, ys.words);
            const AttributeSet& a = sets[0];
            const AttributeSet& b = sets[1];
            Report entry;
            entry["x"] = xs.name;
            entry["y"] = ys.name;
            entry["attribute_a"] = a.name();
            entry["attribute_b"] = b.name();
            entry["effect_size"] = weat_effect_size(part, a, b);
            entry["stddev"] = "population";
            entry["test_statistic"] = weat_test_statistic(part, a, b);
            if (cfg.p_method != PValueMethod::off) {
                WeatPValue pv = weat_p_value(part, a, b,
                                             cfg.p_method == PValueMethod::exact
                                                 ? PMethod::exact
                                                 : PMethod::monte_carlo,
                                             cfg.p_iterations, cfg.seed);
                Report pj;
                pj["p"] = pv.p;
                pj["method"] = pv.method == PMethod::exact ? "exact" : "monte-carlo";
                pj["samples"] = pv.samples;
                if (pv.method == PMethod::monte_carlo) pj["seed"] = pv.seed;
                entry["p_value"] = std::move(pj);
            }
            results["weat"] = std::move(entry);
            for (const auto& w : part.x()) add_row("weat", w, weat_word(w.vector, a, b));
            for (const auto& w : part.y()) add_row("weat", w, weat_word(w.vector, a, b));
        } else if (metric == "mac") {
            AttributeFamily family(sets);
            Report entry;
            for (const auto& t : target_lists) {
                Report per;
                per["value"] = mac(TargetSet(t.name, t.words), family);
                entry[t.name] = std::move(per);
            }
            results["mac"] = std::move(entry);
            for (const auto& w : detail::union_of(target_lists)) {
                double total = 0.0;
                for (const auto& a : sets) total += mac_word_set(w.vector, a);
                add_row("mac", w, total / static_cast<double>(sets.size()));
            }
        } else if (metric == "direct-bias") {
            std::vector<DefiningSet> defs;
            std::vector<std::string> dropped_pairs;
            if (!cfg.defining_sets.empty()) {
                for (const auto& [wa, wb] : cfg.defining_sets) {
                    try {
                        ResolvedWord ra = resolve(space, wa, cfg.phrase_policy);
                        ResolvedWord rb = resolve(space, wb, cfg.phrase_policy);
                        defs.push_back(DefiningSet({ra, rb}));
                    } catch (const OutOfVocabulary&) {
                        if (!cfg.skip_missing) throw;
                        dropped_pairs.push_back(wa + "/" + wb);
                    }
                }
            } else {
                // positional pairing of the two attribute lists
                const auto& la = attr_lists[0].words;
                const auto& lb = attr_lists[1].words;
                if (la.size() != lb.size())
                    throw ValidationError(
                        "direct-bias pairing needs equal attribute set sizes after drops");
                for (std::size_t i = 0; i < la.size(); ++i)
                    defs.push_back(DefiningSet({la[i], lb[i]}));
            }
            if (defs.empty())
                throw ValidationError("direct-bias: no resolvable defining pairs");
            BiasSubspace dir = subspace_pca(defs, 1);
            Report entry;
            entry["c"] = cfg.c;
            entry["construction"] = "pca";
            entry["defining_pairs"] = defs.size();
            entry["dropped_pairs"] = dropped_pairs;
            entry["explained_variance"] = dir.explained_variance;
            for (const auto& t : target_lists) {
                Report per;
                per["value"] = direct_bias(t.words, dir, cfg.c);
                entry[t.name] = std::move(per);
            }
            results["direct-bias"] = std::move(entry);
            for (const auto& w : detail::union_of(target_lists))
                add_row("direct-bias", w, direct_bias_word(w.vector, dir, cfg.c));
        } else if (metric == "same") {
            AttributeFamily family(sets);
            Report entry;
            for (const auto& t : target_lists) {
                SameReport rep = same_pairwise_report(t.words, family, cfg.stereotype_mode,
                                                      cfg.one_vs_rest);
                Report per;
                per["same_set"] = rep.same_set;
                per["reference_set"] = rep.reference_set;
                per["stereotype_mode"] = cfg.stereotype_mode == StereotypeMode::population_stddev
                                             ? "stddev"
                                             : "rss-over-n";
                per["dropped_directions"] = rep.dropped_directions;
                Report pairwise = Report::array();
                for (const auto& p : rep.pairwise) {
                    Report pj;
                    pj["set_i"] = p.set_i;
                    pj["set_j"] = p.set_j;
                    pj["skew"] = p.skew;
                    pj["stereotype"] = p.stereotype;
                    pairwise.push_back(std::move(pj));
                }
                per["pairwise"] = std::move(pairwise);
                per["direction_cosines"] = rep.direction_cosines;
                if (rep.one_vs_rest) {
                    Report ovr = Report::array();
                    for (const auto& o : *rep.one_vs_rest) {
                        Report oj;
                        oj["set"] = o.set_name;
                        oj["skew"] = o.skew;
                        oj["stereotype"] = o.stereotype;
                        ovr.push_back(std::move(oj));
                    }
                    per["one_vs_rest"] = std::move(ovr);
                }
                entry[t.name] = std::move(per);
            }
            results["same"] = std::move(entry);
            BiasSubspace sub = same_subspace(family);
            for (const auto& w : detail::union_of(target_lists))
                add_row("same", w, same_word(w.vector, sub));
        } else if (metric == "same-skew") {
            Report entry;
            for (const auto& t : target_lists) {
                Report per;
                per["value"] = same_skew(t.words, sets[0], sets[1]);
                entry[t.name] = std::move(per);
            }
            results["same-skew"] = std::move(entry);
        } else if (metric == "same-stereotype") {
            Report entry;
            for (const auto& t : target_lists) {
                Report per;
                per["value"] = same_stereotype(t.words, sets[0], sets[1], cfg.stereotype_mode);
                entry[t.name] = std::move(per);
            }
            results["same-stereotype"] = std::move(entry);
        }
    }

    report["results"] = std::move(results);
    report["word_scores"] = std::move(score_rows);
    return report;
}

// Fixed columns: word, metric, value, resolution.
inline std::string word_scores_csv(const Report& report) {
    std::string csv = "word,metric,value,resolution\n";
    for (const auto& row : report.at("word_scores")) {
        csv += detail::csv_field(row.at("word").get<std::string>());
        csv += ',';
        csv += row.at("metric").get<std::string>();
        csv += ',';
        csv += detail::fmt_double(row.at("value").get<double>());
        csv += ',';
        csv += row.at("resolution").get<std::string>();
        csv += '\n';
    }
    return csv;
}

}

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "embias/errors.hpp"
#include "embias/vec.hpp"

namespace embias {

enum class CasePolicy { exact, lowercase };
enum class PhrasePolicy { error, average_tokens };
enum class EmbeddingFormat { auto_detect, word2vec_text, glove_text };
enum class Resolution { direct, averaged_tokens };

inline std::string fold_case(std::string_view word, CasePolicy policy) {
    std::string out(word);
    if (policy == CasePolicy::lowercase)
        for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Immutable after loading: every vector has the same dimension, is finite,
// nonzero, and keys are unique under the active case policy.
class EmbeddingSpace {
public:
    EmbeddingSpace(std::size_t dim, CasePolicy policy, std::string source = "")
        : dim_(dim), policy_(policy), source_(std::move(source)) {
        if (dim_ == 0)
            throw ValidationError("embedding dimension must be positive");
    }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return words_.size(); }
    CasePolicy case_policy() const { return policy_; }
    const std::string& source() const { return source_; }
    const std::vector<std::string>& words() const { return words_; }

    void add(std::string_view word, Vec v) {
        std::string key = fold_case(word, policy_);
        if (key.empty())
            throw ValidationError("empty word");
        if (v.size() != dim_)
            throw ValidationError("vector for \"" + key + "\" has dimension " +
                                  std::to_string(v.size()) + ", expected " + std::to_string(dim_));
        bool all_zero = true;
        for (double x : v) {
            if (!std::isfinite(x))
                throw ValidationError("non-finite component in vector for \"" + key + "\"");
            if (x != 0.0) all_zero = false;
        }
        if (all_zero)
            throw ValidationError("zero vector for \"" + key + "\"");
        if (index_.count(key))
            throw ValidationError("duplicate word \"" + key + "\"");
        index_.emplace(key, words_.size());
        words_.push_back(std::move(key));
        vectors_.push_back(std::move(v));
    }

    bool contains(std::string_view word) const {
        return index_.count(fold_case(word, policy_)) != 0;
    }

    const Vec& vector_of(std::string_view word) const {
        auto it = index_.find(fold_case(word, policy_));
        if (it == index_.end())
            throw OutOfVocabulary(std::string(word));
        return vectors_[it->second];
    }

private:
    std::size_t dim_;
    CasePolicy policy_;
    std::string source_;
    std::vector<std::string> words_;
    std::vector<Vec> vectors_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct ResolvedWord {
    std::string surface;
    Vec vector;
    Resolution resolution = Resolution::direct;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

inline bool parse_double(std::string_view tok, double& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

inline bool is_integer_token(std::string_view tok) {
    if (tok.empty()) return false;
    for (char c : tok)
        if (c < '0' || c > '9') return false;
    return true;
}

}  // namespace detail

// Text loaders. word2vec-text starts with a "<count> <dim>" header line;
// GloVe-text is headerless. auto_detect treats a first line of exactly two
// integer tokens as a word2vec header. Duplicate words, zero vectors,
// non-numeric components and ragged rows are hard errors.
inline EmbeddingSpace load_text_embeddings(const std::string& path,
                                           EmbeddingFormat format = EmbeddingFormat::auto_detect,
                                           CasePolicy policy = CasePolicy::exact) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open embedding file: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);

    std::size_t first = 0;
    while (first < lines.size() && detail::split_ws(lines[first]).empty()) ++first;
    if (first == lines.size())
        throw ValidationError("embedding file is empty: " + path);

    auto head = detail::split_ws(lines[first]);
    bool word2vec = false;
    if (format == EmbeddingFormat::word2vec_text) {
        if (head.size() != 2 || !detail::is_integer_token(head[0]) ||
            !detail::is_integer_token(head[1]))
            throw ValidationError(path + ": expected a \"<count> <dim>\" header line");
        word2vec = true;
    } else if (format == EmbeddingFormat::auto_detect) {
        word2vec = head.size() == 2 && detail::is_integer_token(head[0]) &&
                   detail::is_integer_token(head[1]);
    }

    std::size_t dim = 0;
    std::size_t row_start = first;
    if (word2vec) {
        double declared_dim = 0;
        detail::parse_double(head[1], declared_dim);
        dim = static_cast<std::size_t>(declared_dim);
        if (dim == 0)
            throw ValidationError(path + ": header declares dimension 0");
        row_start = first + 1;
    } else {
        if (head.size() < 2)
            throw ValidationError(path + ": first row has no vector components");
        dim = head.size() - 1;
    }

    EmbeddingSpace space(dim, policy, path);
    for (std::size_t li = row_start; li < lines.size(); ++li) {
        auto toks = detail::split_ws(lines[li]);
        if (toks.empty()) continue;  // tolerate blank lines
        if (toks.size() != dim + 1)
            throw ValidationError(path + ":" + std::to_string(li + 1) + ": expected " +
                                  std::to_string(dim + 1) + " fields, got " +
                                  std::to_string(toks.size()));
        Vec v(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            if (!detail::parse_double(toks[k + 1], v[k]))
                throw ValidationError(path + ":" + std::to_string(li + 1) +
                                      ": non-numeric component \"" + std::string(toks[k + 1]) +
                                      "\"");
        }
        try {
            space.add(toks[0], std::move(v));
        } catch (const ValidationError& e) {
            throw ValidationError(path + ":" + std::to_string(li + 1) + ": " + e.what());
        }
    }
    if (space.size() == 0)
        throw ValidationError(path + ": no embedding rows");
    return space;
}

// Writes with 17 significant digits so a load() round-trips bit-identically.
inline void save_text_embeddings(const EmbeddingSpace& space, const std::string& path,
                                 EmbeddingFormat format = EmbeddingFormat::glove_text) {
    std::ofstream out(path);
    if (!out)
        throw ValidationError("cannot write embedding file: " + path);
    if (format == EmbeddingFormat::word2vec_text)
        out << space.size() << ' ' << space.dim() << '\n';
    char buf[64];
    for (const auto& word : space.words()) {
        out << word;
        for (double x : space.vector_of(word)) {
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out << ' ' << buf;
        }
        out << '\n';
    }
    if (!out)
        throw ValidationError("write failed: " + path);
}

// Lookup with optional phrase fallback: a whitespace-separated phrase resolves
// to the arithmetic mean of its token vectors when the policy allows it.
inline ResolvedWord resolve(const EmbeddingSpace& space, std::string_view word,
                            PhrasePolicy phrases = PhrasePolicy::error) {
    if (space.contains(word))
        return {std::string(word), space.vector_of(word), Resolution::direct};

    auto toks = detail::split_ws(word);
    if (toks.size() > 1 && phrases == PhrasePolicy::average_tokens) {
        Vec sum(space.dim(), 0.0);
        for (auto tok : toks) {
            const Vec& v = space.vector_of(tok);  // throws OutOfVocabulary(token)
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i];
        }
        for (double& x : sum) x /= static_cast<double>(toks.size());
        return {std::string(word), std::move(sum), Resolution::averaged_tokens};
    }
    throw OutOfVocabulary(std::string(word));
}

}

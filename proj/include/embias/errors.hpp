#pragma once

#include <stdexcept>
#include <string>

namespace embias {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: malformed config, unreadable or malformed embedding file,
// out-of-vocabulary word with no fallback. Maps to CLI exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A computation hit a state where the math is undefined or an iteration
// failed. Maps to CLI exit code 2.
class NumericError : public Error {
public:
    using Error::Error;
};

// All word scores equal: the effect-size denominator is zero.
class DegenerateVariance final : public NumericError {
public:
    using NumericError::NumericError;
};

// Two attribute-set centroids coincide, so no bias direction exists.
class EqualCentroids final : public NumericError {
public:
    using NumericError::NumericError;
};

// Correlation is undefined (mismatched lengths, <2 points, or zero variance).
class UndefinedCorrelation final : public NumericError {
public:
    using NumericError::NumericError;
};

class OutOfVocabulary final : public ValidationError {
public:
    explicit OutOfVocabulary(const std::string& word)
        : ValidationError("word not in vocabulary: \"" + word + "\""), word_(word) {}
    const std::string& word() const { return word_; }

private:
    std::string word_;
};

}

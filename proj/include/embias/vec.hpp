#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "embias/errors.hpp"

namespace embias {

using Vec = std::vector<double>;

inline double dot(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        throw NumericError("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

inline double norm(std::span<const double> u) {
    return std::sqrt(dot(u, u));
}

inline Vec normalized(std::span<const double> u) {
    double n = norm(u);
    if (n <= 0.0)
        throw NumericError("cannot normalize a zero vector");
    Vec out(u.begin(), u.end());
    for (double& x : out) x /= n;
    return out;
}

inline Vec add(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        throw NumericError("add: dimension mismatch");
    Vec out(u.begin(), u.end());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += v[i];
    return out;
}

inline Vec sub(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        throw NumericError("sub: dimension mismatch");
    Vec out(u.begin(), u.end());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] -= v[i];
    return out;
}

inline Vec scaled(std::span<const double> u, double a) {
    Vec out(u.begin(), u.end());
    for (double& x : out) x *= a;
    return out;
}

// Bounded metrics clamp their result into the documented closed range; the
// true value can overshoot by ~1 ulp under floating point.
inline double clamp_range(double x, double lo, double hi) {
    return std::clamp(x, lo, hi);
}

inline double mean(std::span<const double> xs) {
    if (xs.empty())
        throw NumericError("mean of empty list");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

// Population standard deviation (divisor n, not n-1).
inline double population_stddev(std::span<const double> xs) {
    double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size()));
}

}

#pragma once

#include "embias/similarity.hpp"

namespace embias {

// Mean cosine distance between one target word and one attribute set.
// Range [0, 2]; the unbiased reading is 1 (orthogonality).
inline double mac_word_set(std::span<const double> t, const AttributeSet& a) {
    double s = 0.0;
    for (const auto& m : a.members()) s += 1.0 - cosine(t, m.vector);
    return clamp_range(s / static_cast<double>(a.members().size()), 0.0, 2.0);
}

// Mean of mac_word_set over all (target, attribute-set) pairs. Accumulated
// per target across the family first: on a set paired with its exact
// mirror the distances sum to 2 per word, and this grouping keeps that
// cancellation exact in floating point.
inline double mac(const TargetSet& targets, const AttributeFamily& family) {
    double total = 0.0;
    for (const auto& t : targets.members()) {
        double word_total = 0.0;
        for (const auto& a : family.sets()) word_total += mac_word_set(t.vector, a);
        total += word_total;
    }
    double pairs = static_cast<double>(targets.size()) * static_cast<double>(family.size());
    return clamp_range(total / pairs, 0.0, 2.0);
}

}

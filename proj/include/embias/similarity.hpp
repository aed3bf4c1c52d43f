#pragma once

#include <set>
#include <string>
#include <vector>

#include "embias/embedding.hpp"
#include "embias/errors.hpp"
#include "embias/vec.hpp"

namespace embias {

// Cosine similarity, clamped into [-1, 1] to absorb rounding overshoot.
inline double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        throw NumericError("cosine: dimension mismatch");
    double nu = norm(u);
    double nv = norm(v);
    if (nu <= 0.0 || nv <= 0.0)
        throw NumericError("cosine of a zero vector");
    return clamp_range(dot(u, v) / (nu * nv), -1.0, 1.0);
}

// A named, ordered list of resolved words. Centroid is the mean of the
// unit-normalized members, fixed at construction; members are immutable so
// it can never go stale.
class AttributeSet {
public:
    AttributeSet(std::string name, std::vector<ResolvedWord> members)
        : name_(std::move(name)), members_(std::move(members)) {
        if (members_.empty())
            throw ValidationError("attribute set \"" + name_ + "\" is empty");
        std::size_t dim = members_[0].vector.size();
        centroid_.assign(dim, 0.0);
        for (const auto& m : members_) {
            if (m.vector.size() != dim)
                throw ValidationError("attribute set \"" + name_ + "\": mixed dimensions");
            Vec u = normalized(m.vector);
            for (std::size_t i = 0; i < dim; ++i) centroid_[i] += u[i];
        }
        for (double& x : centroid_) x /= static_cast<double>(members_.size());
    }

    const std::string& name() const { return name_; }
    const std::vector<ResolvedWord>& members() const { return members_; }
    const Vec& centroid() const { return centroid_; }
    std::size_t dim() const { return centroid_.size(); }

private:
    std::string name_;
    std::vector<ResolvedWord> members_;
    Vec centroid_;
};

// Mean cosine between w and the members of A. Equals the cosine-normalized
// dot of w with the set centroid, which is what makes centroid-based
// shortcuts elsewhere legitimate.
inline double assoc(std::span<const double> w, const AttributeSet& a) {
    double s = 0.0;
    for (const auto& m : a.members()) s += cosine(w, m.vector);
    return s / static_cast<double>(a.members().size());
}

// Ordered collection of >= 2 attribute sets with distinct names and a common
// dimension. Order matters: the first set is the reference for subspace
// construction downstream.
class AttributeFamily {
public:
    explicit AttributeFamily(std::vector<AttributeSet> sets) : sets_(std::move(sets)) {
        if (sets_.size() < 2)
            throw ValidationError("attribute family needs at least 2 sets");
        std::set<std::string> names;
        for (const auto& s : sets_) {
            if (s.dim() != sets_[0].dim())
                throw ValidationError("attribute family: mixed dimensions");
            if (!names.insert(s.name()).second)
                throw ValidationError("attribute family: duplicate set name \"" + s.name() + "\"");
        }
    }

    const std::vector<AttributeSet>& sets() const { return sets_; }
    std::size_t size() const { return sets_.size(); }
    std::size_t dim() const { return sets_[0].dim(); }
    const AttributeSet& operator[](std::size_t i) const { return sets_[i]; }

private:
    std::vector<AttributeSet> sets_;
};

class TargetSet {
public:
    TargetSet(std::string name, std::vector<ResolvedWord> members)
        : name_(std::move(name)), members_(std::move(members)) {
        if (members_.empty())
            throw ValidationError("target set \"" + name_ + "\" is empty");
        for (const auto& m : members_)
            if (m.vector.size() != members_[0].vector.size())
                throw ValidationError("target set \"" + name_ + "\": mixed dimensions");
    }

    const std::string& name() const { return name_; }
    const std::vector<ResolvedWord>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }

private:
    std::string name_;
    std::vector<ResolvedWord> members_;
};

}

#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace randhull {

using Vector = std::vector<double>;

// Error taxonomy. The CLI maps invalid_input (and subclasses) to exit code 2 and
// budget/convergence failures to exit code 3.
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class budget_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ordered collection of n points in R^dim, stored row-major.
class PointSet {
public:
    PointSet() = default;

    PointSet(std::size_t dim, Vector coords) : dim_(dim), coords_(std::move(coords)) {
        if (dim_ == 0) throw invalid_input("PointSet: dim must be positive");
        if (coords_.empty()) throw invalid_input("PointSet: empty point set");
        if (coords_.size() % dim_ != 0)
            throw invalid_input("PointSet: coordinate count is not a multiple of dim");
        for (double c : coords_)
            if (!std::isfinite(c)) throw invalid_input("PointSet: non-finite coordinate");
    }

    static PointSet from_rows(const std::vector<Vector>& rows) {
        if (rows.empty()) throw invalid_input("PointSet: empty point set");
        const std::size_t d = rows.front().size();
        Vector flat;
        flat.reserve(rows.size() * d);
        for (const auto& r : rows) {
            if (r.size() != d) throw invalid_input("PointSet: points of differing dimension");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return PointSet(d, std::move(flat));
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    bool empty() const noexcept { return coords_.empty(); }

    std::span<const double> operator[](std::size_t i) const noexcept {
        return {coords_.data() + i * dim_, dim_};
    }
    std::span<double> mutable_point(std::size_t i) noexcept {
        return {coords_.data() + i * dim_, dim_};
    }

    const Vector& coords() const noexcept { return coords_; }

    /// First `count` points as a new set.
    PointSet prefix(std::size_t count) const {
        return PointSet(dim_, Vector(coords_.begin(), coords_.begin() + count * dim_));
    }

    PointSet translated(std::span<const double> shift) const {
        if (shift.size() != dim_) throw invalid_input("PointSet: translation of wrong dimension");
        PointSet out = *this;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t k = 0; k < dim_; ++k) out.coords_[i * dim_ + k] -= shift[k];
        return out;
    }

    PointSet subset(std::span<const std::size_t> indices) const {
        Vector flat;
        flat.reserve(indices.size() * dim_);
        for (auto i : indices) {
            auto p = (*this)[i];
            flat.insert(flat.end(), p.begin(), p.end());
        }
        return PointSet(dim_, std::move(flat));
    }

    void push_back(std::span<const double> p) {
        if (dim_ == 0) dim_ = p.size();
        if (p.size() != dim_) throw invalid_input("PointSet: point of wrong dimension");
        for (double c : p)
            if (!std::isfinite(c)) throw invalid_input("PointSet: non-finite coordinate");
        coords_.insert(coords_.end(), p.begin(), p.end());
    }

private:
    std::size_t dim_ = 0;
    Vector coords_;
};

/// Point set with nonnegative weights summing to one.
class WeightedMeasure {
public:
    static constexpr double default_weight_tol = 1e-12;

    WeightedMeasure() = default;

    WeightedMeasure(PointSet support, Vector weights, double weight_tol = default_weight_tol)
        : support_(std::move(support)), weights_(std::move(weights)) {
        if (support_.empty()) throw invalid_input("WeightedMeasure: empty support");
        if (weights_.size() != support_.size())
            throw invalid_input("WeightedMeasure: weights length differs from support size");
        double total = 0.0;
        for (double w : weights_) {
            if (!std::isfinite(w) || w < 0.0)
                throw invalid_input("WeightedMeasure: negative or non-finite weight");
            total += w;
        }
        if (std::abs(total - 1.0) > weight_tol)
            throw invalid_input("WeightedMeasure: weights do not sum to 1");
    }

    static WeightedMeasure uniform(PointSet support) {
        const std::size_t n = support.size();
        return WeightedMeasure(std::move(support), Vector(n, 1.0 / static_cast<double>(n)),
                               1e-9);
    }

    const PointSet& support() const noexcept { return support_; }
    const Vector& weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return support_.size(); }
    std::size_t dim() const noexcept { return support_.dim(); }

    Vector mean() const {
        Vector m(dim(), 0.0);
        for (std::size_t i = 0; i < size(); ++i) {
            auto p = support_[i];
            for (std::size_t k = 0; k < dim(); ++k) m[k] += weights_[i] * p[k];
        }
        return m;
    }

private:
    PointSet support_;
    Vector weights_;
};

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

inline void require_finite(std::span<const double> v, const char* what) {
    for (double c : v)
        if (!std::isfinite(c)) throw invalid_input(std::string(what) + ": non-finite value");
}

/// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Ceiling that ignores relative floating-point noise, so 3*1/0.3 rounds up to 10, not 11.
inline double ceil_tol(double x, double rel = 1e-12) {
    if (!std::isfinite(x)) return x;
    const double r = std::round(x);
    if (std::abs(x - r) <= rel * std::max(1.0, std::abs(x))) return r;
    return std::ceil(x);
}

}  // namespace randhull

#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "randhull/core.hpp"

namespace randhull::geom {

class rank_deficiency_error : public numerical_error {
public:
    rank_deficiency_error(const std::string& what, Vector null_direction)
        : numerical_error(what), null_direction_(std::move(null_direction)) {}
    const Vector& null_direction() const noexcept { return null_direction_; }

private:
    Vector null_direction_;
};

enum class Provenance { analytic, monte_carlo };

inline const char* to_string(Provenance p) {
    return p == Provenance::analytic ? "analytic" : "monte-carlo";
}

/// Second-moment data of a centered random vector X with covariance V.
struct MomentData {
    Eigen::MatrixXd covariance;  // V
    Eigen::MatrixXd whitener;    // V^{-1/2}, symmetric positive definite
    // sup over unit c of E|c^T V^{-1/2} X|^3; a sampled maximum when monte-carlo.
    std::optional<double> rho3;
    std::optional<double> rho3_stderr;
    std::optional<double> m3;         // E ||V^{-1/2} X||^3
    std::optional<double> m4;         // E ||V^{-1/2} X||^4
    std::optional<double> norm_bound;  // B with ||V^{-1/2} X|| <= B almost surely
    Provenance provenance = Provenance::analytic;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(covariance.rows()); }
};

inline constexpr double max_condition_number = 1e12;

/// Symmetric inverse square root of a covariance matrix.
inline MomentData whiten(const Eigen::MatrixXd& covariance) {
    if (covariance.rows() != covariance.cols() || covariance.rows() == 0)
        throw invalid_input("whiten: covariance must be a nonempty square matrix");
    if (!covariance.allFinite()) throw invalid_input("whiten: non-finite covariance");
    const Eigen::MatrixXd sym = 0.5 * (covariance + covariance.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    const Eigen::VectorXd& ev = eig.eigenvalues();  // ascending
    const double top = ev(ev.size() - 1);
    if (!(ev(0) > 0.0) || top / ev(0) > max_condition_number) {
        const Eigen::VectorXd dir = eig.eigenvectors().col(0);
        Vector null_dir(dir.data(), dir.data() + dir.size());
        std::ostringstream msg;
        msg << "whiten: singular covariance, null direction (";
        for (std::size_t k = 0; k < null_dir.size(); ++k) msg << (k ? ", " : "") << null_dir[k];
        msg << ")";
        throw rank_deficiency_error(msg.str(), std::move(null_dir));
    }
    MomentData m;
    m.covariance = sym;
    m.whitener = eig.eigenvectors() * ev.cwiseInverse().cwiseSqrt().asDiagonal() *
                 eig.eigenvectors().transpose();
    m.whitener = 0.5 * (m.whitener + m.whitener.transpose());
    m.provenance = Provenance::analytic;
    return m;
}

struct WhitenedPoints {
    MomentData moments;
    PointSet points;  // V^{-1/2}(x - center)
    Vector center;
};

/// Whitens a sample about `center` (the sample mean when omitted), using the
/// second-moment matrix about that center.
inline WhitenedPoints whiten(const PointSet& data, std::optional<Vector> center = std::nullopt) {
    const std::size_t d = data.dim();
    const std::size_t n = data.size();
    Vector c(d, 0.0);
    if (center) {
        if (center->size() != d) throw invalid_input("whiten: center of wrong dimension");
        c = *center;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < d; ++k) c[k] += data[i][k];
        for (double& v : c) v /= static_cast<double>(n);
    }
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    Eigen::VectorXd y(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) y(static_cast<Eigen::Index>(k)) = data[i][k] - c[k];
        cov.noalias() += y * y.transpose();
    }
    cov /= static_cast<double>(n);
    WhitenedPoints out{whiten(cov), data, c};
    out.moments.provenance = Provenance::monte_carlo;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) y(static_cast<Eigen::Index>(k)) = data[i][k] - c[k];
        const Eigen::VectorXd z = out.moments.whitener * y;
        auto p = out.points.mutable_point(i);
        for (std::size_t k = 0; k < d; ++k) p[k] = z(static_cast<Eigen::Index>(k));
    }
    return out;
}

}  // namespace randhull::geom

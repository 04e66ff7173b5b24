#include "suborbit/decomposition.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "suborbit/errors.hpp"

namespace suborbit {

std::pair<double, double> perturbed_bounds(double A, double B, double epsilon) {
    if (!(A > 0.0) || !(B >= A)) {
        throw InvalidInputError("bounds must satisfy 0 < A <= B");
    }
    if (!(epsilon > 0.0) || !(epsilon < 1.0 / B)) {
        throw PreconditionError("perturbation size must satisfy 0 < epsilon < 1/B");
    }
    return {A / (1.0 + epsilon * B), B / (1.0 - epsilon * B)};
}

bool check_closeness(const std::vector<double>& suborbit_errors, double p, double epsilon,
                     double B) {
    if (!(p >= 1.0)) throw InvalidInputError("p must be >= 1");
    if (!(epsilon < 1.0 / B)) return false;

    double conjugate_norm = 0.0;
    if (p == 1.0) {
        for (double e : suborbit_errors) conjugate_norm = std::max(conjugate_norm, e);
    } else {
        const double q = p / (p - 1.0);
        double sum = 0.0;
        for (double e : suborbit_errors) sum += std::pow(e, q);
        conjugate_norm = std::pow(sum, 1.0 / q);
    }
    return conjugate_norm <= epsilon * (1.0 + 1e-12);
}

namespace {

Eigen::MatrixXd analysis_matrix(const AtomicSystem& system) {
    if (system.dimension < 1 || system.dimension > 200
        || static_cast<std::int64_t>(system.vectors.size()) > 200) {
        throw InvalidInputError("frame-bound verification is desk scale: D, K <= 200");
    }
    Eigen::MatrixXd G(static_cast<Eigen::Index>(system.vectors.size()),
                      static_cast<Eigen::Index>(system.dimension));
    G.setZero();
    for (std::size_t row = 0; row < system.vectors.size(); ++row) {
        for (const auto& [k, c] : system.vectors[row].coefficients()) {
            if (k <= system.dimension) {
                G(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k - 1)) = c;
            }
        }
    }
    return G;
}

} // namespace

FrameBounds frame_bounds_p2(const AtomicSystem& system) {
    if (system.p != 2.0) {
        throw PreconditionError("singular-value frame bounds are defined for p = 2 only");
    }
    const Eigen::MatrixXd G = analysis_matrix(system);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(G);
    const auto& sv = svd.singularValues();
    FrameBounds out;
    out.upper = sv.size() > 0 ? sv(0) : 0.0;
    // smallest singular value of the analysis map as a map out of R^D:
    // zero when the rows do not span all D coordinates
    out.lower = (G.rows() >= G.cols() && sv.size() == G.cols()) ? sv(sv.size() - 1) : 0.0;
    return out;
}

bool is_complete_p2(const AtomicSystem& system, double tol) {
    return frame_bounds_p2(system).lower > tol;
}

} // namespace suborbit

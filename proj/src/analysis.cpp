#include "ionsim/analysis.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace ionsim {

namespace {

void check_mode_state(const StateVector& state, const char* op) {
    if (state.space() != Space::modes) {
        throw DimensionError(detail::cat(op, " expects a modes-only state"));
    }
    if (std::abs(state.norm2() - 1.0) > 1e-9) {
        throw InvariantError(detail::cat(op, " expects a unit-norm state, norm^2 = ", state.norm2()));
    }
}

} // namespace

double fidelity(const StateVector& u, const StateVector& v) {
    if (u.dims() != v.dims() || u.space() != v.space()) {
        throw DimensionError("fidelity between states on different spaces");
    }
    if (std::abs(u.norm2() - 1.0) > 1e-9 || std::abs(v.norm2() - 1.0) > 1e-9) {
        throw InvariantError("fidelity expects unit-norm states");
    }
    const double f = std::norm(inner(u, v));
    return std::clamp(f, 0.0, 1.0);
}

std::vector<double> schmidt_coefficients(const StateVector& modes) {
    check_mode_state(modes, "schmidt_coefficients");
    const Dims& dims = modes.dims();
    const int N = dims.mode_dim();
    Eigen::MatrixXcd a(N, N);
    for (int m = 0; m < N; ++m) {
        for (int n = 0; n < N; ++n) {
            a(m, n) = modes.amp(m, n);
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    std::vector<double> lambdas;
    lambdas.reserve(static_cast<size_t>(N));
    for (int i = 0; i < svd.singularValues().size(); ++i) {
        const double sigma = svd.singularValues()(i);
        if (sigma >= 1e-12) lambdas.push_back(sigma * sigma);
    }
    return lambdas;
}

double entanglement_entropy(const StateVector& modes) {
    double s = 0.0;
    for (double lambda : schmidt_coefficients(modes)) {
        if (lambda > 0.0) s -= lambda * std::log2(lambda);
    }
    return s;
}

JointNumberDistribution joint_number_distribution(const StateVector& modes) {
    check_mode_state(modes, "joint_number_distribution");
    const Dims& dims = modes.dims();
    JointNumberDistribution dist;
    dist.n_max = dims.n_max;
    dist.p.resize(static_cast<size_t>(dims.pair_dim()));
    for (int i = 0; i < dims.pair_dim(); ++i) {
        dist.p[static_cast<size_t>(i)] = std::norm(modes.amp(i));
    }
    return dist;
}

Complex extract_relative_phase(const StateVector& modes, std::pair<int, int> first,
                               std::pair<int, int> second) {
    check_mode_state(modes, "extract_relative_phase");
    const Dims& dims = modes.dims();
    const Complex a = modes.amp(mode_index(first.first, first.second, dims));
    const Complex b = modes.amp(mode_index(second.first, second.second, dims));
    if (std::abs(a) <= 1e-12 || std::abs(b) <= 1e-12) {
        throw UndefinedPhaseError(
            detail::cat("relative phase undefined: |amp(", first.first, ",", first.second,
                        ")| = ", std::abs(a), ", |amp(", second.first, ",", second.second,
                        ")| = ", std::abs(b)));
    }
    const Complex ratio = a / b;
    return ratio / std::abs(ratio);
}

} // namespace ionsim

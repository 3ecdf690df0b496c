#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace colavoid {

using Rng = std::mt19937_64;

// Stream tags for seed derivation. Values are part of the reproducibility contract.
enum class Stream : std::uint64_t {
    Encounter = 1,
    Policy = 2,
    Oracle = 3,
};

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based derivation: the seed for (master, stream, index[, sub]) is a pure
// function of its arguments, so workers can run in any order.
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index,
                          std::uint64_t sub = 0);

double standard_normal(Rng& rng);
double uniform(Rng& rng, double lo, double hi);

// Factor L with L L^T = cov. Cholesky when positive definite, otherwise the
// eigendecomposition with negative eigenvalues clamped to zero.
template <int N>
Eigen::Matrix<double, N, N> covariance_factor(const Eigen::Matrix<double, N, N>& cov) {
    Eigen::LLT<Eigen::Matrix<double, N, N>> llt(cov);
    if (llt.info() == Eigen::Success) {
        return llt.matrixL();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> eig(cov);
    const Eigen::Matrix<double, N, 1> root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal();
}

template <int N>
Eigen::Matrix<double, N, 1> sample_gaussian(const Eigen::Matrix<double, N, 1>& mean,
                                            const Eigen::Matrix<double, N, N>& factor, Rng& rng) {
    Eigen::Matrix<double, N, 1> z;
    for (int k = 0; k < N; ++k) z[k] = standard_normal(rng);
    return mean + factor * z;
}

} // namespace colavoid

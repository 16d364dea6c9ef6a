#ifndef SKINMAP_FCM_HPP
#define SKINMAP_FCM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "skinmap/errors.hpp"
#include "skinmap/gmm.hpp"
#include "skinmap/random.hpp"
#include "skinmap/seeding.hpp"

namespace skinmap {

/// n x c membership matrix; rows sum to 1.
template <typename Scalar>
using FuzzyPartition = MatrixX<Scalar>;

struct FcmConfig {
    int clusters = 3;
    double fuzzifier = 2.0;
    double epsilon = 1e-5;  // max element-wise membership change
    int max_iterations = 300;
    std::uint64_t seed = 0;

    void validate() const {
        if (clusters < 1) throw ContractViolation("FCM cluster count must be >= 1");
        if (!(fuzzifier > 1.0)) throw ContractViolation("FCM fuzzifier must be > 1");
        if (!(epsilon > 0.0)) throw ContractViolation("FCM epsilon must be > 0");
        if (max_iterations < 1) throw ContractViolation("FCM max_iterations must be >= 1");
    }
};

template <typename Scalar>
struct FcmResult {
    MatrixX<Scalar> centers;  // c x d
    FuzzyPartition<Scalar> memberships;
    std::vector<Scalar> objective_trace;  // initial value, then one per iteration
    int iterations = 0;
    bool converged = false;
};

namespace detail {

template <typename Scalar>
Scalar membership_power(Scalar delta, Scalar m) {
    return m == Scalar(2) ? delta * delta : std::pow(delta, m);
}

/// Squared Euclidean distances, n x c.
template <typename DerivedX, typename DerivedC>
MatrixX<typename DerivedX::Scalar> squared_distances(const Eigen::MatrixBase<DerivedX>& samples,
                                                     const Eigen::MatrixBase<DerivedC>& centers) {
    MatrixX<typename DerivedX::Scalar> out(samples.rows(), centers.rows());
    for (Eigen::Index i = 0; i < centers.rows(); ++i)
        out.col(i) = (samples.rowwise() - centers.row(i)).rowwise().squaredNorm();
    return out;
}

}  // namespace detail

/// L = sum_i sum_j delta_ji^m ||x_j - mu_i||^2.
template <typename DerivedX, typename DerivedC, typename DerivedU>
typename DerivedX::Scalar fcm_objective(const Eigen::MatrixBase<DerivedX>& samples,
                                        const Eigen::MatrixBase<DerivedC>& centers,
                                        const Eigen::MatrixBase<DerivedU>& memberships,
                                        typename DerivedX::Scalar m) {
    using Scalar = typename DerivedX::Scalar;
    if (samples.cols() != centers.cols() || memberships.rows() != samples.rows() ||
        memberships.cols() != centers.rows())
        throw ContractViolation("fcm_objective: dimension mismatch");
    const MatrixX<Scalar> dist = detail::squared_distances(samples, centers);
    Scalar total = 0;
    for (Eigen::Index j = 0; j < dist.rows(); ++j)
        for (Eigen::Index i = 0; i < dist.cols(); ++i)
            total += detail::membership_power(Scalar(memberships(j, i)), m) * dist(j, i);
    return total;
}

/**
 * delta_ji = 1 / sum_k (||x_j - mu_i|| / ||x_j - mu_k||)^(2/(m-1)).
 *
 * A sample that coincides with one or more centers splits its membership
 * equally among them and has zero membership elsewhere.
 */
template <typename DerivedX, typename DerivedC>
FuzzyPartition<typename DerivedX::Scalar> update_memberships(const Eigen::MatrixBase<DerivedX>& samples,
                                                             const Eigen::MatrixBase<DerivedC>& centers,
                                                             typename DerivedX::Scalar m) {
    using Scalar = typename DerivedX::Scalar;
    if (centers.rows() < 1) throw ContractViolation("update_memberships: no centers");
    if (!(m > Scalar(1))) throw ContractViolation("update_memberships: fuzzifier must be > 1");
    if (samples.cols() != centers.cols()) throw ContractViolation("update_memberships: dimension mismatch");

    const MatrixX<Scalar> dist = detail::squared_distances(samples, centers);
    // exponent on the squared-distance ratio
    const Scalar exponent = Scalar(1) / (m - Scalar(1));
    FuzzyPartition<Scalar> out(dist.rows(), dist.cols());
    for (Eigen::Index j = 0; j < dist.rows(); ++j) {
        const auto row = dist.row(j);
        const Scalar nearest = row.minCoeff();
        if (nearest == Scalar(0)) {
            const auto hits = (row.array() == Scalar(0)).count();
            out.row(j) = (row.array() == Scalar(0)).template cast<Scalar>() / Scalar(hits);
            continue;
        }
        // (nearest / d_i)^(1/(m-1)) keeps the largest term at exactly 1.
        for (Eigen::Index i = 0; i < dist.cols(); ++i) {
            const Scalar ratio = nearest / row(i);
            out(j, i) = exponent == Scalar(1) ? ratio : std::pow(ratio, exponent);
        }
        out.row(j) /= out.row(j).sum();
    }
    return out;
}

/// mu_i = sum_j delta_ji^m x_j / sum_j delta_ji^m.
template <typename DerivedX, typename DerivedU>
MatrixX<typename DerivedX::Scalar> update_centers(const Eigen::MatrixBase<DerivedX>& samples,
                                                  const Eigen::MatrixBase<DerivedU>& memberships,
                                                  typename DerivedX::Scalar m) {
    using Scalar = typename DerivedX::Scalar;
    if (memberships.rows() != samples.rows()) throw ContractViolation("update_centers: dimension mismatch");

    MatrixX<Scalar> weights(memberships.rows(), memberships.cols());
    for (Eigen::Index j = 0; j < weights.rows(); ++j)
        for (Eigen::Index i = 0; i < weights.cols(); ++i)
            weights(j, i) = detail::membership_power(Scalar(memberships(j, i)), m);

    MatrixX<Scalar> centers = weights.transpose() * samples;
    for (Eigen::Index i = 0; i < weights.cols(); ++i) {
        const Scalar mass = weights.col(i).sum();
        if (!(mass > Scalar(0)))
            throw DegenerateClusterError(static_cast<int>(i),
                                         "cluster " + std::to_string(i) + " has no membership mass");
        centers.row(i) /= mass;
    }
    return centers;
}

/// Per-sample argmax of the membership row; ties go to the lowest index.
template <typename Derived>
std::vector<int> harden(const Eigen::MatrixBase<Derived>& memberships) {
    std::vector<int> labels(static_cast<std::size_t>(memberships.rows()));
    for (Eigen::Index j = 0; j < memberships.rows(); ++j) {
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < memberships.cols(); ++i)
            if (memberships(j, i) > memberships(j, best)) best = i;
        labels[static_cast<std::size_t>(j)] = static_cast<int>(best);
    }
    return labels;
}

/**
 * Fuzzy C-Means. Initial centers are `clusters` distinct seeded sample
 * points; memberships and centers then alternate until the largest
 * membership change is <= epsilon or max_iterations is reached.
 */
template <typename Derived>
FcmResult<typename Derived::Scalar> fcm_fit(const Eigen::MatrixBase<Derived>& samples, const FcmConfig& config) {
    using Scalar = typename Derived::Scalar;
    config.validate();
    const auto c = static_cast<Eigen::Index>(config.clusters);
    if (samples.rows() < c)
        throw InsufficientSamplesError("FCM needs at least " + std::to_string(c) + " samples, got " +
                                       std::to_string(samples.rows()));
    if (!samples.allFinite()) throw ContractViolation("samples contain non-finite values");
    const auto m = static_cast<Scalar>(config.fuzzifier);

    Rng rng(config.seed);
    const auto seeds = pick_seed_rows(samples, c, rng);

    FcmResult<Scalar> result;
    result.centers.resize(c, samples.cols());
    for (Eigen::Index i = 0; i < c; ++i) result.centers.row(i) = samples.row(seeds[static_cast<std::size_t>(i)]);
    result.memberships = update_memberships(samples, result.centers, m);
    result.objective_trace.push_back(fcm_objective(samples, result.centers, result.memberships, m));

    while (result.iterations < config.max_iterations) {
        result.centers = update_centers(samples, result.memberships, m);
        FuzzyPartition<Scalar> next = update_memberships(samples, result.centers, m);
        const Scalar change = (next - result.memberships).cwiseAbs().maxCoeff();
        result.memberships = std::move(next);
        ++result.iterations;
        result.objective_trace.push_back(fcm_objective(samples, result.centers, result.memberships, m));
        if (change <= static_cast<Scalar>(config.epsilon)) {
            result.converged = true;
            break;
        }
    }
    return result;
}

/**
 * Gaussian mixture from a finished FCM run. Means are the FCM centers; each
 * covariance is the scatter (denominator n_i) of the samples hardened into
 * that cluster plus ridge * I; priors are n_i / n.
 */
template <typename Derived>
GaussianMixture<typename Derived::Scalar> fcm_to_gmm(const Eigen::MatrixBase<Derived>& samples,
                                                     const FcmResult<typename Derived::Scalar>& result,
                                                     double ridge = 1e-6) {
    using Scalar = typename Derived::Scalar;
    const auto d = samples.cols();
    const auto c = result.centers.rows();
    if (result.memberships.rows() != samples.rows() || result.centers.cols() != d)
        throw ContractViolation("fcm_to_gmm: result does not match samples");

    const auto labels = harden(result.memberships);
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(c), 0);
    for (int label : labels) ++counts[static_cast<std::size_t>(label)];

    std::vector<GaussianComponent<Scalar>> components;
    components.reserve(static_cast<std::size_t>(c));
    for (Eigen::Index i = 0; i < c; ++i) {
        const auto n_i = counts[static_cast<std::size_t>(i)];
        if (n_i < d + 1)
            throw DegenerateClusterError(static_cast<int>(i), "cluster " + std::to_string(i) + " has " +
                                                                  std::to_string(n_i) +
                                                                  " hardened samples, needs at least " +
                                                                  std::to_string(d + 1));
        MatrixX<Scalar> members(n_i, d);
        Eigen::Index row = 0;
        for (std::size_t j = 0; j < labels.size(); ++j)
            if (labels[j] == i) members.row(row++) = samples.row(static_cast<Eigen::Index>(j));

        const MatrixX<Scalar> centered = members.rowwise() - members.colwise().mean();
        MatrixX<Scalar> cov = (centered.transpose() * centered) / static_cast<Scalar>(n_i);
        cov = Scalar(0.5) * (cov + cov.transpose()).eval();
        cov.diagonal().array() += static_cast<Scalar>(ridge);

        GaussianComponent<Scalar> comp;
        comp.weight = static_cast<Scalar>(n_i) / static_cast<Scalar>(samples.rows());
        comp.mean = result.centers.row(i).transpose();
        comp.covariance = std::move(cov);
        components.push_back(std::move(comp));
    }
    return GaussianMixture<Scalar>(std::move(components));
}

}  // namespace skinmap

#endif  // SKINMAP_FCM_HPP

#ifndef SKINMAP_GMM_HPP
#define SKINMAP_GMM_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "skinmap/errors.hpp"
#include "skinmap/random.hpp"
#include "skinmap/seeding.hpp"

namespace skinmap {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// One weighted multivariate normal.
template <typename Scalar>
struct GaussianComponent {
    Scalar weight = Scalar(1);
    VectorX<Scalar> mean;
    MatrixX<Scalar> covariance;
};

namespace detail {

template <typename Scalar>
Scalar log_two_pi() {
    return static_cast<Scalar>(std::log(2.0 * std::numbers::pi));
}

template <typename Scalar>
Eigen::LLT<MatrixX<Scalar>> factor_covariance(const MatrixX<Scalar>& covariance) {
    if (covariance.rows() != covariance.cols() || covariance.rows() == 0)
        throw ContractViolation("covariance must be a non-empty square matrix");
    if (!covariance.allFinite()) throw NumericDomainError("covariance has non-finite entries");
    Eigen::LLT<MatrixX<Scalar>> llt(covariance);
    if (llt.info() != Eigen::Success || !(llt.matrixLLT().diagonal().array() > Scalar(0)).all())
        throw NumericDomainError("covariance is not positive-definite");
    return llt;
}

template <typename Scalar>
Scalar log_normalizer(const Eigen::LLT<MatrixX<Scalar>>& llt) {
    const auto d = static_cast<Scalar>(llt.matrixLLT().rows());
    // log |Sigma|^(1/2) = sum log diag(L)
    const Scalar half_log_det = llt.matrixLLT().diagonal().array().log().sum();
    return Scalar(-0.5) * d * log_two_pi<Scalar>() - half_log_det;
}

/// log(sum(exp(values))) without overflow.
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::MatrixBase<Derived>& values) {
    using Scalar = typename Derived::Scalar;
    const Scalar peak = values.maxCoeff();
    if (!std::isfinite(peak)) return peak;
    return peak + std::log((values.array() - peak).exp().sum());
}

}  // namespace detail

/// Natural log of the multivariate normal density at x.
template <typename DerivedX, typename DerivedMean, typename DerivedCov>
typename DerivedX::Scalar gaussian_log_pdf(const Eigen::MatrixBase<DerivedX>& x,
                                           const Eigen::MatrixBase<DerivedMean>& mean,
                                           const Eigen::MatrixBase<DerivedCov>& covariance) {
    using Scalar = typename DerivedX::Scalar;
    if (x.size() != mean.size() || covariance.rows() != mean.size())
        throw ContractViolation("gaussian_log_pdf: dimension mismatch");
    const MatrixX<Scalar> cov = covariance;
    const auto llt = detail::factor_covariance<Scalar>(cov);
    const VectorX<Scalar> diff = x - mean;
    const Scalar mahalanobis = llt.matrixL().solve(diff).squaredNorm();
    return detail::log_normalizer<Scalar>(llt) - Scalar(0.5) * mahalanobis;
}

/// (2 pi)^(-d/2) |Sigma|^(-1/2) exp(-(x - mu)' Sigma^-1 (x - mu) / 2).
template <typename DerivedX, typename DerivedMean, typename DerivedCov>
typename DerivedX::Scalar gaussian_pdf(const Eigen::MatrixBase<DerivedX>& x,
                                       const Eigen::MatrixBase<DerivedMean>& mean,
                                       const Eigen::MatrixBase<DerivedCov>& covariance) {
    return std::exp(gaussian_log_pdf(x, mean, covariance));
}

/**
 * Finite Gaussian mixture with validated, pre-factored components.
 *
 * Construction checks that weights lie in [0,1] and sum to 1 within 1e-9,
 * that all components share one dimension, and that every covariance is
 * symmetric (1e-9) and positive-definite. Instances are immutable.
 */
template <typename Scalar>
class GaussianMixture {
public:
    using Component = GaussianComponent<Scalar>;

    explicit GaussianMixture(std::vector<Component> components) : components_(std::move(components)) {
        if (components_.empty()) throw ContractViolation("mixture needs at least one component");
        dim_ = components_.front().mean.size();
        if (dim_ == 0) throw ContractViolation("mixture dimension must be positive");

        Scalar weight_sum = 0;
        factors_.reserve(components_.size());
        for (std::size_t p = 0; p < components_.size(); ++p) {
            const auto& c = components_[p];
            const auto label = "component " + std::to_string(p);
            if (c.mean.size() != dim_ || c.covariance.rows() != dim_ || c.covariance.cols() != dim_)
                throw ContractViolation(label + ": dimension mismatch");
            if (!(c.weight >= Scalar(0) && c.weight <= Scalar(1)))
                throw ContractViolation(label + ": weight outside [0,1]");
            if (!c.mean.allFinite()) throw NumericDomainError(label + ": non-finite mean");
            if ((c.covariance - c.covariance.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-9))
                throw NumericDomainError(label + ": covariance is not symmetric");
            weight_sum += c.weight;

            auto llt = detail::factor_covariance<Scalar>(c.covariance);
            const Scalar norm = detail::log_normalizer<Scalar>(llt);
            factors_.push_back({std::move(llt), norm});
        }
        if (std::abs(weight_sum - Scalar(1)) > Scalar(1e-9))
            throw ContractViolation("mixture weights must sum to 1");
    }

    Eigen::Index dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return components_.size(); }
    const std::vector<Component>& components() const noexcept { return components_; }
    const Component& operator[](std::size_t p) const { return components_[p]; }

    /**
     * Joint log terms log(pi_p) + log f(x_t | theta_p), one row per sample and
     * one column per component. `samples` holds one sample per row.
     */
    template <typename Derived>
    MatrixX<Scalar> weighted_log_densities(const Eigen::MatrixBase<Derived>& samples) const {
        if (samples.cols() != dim_) throw ContractViolation("sample dimension does not match mixture");
        const auto n = samples.rows();
        MatrixX<Scalar> out(n, static_cast<Eigen::Index>(components_.size()));
        for (std::size_t p = 0; p < components_.size(); ++p) {
            const auto& c = components_[p];
            const MatrixX<Scalar> centered = (samples.rowwise() - c.mean.transpose()).transpose();
            const MatrixX<Scalar> whitened = factors_[p].llt.matrixL().solve(centered);
            const Scalar log_weight = c.weight > Scalar(0) ? std::log(c.weight)
                                                           : -std::numeric_limits<Scalar>::infinity();
            out.col(static_cast<Eigen::Index>(p)) =
                (factors_[p].log_norm + log_weight -
                 Scalar(0.5) * whitened.colwise().squaredNorm().array())
                    .transpose()
                    .matrix();
        }
        return out;
    }

    /// log f(x) for every row of `samples`.
    template <typename Derived>
    VectorX<Scalar> log_pdf_rows(const Eigen::MatrixBase<Derived>& samples) const {
        const MatrixX<Scalar> terms = weighted_log_densities(samples);
        VectorX<Scalar> out(terms.rows());
        for (Eigen::Index t = 0; t < terms.rows(); ++t) out(t) = detail::log_sum_exp(terms.row(t));
        return out;
    }

    template <typename Derived>
    Scalar log_pdf(const Eigen::MatrixBase<Derived>& x) const {
        if (x.size() != dim_) throw ContractViolation("sample dimension does not match mixture");
        const MatrixX<Scalar> row = x.derived().transpose();
        return log_pdf_rows(row)(0);
    }

private:
    struct Factor {
        Eigen::LLT<MatrixX<Scalar>> llt;
        Scalar log_norm;
    };

    std::vector<Component> components_;
    std::vector<Factor> factors_;
    Eigen::Index dim_ = 0;
};

using GaussianMixtured = GaussianMixture<double>;

/// sum_p pi_p f(x | theta_p).
template <typename Scalar, typename Derived>
Scalar mixture_pdf(const Eigen::MatrixBase<Derived>& x, const GaussianMixture<Scalar>& gmm) {
    return std::exp(gmm.log_pdf(x));
}

/// sum_t ln f(y_t); one sample per row.
template <typename Scalar, typename Derived>
Scalar log_likelihood(const Eigen::MatrixBase<Derived>& samples, const GaussianMixture<Scalar>& gmm) {
    if (samples.rows() == 0) throw ContractViolation("log_likelihood needs at least one sample");
    return gmm.log_pdf_rows(samples).sum();
}

struct EmConfig {
    int components = 3;
    double tolerance = 1e-6;  // relative log-likelihood improvement
    int max_iterations = 500;
    std::uint64_t seed = 0;
    double ridge = 1e-6;

    void validate() const {
        if (components < 1) throw ContractViolation("EM component count must be >= 1");
        if (!(tolerance > 0.0)) throw ContractViolation("EM tolerance must be > 0");
        if (max_iterations < 1) throw ContractViolation("EM max_iterations must be >= 1");
        if (!(ridge >= 0.0)) throw ContractViolation("EM ridge must be >= 0");
    }
};

template <typename Scalar>
struct EmResult {
    GaussianMixture<Scalar> mixture;
    std::vector<Scalar> log_likelihood_trace;  // one entry per M-step
    int iterations = 0;
    bool converged = false;
};

/// Weight below which an EM component counts as collapsed.
inline constexpr double kCollapsedWeight = 1e-12;

namespace detail {

/// M-step: weights, weighted means, weighted covariances plus ridge.
template <typename Scalar, typename Derived>
GaussianMixture<Scalar> em_maximize(const Eigen::MatrixBase<Derived>& samples,
                                    const MatrixX<Scalar>& responsibilities, Scalar ridge) {
    const VectorX<Scalar> mass = responsibilities.colwise().sum().transpose();
    const Scalar total = mass.sum();

    std::vector<GaussianComponent<Scalar>> components;
    components.reserve(static_cast<std::size_t>(mass.size()));
    for (Eigen::Index p = 0; p < mass.size(); ++p) {
        const Scalar weight = mass(p) / total;
        if (!(weight >= Scalar(kCollapsedWeight)))
            throw DegenerateComponentError(static_cast<int>(p), "EM component " + std::to_string(p) +
                                                                    " collapsed (weight " +
                                                                    std::to_string(weight) + ")");
        GaussianComponent<Scalar> c;
        c.weight = weight;
        c.mean = (samples.transpose() * responsibilities.col(p)) / mass(p);
        const MatrixX<Scalar> centered = samples.rowwise() - c.mean.transpose();
        MatrixX<Scalar> cov =
            (centered.transpose() * responsibilities.col(p).asDiagonal() * centered) / mass(p);
        cov = Scalar(0.5) * (cov + cov.transpose()).eval();
        cov.diagonal().array() += ridge;
        c.covariance = std::move(cov);
        components.push_back(std::move(c));
    }

    // Renormalize so the weights sum to 1 to the last ulp.
    Scalar weight_sum = 0;
    for (const auto& c : components) weight_sum += c.weight;
    for (auto& c : components) c.weight /= weight_sum;
    return GaussianMixture<Scalar>(std::move(components));
}

/// E-step: fills responsibilities in place and returns the log-likelihood.
template <typename Scalar, typename Derived>
Scalar em_expect(const Eigen::MatrixBase<Derived>& samples, const GaussianMixture<Scalar>& gmm,
                 MatrixX<Scalar>& responsibilities) {
    responsibilities = gmm.weighted_log_densities(samples);
    Scalar total = 0;
    for (Eigen::Index t = 0; t < responsibilities.rows(); ++t) {
        const Scalar lse = log_sum_exp(responsibilities.row(t));
        responsibilities.row(t) = (responsibilities.row(t).array() - lse).exp().matrix();
        total += lse;
    }
    return total;
}

}  // namespace detail

/**
 * Expectation-maximization fit of a full-covariance Gaussian mixture.
 *
 * Initialization takes `components` distinct seeded sample points and assigns
 * every sample to its nearest one (one hard k-means pass); the first M-step
 * runs on those hard responsibilities. Iteration stops once the relative
 * log-likelihood gain drops below `tolerance` or after `max_iterations`
 * M-steps. Requires n >= components * (d + 1).
 */
template <typename Derived>
EmResult<typename Derived::Scalar> em_fit(const Eigen::MatrixBase<Derived>& samples, const EmConfig& config) {
    using Scalar = typename Derived::Scalar;
    config.validate();
    const auto n = samples.rows();
    const auto d = samples.cols();
    const auto p = static_cast<Eigen::Index>(config.components);
    if (d < 1) throw ContractViolation("samples must have at least one column");
    if (n < p * (d + 1))
        throw InsufficientSamplesError("EM needs at least " + std::to_string(p * (d + 1)) + " samples, got " +
                                       std::to_string(n));
    if (!samples.allFinite()) throw ContractViolation("samples contain non-finite values");

    Rng rng(config.seed);
    const auto seeds = pick_seed_rows(samples, p, rng);

    MatrixX<Scalar> responsibilities = MatrixX<Scalar>::Zero(n, p);
    for (Eigen::Index t = 0; t < n; ++t) {
        Eigen::Index best = 0;
        Scalar best_dist = std::numeric_limits<Scalar>::infinity();
        for (Eigen::Index k = 0; k < p; ++k) {
            const Scalar dist = (samples.row(t) - samples.row(seeds[static_cast<std::size_t>(k)])).squaredNorm();
            if (dist < best_dist) {
                best_dist = dist;
                best = k;
            }
        }
        responsibilities(t, best) = Scalar(1);
    }

    const auto ridge = static_cast<Scalar>(config.ridge);
    auto mixture = detail::em_maximize<Scalar>(samples, responsibilities, ridge);
    Scalar ll = detail::em_expect(samples, mixture, responsibilities);
    std::vector<Scalar> trace{ll};
    int iterations = 1;
    bool converged = false;

    while (iterations < config.max_iterations) {
        auto next = detail::em_maximize<Scalar>(samples, responsibilities, ridge);
        const Scalar next_ll = detail::em_expect(samples, next, responsibilities);
        ++iterations;
        trace.push_back(next_ll);
        mixture = std::move(next);
        const Scalar gain = next_ll - ll;
        ll = next_ll;
        if (gain < static_cast<Scalar>(config.tolerance) * std::abs(trace[trace.size() - 2])) {
            converged = true;
            break;
        }
    }
    return {std::move(mixture), std::move(trace), iterations, converged};
}

}  // namespace skinmap

#endif  // SKINMAP_GMM_HPP

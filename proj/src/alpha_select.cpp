#include "coda/alpha_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "coda/geometry.hpp"
#include "coda/rng.hpp"
#include "coda/transforms.hpp"

namespace coda {

namespace {

constexpr double kLog2PiPlusOne = 2.8378770664093453;  // log(2 pi) + 1

void require_enough_rows(const CompositionDataset& ds) {
    const std::size_t d = ds.parts() - 1;
    if (ds.rows() <= d) {
        throw Error(ErrorCode::SingularCovariance,
                    "covariance of " + std::to_string(d) + "-dimensional coordinates is singular with n = " +
                        std::to_string(ds.rows()) + " observations; need n > " + std::to_string(d));
    }
}

template <typename Fn>
auto per_row(const CompositionDataset& ds, std::size_t j, Fn&& fn) {
    try {
        return fn(ds.row(j));
    } catch (const Error& e) {
        rethrow_for_row(e, ds, j);
    }
}

double sum_log_parts(const Composition& x) { return x.parts().array().log().sum(); }

} // namespace

Eigen::MatrixXd ml_covariance(const Eigen::MatrixXd& rows) {
    const Eigen::RowVectorXd mean = rows.colwise().mean();
    const Eigen::MatrixXd centred = rows.rowwise() - mean;
    return (centred.transpose() * centred) / static_cast<double>(rows.rows());
}

double log_det_spd(const Eigen::MatrixXd& matrix) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::SingularCovariance, "eigen-decomposition of covariance failed");
    }
    const Eigen::VectorXd& eig = solver.eigenvalues();
    const double largest = eig.maxCoeff();
    if (!(largest > 0.0) || !(eig.minCoeff() > 1e-12 * largest)) {
        throw Error(ErrorCode::SingularCovariance,
                    "covariance is singular (rank deficient transformed data)");
    }
    return eig.array().log().sum();
}

Eigen::MatrixXd isometric_coordinates(const CompositionDataset& ds, double alpha, const HelmertBasis& H) {
    Eigen::MatrixXd z(static_cast<Eigen::Index>(ds.rows()), static_cast<Eigen::Index>(ds.parts() - 1));
    for (std::size_t j = 0; j < ds.rows(); ++j) {
        z.row(static_cast<Eigen::Index>(j)) =
            per_row(ds, j, [&](const Composition& x) { return alpha_isometric(x, alpha, H); }).transpose();
    }
    return z;
}

double profile_loglik_z(const CompositionDataset& ds, double alpha, const HelmertBasis& H,
                        bool include_jacobian) {
    require_alpha_in_domain(alpha, "profile_loglik_z");
    require_enough_rows(ds);
    const auto n = static_cast<double>(ds.rows());
    const auto d = static_cast<double>(ds.parts() - 1);

    const double log_det = log_det_spd(ml_covariance(isometric_coordinates(ds, alpha, H)));
    double loglik = -0.5 * n * log_det - 0.5 * n * d * kLog2PiPlusOne;
    if (include_jacobian) {
        for (std::size_t j = 0; j < ds.rows(); ++j) {
            loglik += per_row(ds, j, [&](const Composition& x) {
                return alpha_isometric_log_jacobian(x, alpha, H);
            });
        }
    }
    return loglik;
}

double profile_loglik_u(const CompositionDataset& ds, double alpha) {
    require_alpha_in_domain(alpha, "profile_loglik_u");
    require_enough_rows(ds);
    const std::size_t D = ds.parts();
    const HelmertBasis H = helmert_basis(D);
    const auto n = static_cast<double>(ds.rows());
    const auto d = static_cast<double>(D - 1);
    const double log_parts = std::log(static_cast<double>(D));

    Eigen::MatrixXd y(static_cast<Eigen::Index>(ds.rows()), static_cast<Eigen::Index>(D - 1));
    double jacobian = 0.0;
    for (std::size_t j = 0; j < ds.rows(); ++j) {
        per_row(ds, j, [&](const Composition& row_parts) {
            require_strictly_positive(row_parts, "profile_loglik_u");
            const Composition x = closure(row_parts.parts());
            const auto row = static_cast<Eigen::Index>(j);
            if (alpha == 0.0) {
                // Leading-order terms of H u and of the Jacobian, with the
                // common alpha^d factor removed.
                y.row(row) = (H.matrix() * clr(x)).transpose() / static_cast<double>(D);
                jacobian += -static_cast<double>(D) * log_parts - sum_log_parts(x);
            } else {
                const Composition u = alpha_power(x, alpha);
                y.row(row) = (H.matrix() * u.parts()).transpose();
                jacobian += d * std::log(std::abs(alpha)) + sum_log_parts(u) - sum_log_parts(x);
            }
            return 0;
        });
    }
    return -0.5 * n * log_det_spd(ml_covariance(y)) - 0.5 * n * d * kLog2PiPlusOne + jacobian;
}

void CriterionSpec::validate() const {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || lo < -1.0 || hi > 1.0 || !(lo < hi)) {
        throw Error(ErrorCode::SpecError, "search interval must satisfy -1 <= lo < hi <= 1");
    }
    if (grid_points < 11) throw Error(ErrorCode::SpecError, "grid needs at least 11 points");
    if (!(tolerance > 0.0)) throw Error(ErrorCode::SpecError, "tolerance must be positive");
    if (escape_draws < 0) throw Error(ErrorCode::SpecError, "escape draws must be nonnegative");
}

CriterionSpec default_criterion(const CompositionDataset& ds) {
    CriterionSpec spec;
    if (ds.has_zero()) {
        spec.lo = 0.01;
        // log |det dz/dtheta| diverges as a part goes to zero.
        spec.include_jacobian = false;
    }
    return spec;
}

double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                               double tolerance) {
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - ratio * (b - a);
    double e = a + ratio * (b - a);
    double fc = f(c);
    double fe = f(e);
    while (b - a > tolerance) {
        if (fc >= fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + ratio * (b - a);
            fe = f(e);
        }
    }
    return fc >= fe ? c : e;
}

double simplex_escape_fraction(const CompositionDataset& ds, double alpha, const HelmertBasis& H,
                               int draws, std::uint64_t seed) {
    if (draws <= 0) return std::numeric_limits<double>::quiet_NaN();
    // ilr is onto R^d; nothing escapes.
    if (alpha == 0.0) return 0.0;

    const Eigen::MatrixXd z = isometric_coordinates(ds, alpha, H);
    const Eigen::VectorXd mean = z.colwise().mean().transpose();
    const Eigen::LLT<Eigen::MatrixXd> chol(ml_covariance(z));
    if (chol.info() != Eigen::Success) {
        throw Error(ErrorCode::SingularCovariance, "covariance is not positive definite");
    }
    const Eigen::MatrixXd L = chol.matrixL();
    const Eigen::MatrixXd Ht = H.matrix().transpose();

    Rng rng(seed);
    Eigen::VectorXd e(mean.size());
    int escaped = 0;
    for (int k = 0; k < draws; ++k) {
        for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = rng.normal();
        const Eigen::VectorXd draw = mean + L * e;
        // u = (1 + alpha H^T z) / D must be strictly positive.
        const Eigen::ArrayXd u = 1.0 + alpha * (Ht * draw).array();
        if (!(u > 0.0).all()) ++escaped;
    }
    return static_cast<double>(escaped) / static_cast<double>(draws);
}

ProfileLikelihoodResult select_alpha(const CompositionDataset& ds, const CriterionSpec& spec,
                                     const HelmertBasis& H) {
    const ProfileLogLikelihood criterion(ds.parts(), spec.include_jacobian);
    return select_alpha(ds, spec, H, criterion);
}

ProfileLikelihoodResult select_alpha(const CompositionDataset& ds, const CriterionSpec& spec,
                                     const HelmertBasis& H, const AlphaCriterion& criterion) {
    spec.validate();
    if (ds.has_zero() && spec.lo <= 0.0) {
        throw Error(ErrorCode::ZeroPartNotAllowed,
                    "data contain zeros; the search interval must have lo > 0");
    }
    if (ds.has_zero() && spec.include_jacobian) {
        throw Error(ErrorCode::ZeroPartNotAllowed,
                    "data contain zeros; the Jacobian term is unbounded there, drop it to compare alphas");
    }
    require_enough_rows(ds);

    const auto points = static_cast<std::size_t>(spec.grid_points);
    std::vector<double> grid(points);
    std::vector<double> loglik(points);
    for (std::size_t k = 0; k < points; ++k) {
        grid[k] = k + 1 == points ? spec.hi
                                  : spec.lo + (spec.hi - spec.lo) * static_cast<double>(k) /
                                                  static_cast<double>(points - 1);
        loglik[k] = criterion.evaluate(ds, grid[k]);
    }

    const auto best = static_cast<std::size_t>(
        std::distance(loglik.begin(), std::max_element(loglik.begin(), loglik.end())));
    const double left = grid[best == 0 ? 0 : best - 1];
    const double right = grid[best + 1 == points ? best : best + 1];
    const auto f = [&](double alpha) { return criterion.evaluate(ds, alpha); };
    double alpha_hat = golden_section_maximize(f, left, right, spec.tolerance);
    double loglik_hat = f(alpha_hat);
    if (loglik_hat < loglik[best]) {
        alpha_hat = grid[best];
        loglik_hat = loglik[best];
    }

    bool boundary = false;
    if (alpha_hat - spec.lo <= spec.tolerance && best == 0) {
        alpha_hat = spec.lo;
        loglik_hat = loglik.front();
        boundary = true;
    } else if (spec.hi - alpha_hat <= spec.tolerance && best + 1 == points) {
        alpha_hat = spec.hi;
        loglik_hat = loglik.back();
        boundary = true;
    }

    std::optional<Composition> mean_lra;
    if (!ds.has_zero()) mean_lra = mean_frechet_alpha(ds, 0.0).mean;

    return ProfileLikelihoodResult{
        std::move(grid),
        std::move(loglik),
        alpha_hat,
        loglik_hat,
        boundary,
        std::move(mean_lra),
        mean_frechet_alpha(ds, alpha_hat).mean,
        mean_frechet_alpha(ds, 1.0).mean,
        simplex_escape_fraction(ds, alpha_hat, H, spec.escape_draws, spec.seed),
    };
}

} // namespace coda

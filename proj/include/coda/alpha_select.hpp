#pragma once

// Choice of alpha by maximizing the profile log-likelihood of the
// alpha-transformed data under a multivariate normal model.
//
// For fixed alpha the normal parameters are profiled out (sample mean and
// maximum-likelihood covariance), leaving
//
//   l_z(alpha) = -(n/2) log det S_z - (n d / 2)(log 2 pi + 1) + J(alpha),
//
// where S_z is the ML covariance of the isometric coordinates z and J is the
// summed log |det dz/dtheta| over observations (theta the first d parts).
// The Jacobian makes values at different alpha comparable, as in Box-Cox.
//
// l_u is the same construction on y = H u with the Jacobian of the power map
// theta -> (u_1..u_d). Since z = (D/alpha) y, the two differ by the volume
// factor of the first-d chart of the simplex, sqrt(D) per observation:
// l_z - l_u = (n/2) log D for every alpha.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coda/composition.hpp"

namespace coda {

// ML covariance (divisor n) of the rows of a sample matrix.
Eigen::MatrixXd ml_covariance(const Eigen::MatrixXd& rows);

// log det of a symmetric positive definite matrix. Throws SingularCovariance
// when the matrix is not numerically positive definite.
double log_det_spd(const Eigen::MatrixXd& matrix);

// n x d matrix of isometric alpha coordinates, one row per observation.
Eigen::MatrixXd isometric_coordinates(const CompositionDataset& ds, double alpha, const HelmertBasis& H);

// Profile log-likelihood in z coordinates. Requires strictly positive data
// when alpha <= 0 (and always when the Jacobian is included) and n > d.
double profile_loglik_z(const CompositionDataset& ds, double alpha, const HelmertBasis& H,
                        bool include_jacobian = true);

// Profile log-likelihood in the u parameterization, reduced through y = H u,
// with the closed-form power-map Jacobian alpha^d prod(u) / prod(x). At
// alpha == 0 both y and the Jacobian vanish like alpha^d; the limit is taken
// analytically (y / alpha -> H clr(x) / D).
double profile_loglik_u(const CompositionDataset& ds, double alpha);

// Extension point for alpha-selection criteria; larger is better.
class AlphaCriterion {
public:
    virtual ~AlphaCriterion() = default;
    virtual std::string name() const = 0;
    virtual double evaluate(const CompositionDataset& ds, double alpha) const = 0;
};

class ProfileLogLikelihood final : public AlphaCriterion {
public:
    explicit ProfileLogLikelihood(std::size_t parts, bool include_jacobian = true)
        : basis_(helmert_basis(parts)), include_jacobian_(include_jacobian) {}

    std::string name() const override {
        return include_jacobian_ ? "profile_loglik" : "profile_loglik_no_jacobian";
    }
    double evaluate(const CompositionDataset& ds, double alpha) const override {
        return profile_loglik_z(ds, alpha, basis_, include_jacobian_);
    }

private:
    HelmertBasis basis_;
    bool include_jacobian_;
};

enum class CriterionKind { profile_loglik };

struct CriterionSpec {
    CriterionKind kind = CriterionKind::profile_loglik;
    double lo = -1.0;
    double hi = 1.0;
    int grid_points = 41;
    // Golden-section stopping width in alpha.
    double tolerance = 1e-5;
    bool include_jacobian = true;
    // Monte Carlo simplex-escape diagnostic; 0 draws disables it.
    int escape_draws = 10000;
    std::uint64_t seed = 42;

    // Throws SpecError for lo >= hi, an interval outside [-1, 1] or fewer
    // than 11 grid points.
    void validate() const;
};

// [-1, 1] for strictly positive data. When any part is zero: [0.01, 1] and
// no Jacobian term.
CriterionSpec default_criterion(const CompositionDataset& ds);

struct ProfileLikelihoodResult {
    std::vector<double> grid;
    std::vector<double> loglik;
    double alpha_hat;
    double loglik_hat;
    // The maximum sits on an end of the search interval.
    bool boundary_maximum;
    std::optional<Composition> mean_lra;  // mu_(0); absent when the data hold zeros
    Composition mean_alpha;    // mu_(alpha_hat)
    Composition mean_rda;      // mu_(1)
    // Fraction of the fitted normal (in z space at alpha_hat) falling outside
    // the image of the simplex; NaN when the diagnostic is disabled.
    double escape_fraction;
};

// Coarse grid over [spec.lo, spec.hi], then golden-section refinement in the
// sub-interval bracketing the best grid point.
ProfileLikelihoodResult select_alpha(const CompositionDataset& ds, const CriterionSpec& spec,
                                     const HelmertBasis& H);

// Same search driven by an arbitrary criterion.
ProfileLikelihoodResult select_alpha(const CompositionDataset& ds, const CriterionSpec& spec,
                                     const HelmertBasis& H, const AlphaCriterion& criterion);

// Monte Carlo estimate of the fitted normal's mass outside the simplex image.
double simplex_escape_fraction(const CompositionDataset& ds, double alpha, const HelmertBasis& H,
                               int draws, std::uint64_t seed);

// Maximizer of a unimodal f on [lo, hi], to interval width tolerance.
double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                               double tolerance);

} // namespace coda

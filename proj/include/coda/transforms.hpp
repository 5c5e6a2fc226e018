#pragma once

// Log-ratio, Box-Cox ratio and alpha-power transformations of compositions.
//
// Component indices are 0-based throughout the library; the CLI takes
// 1-based indices.

#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "coda/composition.hpp"

namespace coda {

enum class TransformKind { clr, ilr, alr, boxcox_ratio, alpha_power, alpha_isometric };

const char* to_string(TransformKind kind);
std::optional<TransformKind> parse_transform_kind(const std::string& name);

struct TransformSpec {
    TransformKind kind = TransformKind::clr;
    // lambda for boxcox_ratio, alpha for the two alpha kinds.
    double alpha = 1.0;
    // Common divisor for alr and boxcox_ratio; defaults to the last part.
    std::optional<std::size_t> divisor_index;

    // Throws InvalidAlpha / DimensionMismatch when the spec cannot apply to D parts.
    void validate(std::size_t parts) const;
    // Columns produced for D-part input: D for clr and alpha_power, D - 1 otherwise.
    std::size_t output_width(std::size_t parts) const;
};

struct TransformedData {
    Eigen::MatrixXd values;   // n x output_width
    TransformSpec spec;
};

// y_i = log(x_i / g(x)), g the geometric mean. Sums to zero.
Eigen::VectorXd clr(const Composition& x);

// z = H clr(x).
Eigen::VectorXd ilr(const Composition& x, const HelmertBasis& H);

// log(x_i / x_divisor) for every i != divisor, in original order.
Eigen::VectorXd alr(const Composition& x, std::size_t divisor_index);
Eigen::VectorXd alr(const Composition& x);

// ((x_i / x_divisor)^lambda - 1) / lambda; lambda == 0 is alr.
Eigen::VectorXd boxcox_ratio(const Composition& x, double lambda, std::size_t divisor_index);

// u = C(x^alpha) for alpha in [-1, 1] \ {0}. Zeros are allowed only for
// alpha > 0. alpha == 0 is rejected: the power map collapses every point to
// the barycentre there, so the alpha -> 0 limit is only reachable through
// alpha_isometric (which becomes ilr).
Composition alpha_power(const Composition& x, double alpha);

// z = (1/alpha) H (D u - 1) with u = alpha_power(x, alpha); ilr at alpha == 0.
Eigen::VectorXd alpha_isometric(const Composition& x, double alpha, const HelmertBasis& H);

// C(u^(1/alpha)), the inverse of alpha_power on the open simplex.
Composition inverse_alpha_power(const Composition& u, double alpha);

// Inverse of alpha_isometric. Throws OutsideSimplex when z has no preimage
// (the implied u has a nonpositive part).
Composition inverse_alpha_isometric(const Eigen::VectorXd& z, double alpha, const HelmertBasis& H);

// d x d Jacobian of theta -> z, where theta = (x_1, ..., x_d) charts the
// simplex (x_D = 1 - sum theta):
//   dz/dtheta = D H (diag(u) - u u^T) diag(1/x) E,   E = [I_d; -1^T].
// Valid at alpha == 0 with u the barycentre. Strictly positive x only.
Eigen::MatrixXd alpha_isometric_jacobian(const Composition& x, double alpha, const HelmertBasis& H);

// log |det alpha_isometric_jacobian(x, alpha, H)| via LU.
double alpha_isometric_log_jacobian(const Composition& x, double alpha, const HelmertBasis& H);

// Applies spec to every row. Positivity errors carry the offending component.
TransformedData transform(const CompositionDataset& ds, const TransformSpec& spec);

// Throws InvalidAlpha unless alpha lies in [-1, 1].
void require_alpha_in_domain(double alpha, const char* operation);

} // namespace coda

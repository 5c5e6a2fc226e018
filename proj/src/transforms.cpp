#include "coda/transforms.hpp"

#include <cmath>

namespace coda {

const char* to_string(TransformKind kind) {
    switch (kind) {
    case TransformKind::clr: return "clr";
    case TransformKind::ilr: return "ilr";
    case TransformKind::alr: return "alr";
    case TransformKind::boxcox_ratio: return "boxcox";
    case TransformKind::alpha_power: return "alpha";
    case TransformKind::alpha_isometric: return "alpha-iso";
    }
    return "unknown";
}

std::optional<TransformKind> parse_transform_kind(const std::string& name) {
    for (auto kind : {TransformKind::clr, TransformKind::ilr, TransformKind::alr,
                      TransformKind::boxcox_ratio, TransformKind::alpha_power,
                      TransformKind::alpha_isometric}) {
        if (name == to_string(kind)) return kind;
    }
    return std::nullopt;
}

void require_alpha_in_domain(double alpha, const char* operation) {
    if (!std::isfinite(alpha) || alpha < -1.0 || alpha > 1.0) {
        throw Error(ErrorCode::InvalidAlpha,
                    std::string(operation) + ": alpha must lie in [-1, 1], got " + std::to_string(alpha));
    }
}

namespace {

void require_nonzero_alpha(double alpha, const char* operation) {
    if (alpha == 0.0) {
        throw Error(ErrorCode::InvalidAlpha,
                    std::string(operation) +
                        ": alpha = 0 maps every composition to the barycentre; use ilr "
                        "(alpha_isometric at alpha = 0) instead");
    }
}

void require_divisor(std::size_t divisor_index, std::size_t parts) {
    if (divisor_index >= parts) {
        throw Error(ErrorCode::SpecError, "divisor index " + std::to_string(divisor_index + 1) +
                                              " out of range 1.." + std::to_string(parts));
    }
}

void require_basis(const HelmertBasis& H, std::size_t parts) {
    if (H.parts() != parts) {
        throw Error(ErrorCode::DimensionMismatch, "Helmert basis built for " +
                                                      std::to_string(H.parts()) + " parts, data has " +
                                                      std::to_string(parts));
    }
}

} // namespace

void TransformSpec::validate(std::size_t parts) const {
    if (!std::isfinite(alpha)) throw Error(ErrorCode::InvalidAlpha, "transform parameter is not finite");
    switch (kind) {
    case TransformKind::alpha_power:
        require_alpha_in_domain(alpha, "alpha_power");
        require_nonzero_alpha(alpha, "alpha_power");
        break;
    case TransformKind::alpha_isometric:
        require_alpha_in_domain(alpha, "alpha_isometric");
        break;
    case TransformKind::alr:
    case TransformKind::boxcox_ratio:
        if (divisor_index) require_divisor(*divisor_index, parts);
        break;
    case TransformKind::clr:
    case TransformKind::ilr:
        break;
    }
}

std::size_t TransformSpec::output_width(std::size_t parts) const {
    switch (kind) {
    case TransformKind::clr:
    case TransformKind::alpha_power:
        return parts;
    default:
        return parts - 1;
    }
}

Eigen::VectorXd clr(const Composition& x) {
    require_strictly_positive(x, "clr");
    Eigen::VectorXd logs = x.parts().array().log().matrix();
    return logs.array() - logs.mean();
}

Eigen::VectorXd ilr(const Composition& x, const HelmertBasis& H) {
    require_basis(H, x.size());
    return H.matrix() * clr(x);
}

Eigen::VectorXd alr(const Composition& x, std::size_t divisor_index) {
    require_divisor(divisor_index, x.size());
    require_strictly_positive(x, "alr");
    Eigen::VectorXd out(static_cast<Eigen::Index>(x.dimension()));
    const double log_divisor = std::log(x[divisor_index]);
    Eigen::Index k = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i != divisor_index) out[k++] = std::log(x[i]) - log_divisor;
    }
    return out;
}

Eigen::VectorXd alr(const Composition& x) { return alr(x, x.size() - 1); }

Eigen::VectorXd boxcox_ratio(const Composition& x, double lambda, std::size_t divisor_index) {
    if (!std::isfinite(lambda)) throw Error(ErrorCode::InvalidAlpha, "boxcox_ratio: lambda is not finite");
    if (lambda == 0.0) return alr(x, divisor_index);
    Eigen::VectorXd out = alr(x, divisor_index);
    // expm1 keeps the small-lambda limit free of cancellation.
    for (Eigen::Index k = 0; k < out.size(); ++k) out[k] = std::expm1(lambda * out[k]) / lambda;
    return out;
}

Composition alpha_power(const Composition& x, double alpha) {
    require_alpha_in_domain(alpha, "alpha_power");
    require_nonzero_alpha(alpha, "alpha_power");
    if (alpha < 0.0) require_strictly_positive(x, "alpha_power with alpha < 0");
    if (alpha == 1.0) return closure(x.parts());
    Eigen::VectorXd powered(x.parts().size());
    for (Eigen::Index i = 0; i < powered.size(); ++i) {
        powered[i] = x.parts()[i] > 0.0 ? std::pow(x.parts()[i], alpha) : 0.0;
    }
    return closure(powered);
}

Eigen::VectorXd alpha_isometric(const Composition& x, double alpha, const HelmertBasis& H) {
    require_alpha_in_domain(alpha, "alpha_isometric");
    if (alpha == 0.0) return ilr(x, H);
    require_basis(H, x.size());
    const Composition u = alpha_power(x, alpha);
    const auto D = static_cast<double>(x.size());
    return H.matrix() * ((D * u.parts()).array() - 1.0).matrix() / alpha;
}

Composition inverse_alpha_power(const Composition& u, double alpha) {
    require_alpha_in_domain(alpha, "inverse_alpha_power");
    require_nonzero_alpha(alpha, "inverse_alpha_power");
    require_strictly_positive(u, "inverse_alpha_power");
    if (alpha == 1.0) return closure(u.parts());
    return closure(u.parts().array().pow(1.0 / alpha).matrix());
}

Composition inverse_alpha_isometric(const Eigen::VectorXd& z, double alpha, const HelmertBasis& H) {
    require_alpha_in_domain(alpha, "inverse_alpha_isometric");
    if (static_cast<std::size_t>(z.size()) + 1 != H.parts()) {
        throw Error(ErrorCode::DimensionMismatch, "inverse_alpha_isometric: z has wrong length");
    }
    const Eigen::VectorXd centred = H.matrix().transpose() * z;
    if (alpha == 0.0) return closure(centred.array().exp().matrix());

    const auto D = static_cast<double>(H.parts());
    const Eigen::VectorXd u = (1.0 + alpha * centred.array()) / D;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (!(u[i] > 0.0)) {
            throw Error(ErrorCode::OutsideSimplex,
                        "inverse_alpha_isometric: point has no preimage in the simplex",
                        static_cast<std::size_t>(i));
        }
    }
    return inverse_alpha_power(Composition(u), alpha);
}

Eigen::MatrixXd alpha_isometric_jacobian(const Composition& x, double alpha, const HelmertBasis& H) {
    require_alpha_in_domain(alpha, "alpha_isometric_jacobian");
    require_basis(H, x.size());
    require_strictly_positive(x, "alpha_isometric_jacobian");

    // The chart lives on the simplex; stored rows may be off by the closure tolerance.
    const Composition xc = closure(x.parts());
    const auto D = static_cast<Eigen::Index>(x.size());
    const Eigen::VectorXd u = alpha == 0.0 ? Composition::uniform(x.size()).parts()
                                           : alpha_power(xc, alpha).parts();

    // du/dx = alpha (diag(u) - u u^T) diag(1/x); dz/du = (D/alpha) H.
    Eigen::MatrixXd dudx = -u * u.transpose();
    dudx.diagonal() += u;
    dudx = dudx * xc.parts().cwiseInverse().asDiagonal();

    // Chart x = E theta + e_D: column k of (A E) is A_k - A_D.
    const Eigen::MatrixXd chart =
        dudx.leftCols(D - 1) - dudx.col(D - 1) * Eigen::RowVectorXd::Ones(D - 1);
    return static_cast<double>(D) * H.matrix() * chart;
}

double alpha_isometric_log_jacobian(const Composition& x, double alpha, const HelmertBasis& H) {
    const Eigen::MatrixXd J = alpha_isometric_jacobian(x, alpha, H);
    return std::log(std::abs(J.partialPivLu().determinant()));
}

TransformedData transform(const CompositionDataset& ds, const TransformSpec& spec) {
    const std::size_t D = ds.parts();
    spec.validate(D);
    const HelmertBasis H = helmert_basis(D);
    const std::size_t divisor = spec.divisor_index.value_or(D - 1);

    TransformedData out{Eigen::MatrixXd(static_cast<Eigen::Index>(ds.rows()),
                                        static_cast<Eigen::Index>(spec.output_width(D))),
                        spec};
    for (std::size_t j = 0; j < ds.rows(); ++j) {
        const Composition& x = ds.row(j);
        try {
            Eigen::VectorXd row;
            switch (spec.kind) {
            case TransformKind::clr: row = clr(x); break;
            case TransformKind::ilr: row = ilr(x, H); break;
            case TransformKind::alr: row = alr(x, divisor); break;
            case TransformKind::boxcox_ratio: row = boxcox_ratio(x, spec.alpha, divisor); break;
            case TransformKind::alpha_power: row = alpha_power(x, spec.alpha).parts(); break;
            case TransformKind::alpha_isometric: row = alpha_isometric(x, spec.alpha, H); break;
            }
            out.values.row(static_cast<Eigen::Index>(j)) = row.transpose();
        } catch (const Error& e) {
            rethrow_for_row(e, ds, j);
        }
    }
    return out;
}

} // namespace coda

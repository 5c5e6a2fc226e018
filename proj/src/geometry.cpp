#include "coda/geometry.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <set>

#include "coda/transforms.hpp"

namespace coda {

double dist_rda(const Composition& x, const Composition& w) {
    require_same_size(x, w, "dist_rda");
    // Stored rows may sit off the simplex by the closure tolerance.
    return (closure(x.parts()).parts() - closure(w.parts()).parts()).norm();
}

double dist_lra(const Composition& x, const Composition& w) {
    require_same_size(x, w, "dist_lra");
    return (clr(x) - clr(w)).norm();
}

double dist_alpha(const Composition& x, const Composition& w, double alpha) {
    require_same_size(x, w, "dist_alpha");
    require_alpha_in_domain(alpha, "dist_alpha");
    if (alpha == 0.0) {
        throw Error(ErrorCode::InvalidAlpha, "dist_alpha: alpha must be nonzero; use dist_lra");
    }
    const auto D = static_cast<double>(x.size());
    const double scale = std::abs(D / alpha);
    return scale * (alpha_power(x, alpha).parts() - alpha_power(w, alpha).parts()).norm();
}

double distance(const Composition& x, const Composition& w, const DistanceSpec& spec) {
    switch (spec.kind) {
    case DistanceKind::rda: return dist_rda(x, w);
    case DistanceKind::lra: return dist_lra(x, w);
    case DistanceKind::alpha: return dist_alpha(x, w, spec.alpha);
    }
    return 0.0;
}

Composition mean_arithmetic(const CompositionDataset& ds) {
    Eigen::VectorXd total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ds.parts()));
    for (const auto& row : ds.data()) total += row.parts();
    return closure(total / static_cast<double>(ds.rows()));
}

Composition mean_geometric_closed(const CompositionDataset& ds) {
    Eigen::VectorXd log_total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ds.parts()));
    for (std::size_t j = 0; j < ds.rows(); ++j) {
        const Composition& row = ds.row(j);
        try {
            require_strictly_positive(row, "mean_geometric_closed");
        } catch (const Error& e) {
            rethrow_for_row(e, ds, j);
        }
        log_total += row.parts().array().log().matrix();
    }
    const Eigen::VectorXd log_mean = log_total / static_cast<double>(ds.rows());
    // Shift before exponentiating; closure removes the common factor.
    return closure((log_mean.array() - log_mean.maxCoeff()).exp().matrix());
}

double frechet_objective(const CompositionDataset& ds, const Composition& h, double alpha) {
    double total = 0.0;
    for (const auto& row : ds.data()) {
        const double dist = alpha == 0.0 ? dist_lra(row, h) : dist_alpha(row, h, alpha);
        total += dist * dist;
    }
    return total;
}

FrechetMeanResult mean_frechet_alpha(const CompositionDataset& ds, double alpha) {
    require_alpha_in_domain(alpha, "mean_frechet_alpha");
    if (alpha == 0.0) {
        Composition mean = mean_geometric_closed(ds);
        const double objective = frechet_objective(ds, mean, alpha);
        return {std::move(mean), alpha, objective};
    }
    if (alpha == 1.0) {
        Composition mean = mean_arithmetic(ds);
        const double objective = frechet_objective(ds, mean, alpha);
        return {std::move(mean), alpha, objective};
    }

    Eigen::VectorXd u_total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ds.parts()));
    for (std::size_t j = 0; j < ds.rows(); ++j) {
        try {
            u_total += alpha_power(ds.row(j), alpha).parts();
        } catch (const Error& e) {
            rethrow_for_row(e, ds, j);
        }
    }
    const Composition u_mean(u_total / static_cast<double>(ds.rows()));
    if (alpha < 0.0) require_strictly_positive(u_mean, "mean_frechet_alpha");
    // u^(1/alpha) under- or overflows for small |alpha|; shift in the log domain.
    const Eigen::Index D = u_mean.parts().size();
    Eigen::VectorXd log_powered(D);
    double top = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < D; ++i) {
        const double u = u_mean.parts()[i];
        log_powered[i] = u > 0.0 ? std::log(u) / alpha : -std::numeric_limits<double>::infinity();
        top = std::max(top, log_powered[i]);
    }
    Eigen::VectorXd powered(D);
    for (Eigen::Index i = 0; i < D; ++i) powered[i] = std::exp(log_powered[i] - top);
    Composition mean = closure(powered);
    const double objective = frechet_objective(ds, mean, alpha);
    return {std::move(mean), alpha, objective};
}

Composition subcomposition(const Composition& x, const std::vector<std::size_t>& subset) {
    if (subset.size() < 2) {
        throw Error(ErrorCode::DimensionTooSmall, "subcomposition needs at least 2 components");
    }
    std::set<std::size_t> seen;
    Eigen::VectorXd parts(static_cast<Eigen::Index>(subset.size()));
    for (std::size_t k = 0; k < subset.size(); ++k) {
        if (subset[k] >= x.size() || !seen.insert(subset[k]).second) {
            throw Error(ErrorCode::SpecError, "subcomposition indices must be distinct and in range");
        }
        parts[static_cast<Eigen::Index>(k)] = x[subset[k]];
    }
    return closure(parts);
}

bool check_subcompositional_dominance(const Composition& x, const Composition& w,
                                      const std::vector<std::size_t>& subset,
                                      const DistanceSpec& spec) {
    require_same_size(x, w, "check_subcompositional_dominance");
    const double full = distance(x, w, spec);
    const double sub = distance(subcomposition(x, subset), subcomposition(w, subset), spec);
    return sub <= full + 1e-12;
}

} // namespace coda

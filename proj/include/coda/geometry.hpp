#pragma once

// Simplicial distances and their Frechet means.

#include <cstddef>
#include <vector>

#include "coda/composition.hpp"

namespace coda {

enum class DistanceKind { rda, lra, alpha };

struct DistanceSpec {
    DistanceKind kind = DistanceKind::lra;
    double alpha = 1.0;  // used when kind == alpha; nonzero, in [-1, 1]
};

// Euclidean distance between raw compositions.
double dist_rda(const Composition& x, const Composition& w);

// Aitchison distance: Euclidean distance between clr images.
double dist_lra(const Composition& x, const Composition& w);

// |D / alpha| * ||u(x) - u(w)|| with u the alpha-power transform. The
// absolute value keeps the distance nonnegative for alpha < 0.
double dist_alpha(const Composition& x, const Composition& w, double alpha);

double distance(const Composition& x, const Composition& w, const DistanceSpec& spec);

// Component-wise average (Frechet mean under dist_rda), re-closed.
Composition mean_arithmetic(const CompositionDataset& ds);

// Closure of component-wise geometric means (Frechet mean under dist_lra).
Composition mean_geometric_closed(const CompositionDataset& ds);

struct FrechetMeanResult {
    Composition mean;
    double alpha;
    // Sum of squared distances from the rows to the mean.
    double objective;
};

// mu_(alpha) = C( (mean_j u_ij)^(1/alpha) ). alpha == 1 takes the
// arithmetic-mean path, alpha == 0 the closed geometric mean.
FrechetMeanResult mean_frechet_alpha(const CompositionDataset& ds, double alpha);

// Sum over rows of dist(row, h)^2 with dist = dist_lra at alpha == 0 and
// dist_alpha otherwise.
double frechet_objective(const CompositionDataset& ds, const Composition& h, double alpha);

// dist(C(x[subset]), C(w[subset])) <= dist(x, w) + 1e-12.
bool check_subcompositional_dominance(const Composition& x, const Composition& w,
                                      const std::vector<std::size_t>& subset,
                                      const DistanceSpec& spec);

// C(x[subset]) for distinct in-range indices, at least two of them.
Composition subcomposition(const Composition& x, const std::vector<std::size_t>& subset);

} // namespace coda

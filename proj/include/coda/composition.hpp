#pragma once

// Points of the standard simplex, datasets of them, and the basic simplex
// algebra: closure, perturbation, simplicial addition, Helmert basis.

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coda/error.hpp"

namespace coda {

// Rows whose sum is within this distance of 1 are kept verbatim; anything
// further away is re-closed on construction.
inline constexpr double kClosureTolerance = 1e-6;

// A point of the simplex S^d: D >= 2 nonnegative parts summing to one.
//
// Zeros are admitted here and rejected by the log-based and negative-power
// operations that cannot handle them.
class Composition {
public:
    explicit Composition(Eigen::VectorXd parts);
    Composition(std::initializer_list<double> parts);

    static Composition uniform(std::size_t parts);

    std::size_t size() const noexcept { return static_cast<std::size_t>(parts_.size()); }
    // d = D - 1, the dimension of the simplex.
    std::size_t dimension() const noexcept { return size() - 1; }

    double operator[](std::size_t i) const { return parts_[static_cast<Eigen::Index>(i)]; }
    const Eigen::VectorXd& parts() const noexcept { return parts_; }

    bool strictly_positive() const noexcept;
    // Index of the first zero part, or size() if there is none.
    std::size_t first_zero() const noexcept;

private:
    Eigen::VectorXd parts_;
};

// C(v) = v / sum(v). Always divides, unlike the Composition constructor.
Composition closure(const Eigen::VectorXd& v);
Composition closure(std::initializer_list<double> v);

// x (+)_0 w: component-wise product followed by closure.
Composition perturb(const Composition& x, const Composition& w);

// x (+)_1 w: component-wise sum followed by closure.
Composition simplicial_add(const Composition& x, const Composition& w);

// Throws ZeroPartNotAllowed naming the first zero part of x.
void require_strictly_positive(const Composition& x, const char* operation);
void require_same_size(const Composition& x, const Composition& w, const char* operation);

// n labelled compositions sharing D components.
class CompositionDataset {
public:
    CompositionDataset(std::vector<Composition> rows, std::vector<std::string> component_names,
                       std::vector<std::string> row_ids);
    // Default labels: components C1..CD, rows 1..n.
    explicit CompositionDataset(std::vector<Composition> rows);

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t parts() const noexcept { return rows_.front().size(); }

    const Composition& row(std::size_t i) const { return rows_.at(i); }
    const std::vector<Composition>& data() const noexcept { return rows_; }
    const std::vector<std::string>& component_names() const noexcept { return names_; }
    const std::vector<std::string>& row_ids() const noexcept { return ids_; }

    bool has_zero() const noexcept;
    // n x D matrix, one composition per row.
    Eigen::MatrixXd matrix() const;

private:
    std::vector<Composition> rows_;
    std::vector<std::string> names_;
    std::vector<std::string> ids_;
};

// Rethrows an error raised while processing row j, prefixed with the row id
// and, when the error names one, the component.
[[noreturn]] void rethrow_for_row(const Error& e, const CompositionDataset& ds, std::size_t j);

// d x D matrix with orthonormal rows, each orthogonal to the ones vector.
class HelmertBasis {
public:
    explicit HelmertBasis(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {}

    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
    std::size_t parts() const noexcept { return static_cast<std::size_t>(matrix_.cols()); }

private:
    Eigen::MatrixXd matrix_;
};

// Helmert sub-matrix (first row of the full Helmert matrix removed).
// Row i (1-based) holds 1/sqrt(i(i+1)) in columns 1..i and -i/sqrt(i(i+1))
// in column i+1. The sign/orientation is a convention; any orthonormal basis
// of the zero-sum subspace gives the same distances.
HelmertBasis helmert_basis(std::size_t parts);

} // namespace coda

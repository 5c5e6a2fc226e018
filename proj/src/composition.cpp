#include "coda/composition.hpp"

#include <cmath>
#include <set>

namespace coda {

namespace {

void validate_parts(const Eigen::VectorXd& v) {
    if (v.size() < 2) {
        throw Error(ErrorCode::DimensionTooSmall, "composition needs at least 2 parts");
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw Error(ErrorCode::DegenerateInput,
                        "non-finite part at component " + std::to_string(i + 1),
                        static_cast<std::size_t>(i));
        }
        if (v[i] < 0.0) {
            throw Error(ErrorCode::NegativePart,
                        "negative part at component " + std::to_string(i + 1),
                        static_cast<std::size_t>(i));
        }
    }
    if (!(v.sum() > 0.0)) {
        throw Error(ErrorCode::DegenerateInput, "all parts are zero");
    }
}

Eigen::VectorXd to_vector(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double value : values) v[i++] = value;
    return v;
}

} // namespace

Composition::Composition(Eigen::VectorXd parts) : parts_(std::move(parts)) {
    validate_parts(parts_);
    const double total = parts_.sum();
    if (std::abs(total - 1.0) > kClosureTolerance) parts_ /= total;
}

Composition::Composition(std::initializer_list<double> parts) : Composition(to_vector(parts)) {}

Composition Composition::uniform(std::size_t parts) {
    if (parts < 2) throw Error(ErrorCode::DimensionTooSmall, "composition needs at least 2 parts");
    const auto D = static_cast<Eigen::Index>(parts);
    return Composition(Eigen::VectorXd::Constant(D, 1.0 / static_cast<double>(parts)));
}

bool Composition::strictly_positive() const noexcept { return first_zero() == size(); }

std::size_t Composition::first_zero() const noexcept {
    for (std::size_t i = 0; i < size(); ++i) {
        if ((*this)[i] <= 0.0) return i;
    }
    return size();
}

Composition closure(const Eigen::VectorXd& v) {
    validate_parts(v);
    Composition out(v / v.sum());
    return out;
}

Composition closure(std::initializer_list<double> v) { return closure(to_vector(v)); }

void require_strictly_positive(const Composition& x, const char* operation) {
    const std::size_t zero = x.first_zero();
    if (zero != x.size()) {
        throw Error(ErrorCode::ZeroPartNotAllowed,
                    std::string(operation) + ": zero part at component " + std::to_string(zero + 1),
                    zero);
    }
}

void require_same_size(const Composition& x, const Composition& w, const char* operation) {
    if (x.size() != w.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(operation) + ": " + std::to_string(x.size()) + " vs " +
                        std::to_string(w.size()) + " parts");
    }
}

Composition perturb(const Composition& x, const Composition& w) {
    require_same_size(x, w, "perturb");
    require_strictly_positive(x, "perturb");
    require_strictly_positive(w, "perturb");
    return closure(x.parts().cwiseProduct(w.parts()));
}

Composition simplicial_add(const Composition& x, const Composition& w) {
    require_same_size(x, w, "simplicial_add");
    return closure(x.parts() + w.parts());
}

CompositionDataset::CompositionDataset(std::vector<Composition> rows,
                                       std::vector<std::string> component_names,
                                       std::vector<std::string> row_ids)
    : rows_(std::move(rows)), names_(std::move(component_names)), ids_(std::move(row_ids)) {
    if (rows_.empty()) throw Error(ErrorCode::DegenerateInput, "dataset has no rows");
    const std::size_t D = rows_.front().size();
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i].size() != D) {
            throw Error(ErrorCode::DimensionMismatch,
                        "row " + std::to_string(i + 1) + " has " + std::to_string(rows_[i].size()) +
                            " parts, expected " + std::to_string(D));
        }
    }
    if (names_.size() != D) {
        throw Error(ErrorCode::DimensionMismatch, "component name count does not match parts");
    }
    if (ids_.size() != rows_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "row id count does not match rows");
    }
    std::set<std::string> seen;
    for (const auto& name : names_) {
        if (!seen.insert(name).second) {
            throw Error(ErrorCode::SpecError, "duplicate component name '" + name + "'");
        }
    }
}

namespace {

std::vector<std::string> numbered(const std::string& prefix, std::size_t count) {
    std::vector<std::string> labels;
    labels.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) labels.push_back(prefix + std::to_string(i));
    return labels;
}

} // namespace

CompositionDataset::CompositionDataset(std::vector<Composition> rows)
    : CompositionDataset(rows, numbered("C", rows.empty() ? 0 : rows.front().size()),
                         numbered("", rows.size())) {}

bool CompositionDataset::has_zero() const noexcept {
    for (const auto& row : rows_) {
        if (!row.strictly_positive()) return true;
    }
    return false;
}

Eigen::MatrixXd CompositionDataset::matrix() const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(parts()));
    for (std::size_t j = 0; j < rows(); ++j) m.row(static_cast<Eigen::Index>(j)) = rows_[j].parts().transpose();
    return m;
}

HelmertBasis helmert_basis(std::size_t parts) {
    if (parts < 2) throw Error(ErrorCode::DimensionTooSmall, "Helmert basis needs D >= 2");
    const auto D = static_cast<Eigen::Index>(parts);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(D - 1, D);
    for (Eigen::Index i = 1; i < D; ++i) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(i * (i + 1)));
        H.row(i - 1).head(i).setConstant(scale);
        H(i - 1, i) = -static_cast<double>(i) * scale;
    }
    return HelmertBasis(std::move(H));
}

void rethrow_for_row(const Error& e, const CompositionDataset& ds, std::size_t j) {
    std::string where = "row " + ds.row_ids().at(j);
    if (e.component() && *e.component() < ds.parts()) {
        where += ", component '" + ds.component_names()[*e.component()] + "'";
    }
    throw Error(e.code(), where + ": " + e.what(), e.component());
}

} // namespace coda

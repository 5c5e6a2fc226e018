#include "coda/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "coda/alpha_select.hpp"
#include "coda/dataset_io.hpp"
#include "coda/fixtures.hpp"
#include "coda/geometry.hpp"
#include "coda/ternary_plot.hpp"
#include "coda/transforms.hpp"

namespace coda::cli {

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::UnknownFixture:
    case ErrorCode::SpecError:
        return kUsageError;
    case ErrorCode::SingularCovariance:
    case ErrorCode::OracleNonConvergence:
        return kNumericalError;
    default:
        return kDomainError;
    }
}

namespace {

struct Streams {
    std::ostream& out;
    std::ostream& err;
};

CompositionDataset ingest(const std::string& path, std::ostream& err) {
    IngestReport report;
    CompositionDataset ds = read_dataset_file(path, &report);
    if (report.reclosed_rows > 0) {
        err << "warning: re-closed " << report.reclosed_rows
            << " row(s) whose sum deviated from 1 by more than 1e-6; worst row " << *report.worst_row
            << " (deviation " << format_number(report.worst_deviation, 3) << ")\n";
    }
    return ds;
}

// Writes to the named file, or to `fallback` when the path is empty.
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
    if (path.empty()) {
        body(fallback);
        return;
    }
    std::ofstream file(path);
    if (!file) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
    body(file);
    if (!file) throw Error(ErrorCode::ParseError, "failed writing '" + path + "'");
}

std::string trimmed_alpha(double alpha) {
    std::ostringstream s;
    s << alpha;
    return "alpha=" + s.str();
}

std::string joined(const Composition& x, int digits) {
    std::string out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) out += ',';
        out += format_number(x[i], digits);
    }
    return out;
}

struct FixtureOptions {
    std::string name;
    std::string output;
};

struct TransformOptions {
    std::string input;
    std::string kind;
    double alpha = 1.0;
    std::size_t divisor = 0;  // 1-based; 0 selects the last part
    std::string output;
    int precision = 7;
};

struct MeanOptions {
    std::string input;
    std::vector<double> alphas;
    bool all = false;
    int precision = 7;
};

struct DistOptions {
    std::string input;
    std::string kind = "lra";
    double alpha = 1.0;
    std::vector<std::size_t> pair;
    bool matrix = false;
    int precision = 7;
};

struct SelectOptions {
    std::string input;
    std::optional<double> lo;
    std::optional<double> hi;
    int grid = 41;
    std::string plot;
    std::uint64_t seed = 42;
    int draws = 10000;
    bool no_jacobian = false;
    bool show_grid = false;
    int precision = 7;
};

struct PlotOptions {
    std::string input;
    std::string output;
    std::optional<double> alpha;
    std::string title;
};

void cmd_fixture(const FixtureOptions& o, Streams io) {
    // Resolve the name before touching the output file.
    const auto names = fixture_names();
    if (std::find(names.begin(), names.end(), o.name) == names.end()) load_fixture(o.name);
    emit(o.output, io.out, [&](std::ostream& s) { write_fixture_csv(o.name, s); });
}

void cmd_transform(const TransformOptions& o, Streams io) {
    const auto kind = parse_transform_kind(o.kind);
    if (!kind) {
        throw Error(ErrorCode::SpecError,
                    "unknown transform '" + o.kind + "'; expected clr, ilr, alr, boxcox, alpha or alpha-iso");
    }
    const CompositionDataset ds = ingest(o.input, io.err);
    TransformSpec spec{*kind, o.alpha, std::nullopt};
    if (o.divisor > 0) spec.divisor_index = o.divisor - 1;
    const TransformedData result = transform(ds, spec);

    const std::size_t D = ds.parts();
    const std::size_t divisor = spec.divisor_index.value_or(D - 1);
    std::vector<std::string> columns;
    switch (*kind) {
    case TransformKind::clr:
    case TransformKind::alpha_power:
        for (const auto& name : ds.component_names()) columns.push_back(std::string(to_string(*kind)) + "(" + name + ")");
        break;
    case TransformKind::alr:
    case TransformKind::boxcox_ratio:
        for (std::size_t i = 0; i < D; ++i) {
            if (i != divisor) {
                columns.push_back(std::string(to_string(*kind)) + "(" + ds.component_names()[i] + "/" +
                                  ds.component_names()[divisor] + ")");
            }
        }
        break;
    case TransformKind::ilr:
    case TransformKind::alpha_isometric:
        for (std::size_t k = 1; k < D; ++k) columns.push_back(std::string(to_string(*kind)) + std::to_string(k));
        break;
    }
    emit(o.output, io.out, [&](std::ostream& s) {
        write_table_csv(s, "id", columns, ds.row_ids(), result.values, o.precision);
    });
}

void cmd_mean(const MeanOptions& o, Streams io) {
    if (!o.all && o.alphas.empty()) throw Error(ErrorCode::SpecError, "mean: give --alpha and/or --all");
    const CompositionDataset ds = ingest(o.input, io.err);

    std::vector<double> alphas;
    if (o.all) alphas.push_back(0.0);
    for (double a : o.alphas) {
        if (!o.all || (a != 0.0 && a != 1.0)) alphas.push_back(a);
    }
    if (o.all) alphas.push_back(1.0);

    std::vector<std::string> labels;
    Eigen::MatrixXd values(static_cast<Eigen::Index>(alphas.size()), static_cast<Eigen::Index>(ds.parts()));
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        labels.push_back(trimmed_alpha(alphas[k]));
        values.row(static_cast<Eigen::Index>(k)) = mean_frechet_alpha(ds, alphas[k]).mean.parts().transpose();
    }
    write_table_csv(io.out, "mean", ds.component_names(), labels, values, o.precision);
}

void cmd_dist(const DistOptions& o, Streams io) {
    if (o.matrix == !o.pair.empty()) throw Error(ErrorCode::SpecError, "dist: give exactly one of --pair or --matrix");
    DistanceSpec spec;
    if (o.kind == "rda") spec.kind = DistanceKind::rda;
    else if (o.kind == "lra") spec.kind = DistanceKind::lra;
    else if (o.kind == "alpha") spec.kind = DistanceKind::alpha;
    else throw Error(ErrorCode::SpecError, "unknown distance '" + o.kind + "'; expected rda, lra or alpha");
    spec.alpha = o.alpha;

    const CompositionDataset ds = ingest(o.input, io.err);
    const auto dist = [&](std::size_t i, std::size_t j) {
        try {
            return distance(ds.row(i), ds.row(j), spec);
        } catch (const Error& e) {
            throw Error(e.code(), "rows " + ds.row_ids()[i] + ", " + ds.row_ids()[j] + ": " + e.what(),
                        e.component());
        }
    };

    if (!o.matrix) {
        for (std::size_t index : o.pair) {
            if (index < 1 || index > ds.rows()) {
                throw Error(ErrorCode::SpecError, "row index " + std::to_string(index) + " out of range 1.." +
                                                      std::to_string(ds.rows()));
            }
        }
        io.out << format_number(dist(o.pair[0] - 1, o.pair[1] - 1), o.precision) << '\n';
        return;
    }
    const auto n = static_cast<Eigen::Index>(ds.rows());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            m(i, j) = m(j, i) = dist(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
    write_table_csv(io.out, "id", ds.row_ids(), ds.row_ids(), m, o.precision);
}

void cmd_select_alpha(const SelectOptions& o, Streams io) {
    const CompositionDataset ds = ingest(o.input, io.err);
    CriterionSpec spec = default_criterion(ds);
    if (o.lo) spec.lo = *o.lo;
    if (o.hi) spec.hi = *o.hi;
    spec.grid_points = o.grid;
    spec.seed = o.seed;
    spec.escape_draws = o.draws;
    if (o.no_jacobian) spec.include_jacobian = false;

    const HelmertBasis H = helmert_basis(ds.parts());
    const ProfileLikelihoodResult result = select_alpha(ds, spec, H);
    const int p = o.precision;

    auto& out = io.out;
    out << "criterion: " << (spec.include_jacobian ? "profile_loglik" : "profile_loglik_no_jacobian") << '\n';
    if (ds.has_zero()) out << "note: data contain zeros; alpha > 0 only and no Jacobian term\n";
    out << "observations: " << ds.rows() << '\n';
    out << "parts: " << ds.parts() << '\n';
    out << "interval: [" << format_number(spec.lo, p) << ", " << format_number(spec.hi, p) << "]\n";
    out << "grid_points: " << spec.grid_points << '\n';
    out << "alpha_hat: " << format_number(result.alpha_hat, p) << '\n';
    out << "loglik_at_alpha_hat: " << format_number(result.loglik_hat, p) << '\n';
    out << "boundary_maximum: " << (result.boundary_maximum ? "yes" : "no") << '\n';
    if (std::isnan(result.escape_fraction)) {
        out << "simplex_escape_fraction: not computed\n";
    } else {
        out << "simplex_escape_fraction: " << format_number(result.escape_fraction, p) << " (" << spec.escape_draws
            << " draws, seed " << spec.seed << ")\n";
    }
    out << "components: ";
    for (std::size_t i = 0; i < ds.parts(); ++i) out << (i ? "," : "") << ds.component_names()[i];
    out << '\n';
    if (result.mean_lra) out << "mean[alpha=0]: " << joined(*result.mean_lra, p) << '\n';
    out << "mean[alpha=" << format_number(result.alpha_hat, p) << "]: " << joined(result.mean_alpha, p) << '\n';
    out << "mean[alpha=1]: " << joined(result.mean_rda, p) << '\n';
    if (o.show_grid) {
        out << "grid:\n";
        for (std::size_t k = 0; k < result.grid.size(); ++k) {
            out << "  " << format_number(result.grid[k], p) << ' ' << format_number(result.loglik[k], p) << '\n';
        }
    }

    if (!o.plot.empty()) {
        if (ds.parts() != 3) throw Error(ErrorCode::DimensionMismatch, "--plot needs 3-part data");
        TernaryPlotSpec plot{ds,
                             mean_overlays(result.mean_lra, std::make_pair(result.alpha_hat, result.mean_alpha),
                                           result.mean_rda),
                             Canvas{},
                             std::nullopt,
                             "Frechet means, alpha_hat = " + format_number(result.alpha_hat, 3)};
        emit(o.plot, io.out, [&](std::ostream& s) { s << render_ternary(plot); });
    }
}

void cmd_plot(const PlotOptions& o, Streams io) {
    const CompositionDataset ds = ingest(o.input, io.err);
    if (ds.parts() != 3) throw Error(ErrorCode::DimensionMismatch, "plot needs 3-part data");
    std::optional<Composition> mean_lra;
    if (!ds.has_zero()) mean_lra = mean_geometric_closed(ds);
    std::optional<std::pair<double, Composition>> mean_alpha;
    if (o.alpha) mean_alpha.emplace(*o.alpha, mean_frechet_alpha(ds, *o.alpha).mean);
    TernaryPlotSpec plot{ds, mean_overlays(mean_lra, mean_alpha, mean_arithmetic(ds)), Canvas{}, std::nullopt,
                         o.title};
    emit(o.output, io.out, [&](std::ostream& s) { s << render_ternary(plot); });
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compositional data analysis with the alpha-transformation family", "coda"};
    app.require_subcommand(1);
    Streams io{out, err};

    FixtureOptions fixture;
    auto* fixture_cmd = app.add_subcommand("fixture", "Write an embedded dataset as CSV");
    fixture_cmd->add_option("--name", fixture.name, "Fixture name (table1, synthetic-alpha05)")->required();
    fixture_cmd->add_option("-o,--output", fixture.output, "Output CSV (default: stdout)");

    TransformOptions tr;
    auto* transform_cmd = app.add_subcommand("transform", "Transform every composition in a dataset");
    transform_cmd->add_option("input", tr.input, "Input CSV")->required();
    transform_cmd->add_option("--kind", tr.kind, "clr | ilr | alr | boxcox | alpha | alpha-iso")->required();
    transform_cmd->add_option("--alpha", tr.alpha, "alpha, or lambda for boxcox")->capture_default_str();
    transform_cmd->add_option("--divisor", tr.divisor, "1-based divisor part for alr/boxcox (default: last)");
    transform_cmd->add_option("-o,--output", tr.output, "Output CSV (default: stdout)");
    transform_cmd->add_option("--precision", tr.precision, "Significant digits")->capture_default_str();

    MeanOptions mean;
    auto* mean_cmd = app.add_subcommand("mean", "Frechet means of a dataset");
    mean_cmd->add_option("input", mean.input, "Input CSV")->required();
    mean_cmd->add_option("--alpha", mean.alphas, "alpha values (0 = closed geometric, 1 = arithmetic)");
    mean_cmd->add_flag("--all", mean.all, "Print mu(0), mu(alpha) for each --alpha, and mu(1)");
    mean_cmd->add_option("--precision", mean.precision, "Significant digits")->capture_default_str();

    DistOptions dist;
    auto* dist_cmd = app.add_subcommand("dist", "Distances between compositions");
    dist_cmd->add_option("input", dist.input, "Input CSV")->required();
    dist_cmd->add_option("--kind", dist.kind, "rda | lra | alpha")->capture_default_str();
    dist_cmd->add_option("--alpha", dist.alpha, "alpha for --kind alpha")->capture_default_str();
    dist_cmd->add_option("--pair", dist.pair, "Two 1-based row indices")->expected(2);
    dist_cmd->add_flag("--matrix", dist.matrix, "Full pairwise distance matrix");
    dist_cmd->add_option("--precision", dist.precision, "Significant digits")->capture_default_str();

    SelectOptions sel;
    auto* select_cmd = app.add_subcommand("select-alpha", "Choose alpha by profile likelihood");
    select_cmd->add_option("input", sel.input, "Input CSV")->required();
    select_cmd->add_option("--lo", sel.lo, "Lower end of the search interval (default -1, or 0.01 with zeros)");
    select_cmd->add_option("--hi", sel.hi, "Upper end of the search interval (default 1)");
    select_cmd->add_option("--grid", sel.grid, "Coarse grid points")->capture_default_str();
    select_cmd->add_option("--plot", sel.plot, "Write a ternary diagram with the three means (SVG)");
    select_cmd->add_option("--seed", sel.seed, "Seed for the simplex-escape diagnostic")->capture_default_str();
    select_cmd->add_option("--draws", sel.draws, "Monte Carlo draws for the diagnostic (0 disables)")
        ->capture_default_str();
    select_cmd->add_flag("--no-jacobian", sel.no_jacobian, "Drop the Jacobian term from the likelihood");
    select_cmd->add_flag("--show-grid", sel.show_grid, "Print the coarse grid and its log-likelihoods");
    select_cmd->add_option("--precision", sel.precision, "Significant digits")->capture_default_str();

    PlotOptions plot;
    auto* plot_cmd = app.add_subcommand("plot", "Ternary diagram with closed geometric and arithmetic means");
    plot_cmd->add_option("input", plot.input, "Input CSV (3 parts)")->required();
    plot_cmd->add_option("-o,--output", plot.output, "Output SVG")->required();
    plot_cmd->add_option("--alpha", plot.alpha, "Also overlay mu(alpha)");
    plot_cmd->add_option("--title", plot.title, "Plot title");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    try {
        if (*fixture_cmd) cmd_fixture(fixture, io);
        else if (*transform_cmd) cmd_transform(tr, io);
        else if (*mean_cmd) cmd_mean(mean, io);
        else if (*dist_cmd) cmd_dist(dist, io);
        else if (*select_cmd) cmd_select_alpha(sel, io);
        else if (*plot_cmd) cmd_plot(plot, io);
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
        if (e.code() == ErrorCode::SingularCovariance) {
            err << "the sample is too small or too degenerate relative to the number of parts "
                   "(need more observations than D - 1 and non-collinear transformed data)\n";
        }
        return exit_code_for(e.code());
    }
    return kSuccess;
}

} // namespace coda::cli

// Acceptance run: one line per criterion, nonzero exit if any fails.
//
// Set CODA_ARCTIC_LAKE_CSV to a 39 x 3 Arctic lake CSV to run criterion 9;
// without it that criterion is reported as skipped.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "coda/alpha_select.hpp"
#include "coda/dataset_io.hpp"
#include "coda/fixtures.hpp"
#include "coda/geometry.hpp"
#include "coda/ternary_plot.hpp"
#include "coda/transforms.hpp"
#include "frechet_oracle.hpp"
#include "random_compositions.hpp"

using namespace coda;
using coda::testing::max_abs_diff;
using coda::testing::random_composition;

namespace {

enum class Outcome { pass, fail, skip };

struct Verdict {
    Outcome outcome;
    std::string detail;
};

Verdict verdict(bool ok, std::string detail) { return {ok ? Outcome::pass : Outcome::fail, std::move(detail)}; }

std::string num(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3g", v);
    return buffer;
}

int failures = 0;

void criterion(int id, const std::string& title, double time_limit_s, const std::function<Verdict()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {Outcome::fail, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (v.outcome != Outcome::skip && time_limit_s > 0 && seconds >= time_limit_s) {
        v.outcome = Outcome::fail;
        v.detail += "; over the " + num(time_limit_s) + " s budget";
    }
    const char* tag = v.outcome == Outcome::pass ? "PASS" : v.outcome == Outcome::fail ? "FAIL" : "SKIP";
    if (v.outcome == Outcome::fail) ++failures;
    std::printf("[%s] %2d %s: %s (%.3f s)\n", tag, id, title.c_str(), v.detail.c_str(), seconds);
    std::fflush(stdout);
}

double log_abs_det(const Eigen::MatrixXd& m) { return std::log(std::abs(m.partialPivLu().determinant())); }

// Central differences of theta -> z in the first-d chart of the simplex.
Eigen::MatrixXd numeric_jacobian(const Composition& x, double alpha, const HelmertBasis& H, double h) {
    const auto D = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd J(D - 1, D - 1);
    for (Eigen::Index k = 0; k < D - 1; ++k) {
        Eigen::VectorXd up = x.parts();
        Eigen::VectorXd down = x.parts();
        up[k] += h;
        up[D - 1] -= h;
        down[k] -= h;
        down[D - 1] += h;
        J.col(k) = (alpha_isometric(Composition(up), alpha, H) - alpha_isometric(Composition(down), alpha, H)) /
                   (2.0 * h);
    }
    return J;
}

struct SvgCounts {
    std::size_t data = 0;
    std::size_t overlays = 0;
    std::vector<std::pair<double, double>> points;
    std::vector<std::pair<double, double>> frame;
};

std::vector<std::pair<double, double>> parse_points(const std::string& text) {
    std::vector<std::pair<double, double>> out;
    std::istringstream in(text);
    std::string pair;
    while (in >> pair) {
        const auto comma = pair.find(',');
        out.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
    }
    return out;
}

void walk_svg(const boost::property_tree::ptree& node, SvgCounts& counts) {
    for (const auto& [tag, child] : node) {
        if (tag == "<xmlattr>") continue;
        const std::string cls = child.get("<xmlattr>.class", "");
        if (tag == "circle" && cls == "data") {
            ++counts.data;
            counts.points.emplace_back(child.get<double>("<xmlattr>.cx"), child.get<double>("<xmlattr>.cy"));
        } else if (tag == "polygon" && cls == "overlay") {
            ++counts.overlays;
            // The glyph centre is the vertex average.
            const auto vertices = parse_points(child.get<std::string>("<xmlattr>.points"));
            double cx = 0.0, cy = 0.0;
            for (const auto& [x, y] : vertices) {
                cx += x / static_cast<double>(vertices.size());
                cy += y / static_cast<double>(vertices.size());
            }
            counts.points.emplace_back(cx, cy);
        } else if (tag == "polygon" && cls == "frame") {
            counts.frame = parse_points(child.get<std::string>("<xmlattr>.points"));
        }
        walk_svg(child, counts);
    }
}

// Smallest signed distance (pixels) from p to the three edge lines,
// positive inside.
double inside_margin(const std::pair<double, double>& p, const std::vector<std::pair<double, double>>& tri) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& [ax, ay] = tri[k];
        const auto& [bx, by] = tri[(k + 1) % 3];
        const auto& [cx, cy] = tri[(k + 2) % 3];
        const double length = std::hypot(bx - ax, by - ay);
        const double side_p = ((bx - ax) * (p.second - ay) - (by - ay) * (p.first - ax)) / length;
        const double side_c = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
        worst = std::min(worst, side_c > 0 ? side_p : -side_p);
    }
    return worst;
}

} // namespace

int main() {
    const CompositionDataset table1 = load_fixture_table1();

    criterion(1, "table1 fixture means", 1.0, [&] {
        const double a = max_abs_diff(mean_arithmetic(table1).parts(), table1_arithmetic_mean().parts());
        const double g = max_abs_diff(mean_geometric_closed(table1).parts(), table1_closed_geometric_mean().parts());
        return verdict(a <= 1e-6 && g <= 1e-6,
                       "arithmetic max diff " + num(a) + ", closed geometric max diff " + num(g) + " (tol 1e-6)");
    });

    criterion(2, "Family endpoints", 0.0, [&] {
        const double one = max_abs_diff(mean_frechet_alpha(table1, 1.0).mean.parts(), mean_arithmetic(table1).parts());
        const double zero =
            max_abs_diff(mean_frechet_alpha(table1, 0.0).mean.parts(), mean_geometric_closed(table1).parts());
        std::mt19937_64 rng(2002);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const std::size_t D = 2 + static_cast<std::size_t>(k % 9);
            const Composition x = random_composition(rng, D);
            const Composition w = random_composition(rng, D);
            worst = std::max(worst, std::abs(dist_alpha(x, w, 1.0) - static_cast<double>(D) * dist_rda(x, w)));
        }
        return verdict(one == 0.0 && zero <= 1e-12 && worst <= 1e-12,
                       "mu(1) vs arithmetic " + num(one) + " (exact), mu(0) vs geometric " + num(zero) +
                           " (tol 1e-12), dist_alpha(1) vs D*rda worst " + num(worst) + " over 1000 pairs (tol 1e-12)");
    });

    criterion(3, "Limit convergence", 0.0, [&] {
        // Moderate spread: iid parts in [0.2, 1] before closure. The gap is
        // first order in alpha with a coefficient of order |clr|^2, so the
        // 1e-3 bound at alpha = 0.001 needs log-ratios of this size.
        std::mt19937_64 rng(3003);
        std::uniform_real_distribution<double> part(0.2, 1.0);
        const std::size_t dims[] = {3, 5, 10};
        const double alphas[] = {0.1, 0.01, 0.001};
        double worst = 0.0;
        int non_monotone = 0;
        for (int k = 0; k < 100; ++k) {
            const std::size_t D = dims[k % 3];
            Eigen::VectorXd a(static_cast<Eigen::Index>(D));
            Eigen::VectorXd b(static_cast<Eigen::Index>(D));
            for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = part(rng);
            for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = part(rng);
            const Composition x = closure(a);
            const Composition w = closure(b);
            double previous = std::numeric_limits<double>::infinity();
            for (double alpha : alphas) {
                const double gap = std::abs(dist_alpha(x, w, alpha) - dist_lra(x, w));
                if (!(gap < previous)) ++non_monotone;
                previous = gap;
            }
            worst = std::max(worst, previous);
        }

        // Wide spread (flat Dirichlet, parts down to ~1e-4): the gap must
        // match the first-order term <dc, q> / (2 |dc|) alpha, where dc is the
        // clr difference and q the difference of centred squared clr values.
        double residual = 0.0;
        for (int k = 0; k < 100; ++k) {
            const std::size_t D = dims[k % 3];
            const Composition x = random_composition(rng, D);
            const Composition w = random_composition(rng, D);
            const Eigen::ArrayXd cx = clr(x).array();
            const Eigen::ArrayXd cw = clr(w).array();
            const Eigen::VectorXd dc = (cx - cw).matrix();
            const Eigen::VectorXd q =
                ((cx.square() - cx.square().mean()) - (cw.square() - cw.square().mean())).matrix();
            const double slope = dc.dot(q) / (2.0 * dc.norm());
            residual = std::max(residual, std::abs(dist_alpha(x, w, 1e-3) - dist_lra(x, w) - 1e-3 * slope));
        }

        const Composition mu0 = mean_frechet_alpha(table1, 0.0).mean;
        double previous = std::numeric_limits<double>::infinity();
        bool means_monotone = true;
        std::string gaps;
        for (double alpha : alphas) {
            const double gap = max_abs_diff(mean_frechet_alpha(table1, alpha).mean.parts(), mu0.parts());
            means_monotone = means_monotone && gap < previous;
            previous = gap;
            gaps += (gaps.empty() ? "" : ", ") + num(gap);
        }
        return verdict(worst < 1e-3 && non_monotone == 0 && means_monotone && residual <= 1e-4,
                       "distance gap at 0.001 worst " + num(worst) + " (tol 1e-3), " +
                           std::to_string(non_monotone) + " non-monotone of 100; wide-spread first-order residual " +
                           num(residual) + " (tol 1e-4); mean gaps " + gaps);
    });

    criterion(4, "Metric axioms", 0.0, [&] {
        std::mt19937_64 rng(4004);
        std::uniform_real_distribution<double> scale(1e-3, 1e3);
        const DistanceSpec lra{DistanceKind::lra, 1.0};
        double scale_worst = 0.0;
        double perturb_worst = 0.0;
        int dominance_failures = 0;
        for (int k = 0; k < 10000; ++k) {
            const std::size_t D = 2 + static_cast<std::size_t>(k % 9);
            const Eigen::VectorXd v = coda::testing::random_positive(rng, D);
            const Eigen::VectorXd u = coda::testing::random_positive(rng, D);
            scale_worst = std::max(scale_worst, std::abs(dist_lra(closure(scale(rng) * v), closure(scale(rng) * u)) -
                                                         dist_lra(closure(v), closure(u))));
        }
        for (int k = 0; k < 10000; ++k) {
            const std::size_t D = 2 + static_cast<std::size_t>(k % 9);
            const Composition x = random_composition(rng, D);
            const Composition w = random_composition(rng, D);
            const Composition p = random_composition(rng, D);
            perturb_worst = std::max(perturb_worst, std::abs(dist_lra(perturb(x, p), perturb(w, p)) - dist_lra(x, w)));
        }
        for (int k = 0; k < 10000; ++k) {
            const std::size_t D = 3 + static_cast<std::size_t>(k % 8);
            const Composition x = random_composition(rng, D);
            const Composition w = random_composition(rng, D);
            std::vector<std::size_t> subset(D);
            for (std::size_t i = 0; i < D; ++i) subset[i] = i;
            std::shuffle(subset.begin(), subset.end(), rng);
            subset.resize(2 + rng() % (D - 1));
            const double full = dist_lra(x, w);
            const double sub = dist_lra(subcomposition(x, subset), subcomposition(w, subset));
            if (sub > full + 1e-10) ++dominance_failures;
        }
        const Composition cx{0.064871890388514916, 0.35378253519772146, 0.58134557441376356};
        const Composition cw{0.60448908640089716, 0.046306570390170311, 0.34920434320893246};
        const double rda_full = dist_rda(cx, cw);
        const double rda_sub = dist_rda(subcomposition(cx, {0, 1}), subcomposition(cw, {0, 1}));
        return verdict(scale_worst <= 1e-10 && perturb_worst <= 1e-10 && dominance_failures == 0 && rda_sub > rda_full,
                       "scale worst " + num(scale_worst) + ", perturbation worst " + num(perturb_worst) + ", " +
                           std::to_string(dominance_failures) +
                           " dominance failures of 10000 (tol 1e-10); rda counterexample sub " + num(rda_sub) +
                           " > full " + num(rda_full));
    });

    criterion(5, "Frechet closed form vs oracle", 30.0, [&] {
        double worst = 0.0;
        std::string per_alpha;
        for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
            const double diff =
                max_abs_diff(mean_frechet_alpha(table1, alpha).mean.parts(), testing::frechet_oracle(table1, alpha).parts());
            worst = std::max(worst, diff);
            per_alpha += (per_alpha.empty() ? "" : ", ") + num(alpha) + ": " + num(diff);
        }
        return verdict(worst <= 1e-5, "max diff per alpha {" + per_alpha + "} (tol 1e-5)");
    });

    criterion(6, "Likelihood offset identity", 0.0, [&] {
        const HelmertBasis H = helmert_basis(3);
        const double expected = 0.5 * static_cast<double>(table1.rows()) * std::log(3.0);
        double worst = 0.0;
        for (int k = 0; k <= 40; ++k) {
            const double alpha = k == 40 ? 1.0 : -1.0 + 2.0 * k / 40.0;
            worst = std::max(worst, std::abs(profile_loglik_z(table1, alpha, H) - profile_loglik_u(table1, alpha) -
                                             expected));
        }
        return verdict(worst <= 1e-8, "worst |l_z - l_u - (n/2) log D| over 41 alphas " + num(worst) + " (tol 1e-8)");
    });

    criterion(7, "Jacobian correctness", 0.0, [&] {
        std::mt19937_64 rng(7007);
        const double alphas[] = {-0.5, 0.25, 0.75, 1.0};
        const std::size_t dims[] = {3, 4, 6};
        double worst = 0.0;
        for (int k = 0; k < 200; ++k) {
            const double alpha = alphas[k % 4];
            const std::size_t D = dims[(k / 4) % 3];
            const HelmertBasis H = helmert_basis(D);
            const Composition x = random_composition(rng, D);
            const double analytic = alpha_isometric_log_jacobian(x, alpha, H);
            const double numeric = log_abs_det(numeric_jacobian(x, alpha, H, 1e-6));
            // |log a - log b| bounds the relative error of the determinants.
            worst = std::max(worst, std::abs(std::expm1(numeric - analytic)));
        }
        return verdict(worst <= 1e-5, "worst relative determinant error over 200 points " + num(worst) + " (tol 1e-5)");
    });

    criterion(8, "alpha recovery", 10.0, [&] {
        const CompositionDataset ds = synthetic_alpha_dataset();
        const ProfileLikelihoodResult r = select_alpha(ds, default_criterion(ds), helmert_basis(3));
        return verdict(r.alpha_hat >= 0.4 && r.alpha_hat <= 0.6,
                       "alpha_hat " + num(r.alpha_hat) + " on n = " + std::to_string(ds.rows()) +
                           " (accept [0.4, 0.6])");
    });

    criterion(9, "Arctic lake reproduction", 0.0, [&]() -> Verdict {
        const char* path = std::getenv("CODA_ARCTIC_LAKE_CSV");
        if (!path || !*path) return {Outcome::skip, "CODA_ARCTIC_LAKE_CSV not set; data not shipped"};
        const CompositionDataset ds = read_dataset_file(path);
        if (ds.rows() != 39 || ds.parts() != 3) {
            return {Outcome::fail, "expected 39 x 3, got " + std::to_string(ds.rows()) + " x " +
                                       std::to_string(ds.parts())};
        }
        CriterionSpec spec = default_criterion(ds);
        spec.escape_draws = 0;
        const double with_j = select_alpha(ds, spec, helmert_basis(3)).alpha_hat;
        spec.include_jacobian = false;
        const double without_j = select_alpha(ds, spec, helmert_basis(3)).alpha_hat;
        const bool with_ok = std::abs(with_j - 0.362) <= 0.01;
        const bool without_ok = std::abs(without_j - 0.362) <= 0.01;
        return verdict(with_ok || without_ok,
                       "alpha_hat with Jacobian " + num(with_j) + (with_ok ? " (matches)" : "") + ", without " +
                           num(without_j) + (without_ok ? " (matches)" : "") + " (target 0.362 +- 0.01)");
    });

    criterion(10, "Plot validity", 0.0, [&] {
        std::string detail;
        bool ok = true;
        const std::vector<std::vector<Overlay>> overlay_sets = {
            {},
            mean_overlays(mean_geometric_closed(table1), std::nullopt, mean_arithmetic(table1)),
            mean_overlays(mean_geometric_closed(table1), std::pair{0.5, mean_frechet_alpha(table1, 0.5).mean},
                          mean_arithmetic(table1)),
        };
        for (const auto& overlays : overlay_sets) {
            const std::string svg = render_ternary(TernaryPlotSpec{table1, overlays, Canvas{}, std::nullopt, "table1"});
            std::istringstream in(svg);
            boost::property_tree::ptree tree;
            boost::property_tree::read_xml(in, tree);
            SvgCounts counts;
            walk_svg(tree, counts);
            double margin = std::numeric_limits<double>::infinity();
            for (const auto& p : counts.points) margin = std::min(margin, inside_margin(p, counts.frame));
            // Coordinates are printed to 1e-3 px.
            const bool this_ok = counts.frame.size() == 3 && counts.data == table1.rows() &&
                                 counts.overlays == overlays.size() && margin >= -1e-3;
            ok = ok && this_ok;
            detail += (detail.empty() ? "" : "; ") + std::to_string(counts.data) + " data + " +
                      std::to_string(counts.overlays) + "/" + std::to_string(overlays.size()) +
                      " overlays, min edge margin " + num(margin) + " px";
        }
        return verdict(ok, detail);
    });

    std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}

#include "coda/ternary_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace coda {

namespace {

constexpr double kHeightRatio = 0.86602540378443864676;  // sqrt(3) / 2

std::string fmt(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3f", value);
    // Avoid "-0.000".
    if (std::string_view(buffer) == "-0.000") return "0.000";
    return buffer;
}

std::string escape_xml(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

double side_length(const Canvas& canvas) {
    return std::min(canvas.width - 2.0 * canvas.margin,
                    (canvas.height - 2.0 * canvas.margin) / kHeightRatio);
}

const char* style_name(MarkerStyle style) {
    switch (style) {
    case MarkerStyle::circle: return "circle";
    case MarkerStyle::triangle: return "triangle";
    case MarkerStyle::square: return "square";
    case MarkerStyle::diamond: return "diamond";
    }
    return "circle";
}

const char* style_colour(MarkerStyle style) {
    switch (style) {
    case MarkerStyle::circle: return "#7f7f7f";
    case MarkerStyle::triangle: return "#d62728";
    case MarkerStyle::square: return "#2ca02c";
    case MarkerStyle::diamond: return "#1f77b4";
    }
    return "#000000";
}

// Glyph vertices centred (by vertex average) on p.
std::vector<PlotPoint> glyph(MarkerStyle style, PlotPoint p, double r) {
    switch (style) {
    case MarkerStyle::triangle:
        return {{p.x, p.y - r}, {p.x + r * kHeightRatio, p.y + r / 2}, {p.x - r * kHeightRatio, p.y + r / 2}};
    case MarkerStyle::square:
        return {{p.x - r, p.y - r}, {p.x + r, p.y - r}, {p.x + r, p.y + r}, {p.x - r, p.y + r}};
    case MarkerStyle::diamond:
        return {{p.x, p.y - r}, {p.x + r, p.y}, {p.x, p.y + r}, {p.x - r, p.y}};
    case MarkerStyle::circle: {
        std::vector<PlotPoint> ring;
        for (int k = 0; k < 12; ++k) {
            const double angle = k * 3.14159265358979323846 / 6.0;
            ring.push_back({p.x + r * std::cos(angle), p.y + r * std::sin(angle)});
        }
        return ring;
    }
    }
    return {};
}

std::string points_attribute(const std::vector<PlotPoint>& points) {
    std::string out;
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (k) out += ' ';
        out += fmt(points[k].x) + ',' + fmt(points[k].y);
    }
    return out;
}

void require_ternary(const Composition& x, const char* what) {
    if (x.size() != 3) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": ternary plots need 3 parts, got " + std::to_string(x.size()));
    }
}

} // namespace

PlotPoint barycentric_to_unit(const Composition& x) {
    require_ternary(x, "barycentric_to_unit");
    // A contributes (0, 0).
    return {x[1] + 0.5 * x[2], kHeightRatio * x[2]};
}

PlotPoint barycentric_to_canvas(const Composition& x, const Canvas& canvas) {
    const PlotPoint unit = barycentric_to_unit(x);
    const double side = side_length(canvas);
    const double left = (canvas.width - side) / 2.0;
    const double base = canvas.height - canvas.margin;
    return {left + unit.x * side, base - unit.y * side};
}

std::array<PlotPoint, 3> triangle_vertices(const Canvas& canvas) {
    return {barycentric_to_canvas(Composition{1.0, 0.0, 0.0}, canvas),
            barycentric_to_canvas(Composition{0.0, 1.0, 0.0}, canvas),
            barycentric_to_canvas(Composition{0.0, 0.0, 1.0}, canvas)};
}

std::vector<Overlay> mean_overlays(const std::optional<Composition>& mean_lra,
                                   const std::optional<std::pair<double, Composition>>& mean_alpha,
                                   const Composition& mean_rda) {
    std::vector<Overlay> overlays;
    if (mean_lra) overlays.push_back({"closed geometric mean (alpha = 0)", *mean_lra, MarkerStyle::triangle});
    if (mean_alpha) {
        char label[64];
        std::snprintf(label, sizeof label, "Frechet mean (alpha = %.3f)", mean_alpha->first);
        overlays.push_back({label, mean_alpha->second, MarkerStyle::square});
    }
    overlays.push_back({"arithmetic mean (alpha = 1)", mean_rda, MarkerStyle::diamond});
    return overlays;
}

std::string render_ternary(const TernaryPlotSpec& spec) {
    const Canvas& canvas = spec.canvas;
    if (spec.dataset.parts() != 3) {
        throw Error(ErrorCode::SpecError, "ternary plot needs a 3-part dataset");
    }
    if (!(side_length(canvas) > 0.0)) throw Error(ErrorCode::SpecError, "canvas too small for the triangle");
    for (const auto& overlay : spec.overlays) {
        if (overlay.point.size() != 3) {
            throw Error(ErrorCode::SpecError, "overlay '" + overlay.label + "' is not a 3-part composition");
        }
    }
    const std::array<std::string, 3> labels = spec.vertex_labels.value_or(std::array<std::string, 3>{
        spec.dataset.component_names()[0], spec.dataset.component_names()[1],
        spec.dataset.component_names()[2]});

    const auto [a, b, c] = triangle_vertices(canvas);
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(canvas.width)
        << "\" height=\"" << fmt(canvas.height) << "\" viewBox=\"0 0 " << fmt(canvas.width) << ' '
        << fmt(canvas.height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt(canvas.width) << "\" height=\"" << fmt(canvas.height)
        << "\" fill=\"white\"/>\n";
    if (!spec.title.empty()) {
        svg << "<text class=\"title\" x=\"" << fmt(canvas.width / 2) << "\" y=\"18.000\" text-anchor=\"middle\">"
            << escape_xml(spec.title) << "</text>\n";
    }

    svg << "<polygon class=\"frame\" points=\"" << points_attribute({a, b, c})
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<text class=\"vertex-label\" x=\"" << fmt(a.x) << "\" y=\"" << fmt(a.y + 18)
        << "\" text-anchor=\"middle\">" << escape_xml(labels[0]) << "</text>\n";
    svg << "<text class=\"vertex-label\" x=\"" << fmt(b.x) << "\" y=\"" << fmt(b.y + 18)
        << "\" text-anchor=\"middle\">" << escape_xml(labels[1]) << "</text>\n";
    svg << "<text class=\"vertex-label\" x=\"" << fmt(c.x) << "\" y=\"" << fmt(c.y - 8)
        << "\" text-anchor=\"middle\">" << escape_xml(labels[2]) << "</text>\n";

    svg << "<g class=\"data-points\" fill=\"" << style_colour(MarkerStyle::circle) << "\">\n";
    for (std::size_t j = 0; j < spec.dataset.rows(); ++j) {
        const PlotPoint p = barycentric_to_canvas(spec.dataset.row(j), canvas);
        svg << "<circle class=\"data\" id=\"row-" << j + 1 << "\" cx=\"" << fmt(p.x) << "\" cy=\""
            << fmt(p.y) << "\" r=\"2.500\"><title>" << escape_xml(spec.dataset.row_ids()[j])
            << "</title></circle>\n";
    }
    svg << "</g>\n";

    for (std::size_t k = 0; k < spec.overlays.size(); ++k) {
        const Overlay& overlay = spec.overlays[k];
        const PlotPoint p = barycentric_to_canvas(overlay.point, canvas);
        svg << "<polygon class=\"overlay\" data-marker=\"" << style_name(overlay.style) << "\" points=\""
            << points_attribute(glyph(overlay.style, p, 6.0)) << "\" fill=\"" << style_colour(overlay.style)
            << "\" stroke=\"black\" stroke-width=\"0.8\"><title>" << escape_xml(overlay.label)
            << "</title></polygon>\n";
    }

    svg << "<g class=\"legend\">\n";
    double y = spec.title.empty() ? 16.0 : 36.0;
    const double x = 12.0;
    svg << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y - 4) << "\" r=\"2.500\" fill=\""
        << style_colour(MarkerStyle::circle) << "\"/>\n";
    svg << "<text x=\"" << fmt(x + 12) << "\" y=\"" << fmt(y) << "\">data (n = " << spec.dataset.rows()
        << ")</text>\n";
    for (const auto& overlay : spec.overlays) {
        y += 16.0;
        svg << "<polygon points=\"" << points_attribute(glyph(overlay.style, {x, y - 4}, 5.0))
            << "\" fill=\"" << style_colour(overlay.style) << "\" stroke=\"black\" stroke-width=\"0.6\"/>\n";
        svg << "<text x=\"" << fmt(x + 12) << "\" y=\"" << fmt(y) << "\">" << escape_xml(overlay.label)
            << "</text>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

} // namespace coda

#pragma once

// Ternary diagrams as SVG 1.1 text.
//
// Orientation: vertex A (first part) bottom-left, B bottom-right, C top.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "coda/composition.hpp"

namespace coda {

enum class MarkerStyle { circle, triangle, square, diamond };

struct Overlay {
    std::string label;
    Composition point;
    MarkerStyle style;
};

struct Canvas {
    double width = 520.0;
    double height = 500.0;
    double margin = 50.0;
};

struct TernaryPlotSpec {
    CompositionDataset dataset;
    std::vector<Overlay> overlays;
    Canvas canvas;
    // Defaults to the dataset's component names.
    std::optional<std::array<std::string, 3>> vertex_labels;
    std::string title;
};

struct PlotPoint {
    double x;
    double y;
};

// A = (0, 0), B = (1, 0), C = (1/2, sqrt(3)/2); y points up.
PlotPoint barycentric_to_unit(const Composition& x);

// Unit coordinates scaled into the canvas; y points down as in SVG. The
// triangle is centred horizontally with its base on the bottom margin.
PlotPoint barycentric_to_canvas(const Composition& x, const Canvas& canvas);

// Canvas positions of vertices A, B, C.
std::array<PlotPoint, 3> triangle_vertices(const Canvas& canvas);

// Overlays for mu_(0), mu_(alpha), mu_(1) with the fixed glyph convention:
// triangle, square, diamond, in that legend order.
std::vector<Overlay> mean_overlays(const std::optional<Composition>& mean_lra,
                                   const std::optional<std::pair<double, Composition>>& mean_alpha,
                                   const Composition& mean_rda);

// Triangle outline, vertex labels, one <circle class="data"> per row, one
// <polygon class="overlay"> per overlay, and a legend. Byte-identical output
// for identical specs. Throws SpecError for non-ternary data or a canvas too
// small to hold the triangle.
std::string render_ternary(const TernaryPlotSpec& spec);

} // namespace coda

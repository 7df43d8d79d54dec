#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

namespace qtc {

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::optional<double> x_min{}, x_max{}, y_min{}, y_max{}; // autoscaled when empty
    int width = 640;
    int height = 480;
};

/// Static scatter plot. Throws IoError on failure.
void write_scatter_svg(const std::filesystem::path& path, std::span<const double> xs, std::span<const double> ys,
                       const PlotSpec& spec);

/// Polyline plot; non-finite points break the line. An optional straight
/// segment (slope, intercept over [seg_x0, seg_x1]) is overlaid.
struct Segment {
    double slope;
    double intercept;
    double x0;
    double x1;
};
void write_line_svg(const std::filesystem::path& path, std::span<const double> xs, std::span<const double> ys,
                    const PlotSpec& spec, std::optional<Segment> fit = std::nullopt);

} // namespace qtc

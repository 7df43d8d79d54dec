#include "qtc/svg.hpp"

#include "qtc/csv.hpp"
#include "qtc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace qtc {
namespace {

struct Frame {
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    double left = 70, right = 20, top = 40, bottom = 50;
    int w = 640, h = 480;

    double px(double x) const { return left + (x - x0) / (x1 - x0) * (w - left - right); }
    double py(double y) const { return h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom); }
};

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

Frame make_frame(std::span<const double> xs, std::span<const double> ys, const PlotSpec& spec)
{
    double xl = std::numeric_limits<double>::infinity(), xh = -xl, yl = xl, yh = -xl;
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if (std::isfinite(xs[i]) && std::isfinite(ys[i])) {
            xl = std::min(xl, xs[i]);
            xh = std::max(xh, xs[i]);
            yl = std::min(yl, ys[i]);
            yh = std::max(yh, ys[i]);
        }
    }
    if (!std::isfinite(xl)) {
        xl = 0, xh = 1, yl = 0, yh = 1;
    }
    auto pad = [](double& lo, double& hi) {
        if (hi - lo <= 0.0) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            const double d = 0.05 * (hi - lo);
            lo -= d;
            hi += d;
        }
    };
    pad(xl, xh);
    pad(yl, yh);
    Frame f;
    f.x0 = spec.x_min.value_or(xl);
    f.x1 = spec.x_max.value_or(xh);
    f.y0 = spec.y_min.value_or(yl);
    f.y1 = spec.y_max.value_or(yh);
    f.w = spec.width;
    f.h = spec.height;
    return f;
}

void header(std::ostream& out, const Frame& f, const PlotSpec& spec)
{
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.w << "\" height=\"" << f.h
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<rect x=\"" << f.left << "\" y=\"" << f.top << "\" width=\"" << f.w - f.left - f.right
        << "\" height=\"" << f.h - f.top - f.bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << f.w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(spec.title)
        << "</text>\n";
    out << "<text x=\"" << f.w / 2 << "\" y=\"" << f.h - 10 << "\" text-anchor=\"middle\">" << escape(spec.x_label)
        << "</text>\n";
    out << "<text transform=\"translate(16," << f.h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(spec.y_label) << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double x = f.x0 + (f.x1 - f.x0) * i / 4.0;
        const double y = f.y0 + (f.y1 - f.y0) * i / 4.0;
        out << "<text x=\"" << f.px(x) << "\" y=\"" << f.h - f.bottom + 16 << "\" text-anchor=\"middle\">"
            << format_double(std::round(x * 1e4) / 1e4) << "</text>\n";
        out << "<text x=\"" << f.left - 6 << "\" y=\"" << f.py(y) + 4 << "\" text-anchor=\"end\">"
            << format_double(std::round(y * 1e4) / 1e4) << "</text>\n";
    }
}

void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out << "</svg>\n";
    out.close();
    if (out.fail()) {
        throw IoError("write failed: " + path.string());
    }
}

std::ofstream open(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.imbue(std::locale::classic());
    return out;
}

} // namespace

void write_scatter_svg(const std::filesystem::path& path, std::span<const double> xs, std::span<const double> ys,
                       const PlotSpec& spec)
{
    auto out = open(path);
    const auto f = make_frame(xs, ys, spec);
    header(out, f, spec);
    out << "<g fill=\"#1f4e9c\" fill-opacity=\"0.6\">\n";
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]) || xs[i] < f.x0 || xs[i] > f.x1 || ys[i] < f.y0 ||
            ys[i] > f.y1) {
            continue;
        }
        out << "<circle cx=\"" << f.px(xs[i]) << "\" cy=\"" << f.py(ys[i]) << "\" r=\"1.2\"/>\n";
    }
    out << "</g>\n";
    finish(out, path);
}

void write_line_svg(const std::filesystem::path& path, std::span<const double> xs, std::span<const double> ys,
                    const PlotSpec& spec, std::optional<Segment> fit)
{
    auto out = open(path);
    const auto f = make_frame(xs, ys, spec);
    header(out, f, spec);
    std::ostringstream pts;
    pts.imbue(std::locale::classic());
    auto flush = [&] {
        if (!pts.str().empty()) {
            out << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"" << pts.str()
                << "\"/>\n";
            pts.str("");
        }
    };
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
            flush();
            continue;
        }
        pts << f.px(xs[i]) << ',' << f.py(ys[i]) << ' ';
    }
    flush();
    if (fit) {
        out << "<line x1=\"" << f.px(fit->x0) << "\" y1=\"" << f.py(fit->slope * fit->x0 + fit->intercept)
            << "\" x2=\"" << f.px(fit->x1) << "\" y2=\"" << f.py(fit->slope * fit->x1 + fit->intercept)
            << "\" stroke=\"#c0392b\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
    }
    finish(out, path);
}

} // namespace qtc

#include "qtc/stats.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qtc {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y)
{
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) {
        throw std::invalid_argument("linear_fit: need >= 2 paired points");
    }
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument("linear_fit: x values are all equal");
    }
    LinearFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    const double ssr = std::max(0.0, syy - f.slope * sxy);
    f.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    f.slope_stderr = n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : 0.0;
    return f;
}

double mean(std::span<const double> v)
{
    if (v.empty()) {
        throw std::invalid_argument("mean of empty sample");
    }
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v)
{
    if (v.size() < 2) {
        throw std::invalid_argument("sample_variance needs >= 2 values");
    }
    const double m = mean(v);
    double s = 0.0;
    for (double a : v) {
        s += (a - m) * (a - m);
    }
    return s / static_cast<double>(v.size() - 1);
}

double correlation(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size() || a.size() < 2) {
        throw std::invalid_argument("correlation: need >= 2 paired values");
    }
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

Histogram2D::Histogram2D(double x_lo, double x_hi, double y_lo, double y_hi, std::size_t nx, std::size_t ny)
    : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi), nx_(nx), ny_(ny), counts_(nx * ny, 0)
{
    if (!(x_hi > x_lo) || !(y_hi > y_lo) || nx == 0 || ny == 0) {
        throw std::invalid_argument("Histogram2D: empty range or zero bins");
    }
}

void Histogram2D::add(double x, double y)
{
    if (!(x >= x_lo_ && x <= x_hi_ && y >= y_lo_ && y <= y_hi_)) {
        ++dropped_;
        return;
    }
    auto bin = [](double v, double lo, double hi, std::size_t n) {
        const auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(n));
        return b < n ? b : n - 1;
    };
    ++counts_[bin(x, x_lo_, x_hi_, nx_) * ny_ + bin(y, y_lo_, y_hi_, ny_)];
    ++inside_;
}

std::size_t Histogram2D::occupied_cells() const
{
    std::size_t c = 0;
    for (auto v : counts_) {
        c += v > 0 ? 1 : 0;
    }
    return c;
}

std::vector<double> Histogram2D::normalized() const
{
    std::vector<double> out(counts_.size(), 0.0);
    if (inside_ == 0) {
        return out;
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        out[i] = static_cast<double>(counts_[i]) / static_cast<double>(inside_);
    }
    return out;
}

double bhattacharyya(const Histogram2D& a, const Histogram2D& b)
{
    if (a.nx() != b.nx() || a.ny() != b.ny()) {
        throw std::invalid_argument("bhattacharyya: histogram shapes differ");
    }
    const auto pa = a.normalized();
    const auto pb = b.normalized();
    double s = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        s += std::sqrt(pa[i] * pb[i]);
    }
    return s;
}

} // namespace qtc

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qtc {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double slope_stderr = 0.0;
    std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope * x. Requires >= 2 points
/// with distinct x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
/// Unbiased sample variance (n - 1 denominator).
double sample_variance(std::span<const double> v);
double correlation(std::span<const double> a, std::span<const double> b);

/// Fixed-range 2-D histogram; points outside the range are counted as dropped.
class Histogram2D {
public:
    Histogram2D(double x_lo, double x_hi, double y_lo, double y_hi, std::size_t nx, std::size_t ny);

    void add(double x, double y);
    std::size_t count(std::size_t i, std::size_t j) const { return counts_[i * ny_ + j]; }
    std::size_t inside() const noexcept { return inside_; }
    std::size_t dropped() const noexcept { return dropped_; }
    std::size_t occupied_cells() const;
    /// Bin probabilities over the in-range points.
    std::vector<double> normalized() const;
    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }

private:
    double x_lo_, x_hi_, y_lo_, y_hi_;
    std::size_t nx_, ny_;
    std::vector<std::size_t> counts_;
    std::size_t inside_ = 0;
    std::size_t dropped_ = 0;
};

/// sum_i sqrt(p_i q_i) over matching bins; 1 for identical distributions.
double bhattacharyya(const Histogram2D& a, const Histogram2D& b);

} // namespace qtc

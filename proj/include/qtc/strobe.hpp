#pragma once

#include "qtc/runner.hpp"
#include "qtc/state.hpp"
#include "qtc/stats.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qtc {

struct TrajectoryPoint {
    double t;
    double x;
    double p;
};

struct StroboscopicMap {
    double period = 0.0;
    double t0 = 0.0;
    std::vector<double> times;
    std::vector<PhaseState> samples;
};

/// Number of fixed steps of size dt in one period. Throws std::invalid_argument
/// when period / dt is not an integer to within 1e-9 relative.
std::uint64_t steps_per_period(double period, double dt);

/// One sample at the end of every complete drive period t0 + n * 2pi/w,
/// n = 1, 2, ... The trajectory must be uniformly sampled, start at t0, and
/// its step must divide the period; it must cover at least 2 periods.
StroboscopicMap stroboscopic_map(std::span<const TrajectoryPoint> traj, double w, double t0);

/// Steps a runner for `periods` drive periods and strobes its state at the
/// end of each one.
StroboscopicMap strobe_runner(Runner& runner, double period, std::uint64_t periods);

/// Histogram over |x| <= x_max, |p| <= p_max with n x n bins.
Histogram2D strobe_histogram(const StroboscopicMap& map, double x_max = 0.4, double p_max = 8.0,
                             std::size_t bins = 20);

} // namespace qtc

#include "qtc/strobe.hpp"

#include "qtc/units.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qtc {

std::uint64_t steps_per_period(double period, double dt)
{
    if (!(period > 0.0) || !(dt > 0.0)) {
        throw std::invalid_argument("steps_per_period: period and dt must be positive");
    }
    const double ratio = period / dt;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(ratio - n) > 1e-9 * ratio) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "dt = " << dt << " does not divide the drive period " << period << " (ratio " << ratio
            << "); choose dt = period / integer";
        throw std::invalid_argument(msg.str());
    }
    return static_cast<std::uint64_t>(n);
}

StroboscopicMap stroboscopic_map(std::span<const TrajectoryPoint> traj, double w, double t0)
{
    if (!(w > 0.0)) {
        throw std::invalid_argument("stroboscopic_map: w must be positive");
    }
    if (traj.size() < 3) {
        throw std::invalid_argument("stroboscopic_map: trajectory too short");
    }
    const double period = 2.0 * constants::pi / w;
    const double dt = traj[1].t - traj[0].t;
    if (std::abs(traj[0].t - t0) > 1e-9 * std::max(1.0, std::abs(dt))) {
        throw std::invalid_argument("stroboscopic_map: trajectory must start at t0");
    }
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double expected = t0 + static_cast<double>(i) * dt;
        if (std::abs(traj[i].t - expected) > 1e-6 * dt) {
            throw std::invalid_argument("stroboscopic_map: trajectory is not uniformly sampled");
        }
    }
    const auto spp = steps_per_period(period, dt);
    const auto periods = (traj.size() - 1) / spp;
    if (periods < 2) {
        throw std::invalid_argument("stroboscopic_map: trajectory covers fewer than 2 periods");
    }
    StroboscopicMap map{period, t0, {}, {}};
    for (std::uint64_t n = 1; n <= periods; ++n) {
        const auto& pt = traj[n * spp];
        map.times.push_back(pt.t);
        map.samples.push_back({pt.x, pt.p});
    }
    return map;
}

StroboscopicMap strobe_runner(Runner& runner, double period, std::uint64_t periods)
{
    const auto spp = steps_per_period(period, runner.dt());
    StroboscopicMap map{period, runner.time(), {}, {}};
    map.times.reserve(periods);
    map.samples.reserve(periods);
    for (std::uint64_t n = 0; n < periods; ++n) {
        runner.run(spp);
        map.times.push_back(runner.time());
        map.samples.push_back(runner.state());
    }
    return map;
}

Histogram2D strobe_histogram(const StroboscopicMap& map, double x_max, double p_max, std::size_t bins)
{
    Histogram2D h(-x_max, x_max, -p_max, p_max, bins, bins);
    for (const auto& s : map.samples) {
        h.add(s.x, s.p);
    }
    return h;
}

} // namespace qtc

#pragma once

#include "qtc/runner.hpp"
#include "qtc/state.hpp"
#include "qtc/stats.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qtc {

/// Phase-space metric: Euclidean after scaling x by dX and p by dP.
struct PhaseNorm {
    double dX = 0.033; // um
    double dP = 0.324; // pg um / s

    double distance(const PhaseState& a, const PhaseState& b) const;
};

struct DivergencePoint {
    double t;              // time since the pair was spawned
    double mean_separation; // ensemble mean of the normalized distance
    double log_mean;        // ln(mean_separation)
};

struct TrajectoryPair {
    std::vector<double> t;
    std::vector<PhaseState> a;
    std::vector<PhaseState> b;
};

/// Mean separation over pairs at each recorded time, and its logarithm.
/// All pairs must share the same relative time grid; times are taken relative to the first.
std::vector<DivergencePoint> divergence_curve(std::span<const TrajectoryPair> pairs, const PhaseNorm& norm);

struct FitWindowOptions {
    double r2_min = 0.98;
    double start_factor = 3.0;         // fit starts once mean separation exceeds this x its first value
    double saturation_fraction = 0.25; // and ends before it reaches this fraction of the attractor diameter
    std::size_t min_points = 5;
    double min_duration = 0.0;         // shortest admissible window; the protocol uses one drive period
    std::optional<double> t_start;     // manual override (both must be set)
    std::optional<double> t_end;
};

struct FitWindow {
    bool found = false;
    std::size_t begin = 0; // index range [begin, end)
    std::size_t end = 0;
    double t_start = 0.0;
    double t_end = 0.0;
    LinearFit fit;
};

/// Longest window with r^2 >= r2_min inside the admissible region. When
/// none qualifies, `found` is false and `fit` covers the admissible region,
/// or the whole positive curve if that region is empty, for diagnostics.
FitWindow select_fit_window(std::span<const DivergencePoint> curve, double attractor_diameter,
                            const FitWindowOptions& opts = {});

struct LyapunovProtocol {
    std::size_t n_fiducials = 5;
    std::size_t n_samples = 10;
    std::uint64_t gap_periods = 20;     // between sample points; also the initial transient
    std::uint64_t horizon_periods = 20; // neighbor follow-up length
    std::uint64_t records_per_period = 20;
    double epsilon = 1e-6; // normalized neighbor offset for noiseless runners
    double jitter = 1e-3;  // normalized fiducial start spread for noiseless runners
    std::uint64_t seed = 1;
    PhaseNorm norm;
    FitWindowOptions fit;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct LyapunovEstimate {
    double lambda = 0.0;    // 1/s (or 1/time unit)
    double std_error = 0.0; // fiducial-to-fiducial scatter / sqrt(n)
    double t_start = 0.0;
    double t_end = 0.0;
    double r_squared = 0.0;
    std::size_t n_fiducials = 0;
    std::size_t n_samples = 0;
    bool reliable = false;
    double attractor_diameter = 0.0;
    std::vector<double> fiducial_slopes;
    std::vector<DivergencePoint> curve;
    std::string diagnostic;
};

/// Fiducial/neighbor divergence protocol. For each fiducial, the template
/// runner is cloned (new noise stream, or a small random start offset when
/// noiseless), run for gap_periods, and at each of n_samples sample points a
/// neighbor is spawned: stochastic runners switch to a new noise stream with
/// an identical past; noiseless runners are offset by epsilon in a random
/// normalized direction. Neighbor and reference are followed for
/// horizon_periods. The fitted curve is the mean over pairs of ln(separation);
/// its mean_separation field holds the matching geometric mean.
LyapunovEstimate lyapunov_paper_procedure(const Runner& start, double period, const LyapunovProtocol& protocol);

} // namespace qtc

#include "qtc/lyapunov.hpp"

#include "qtc/noise.hpp"
#include "qtc/strobe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qtc {

double PhaseNorm::distance(const PhaseState& a, const PhaseState& b) const
{
    return std::hypot((a.x - b.x) / dX, (a.p - b.p) / dP);
}

std::vector<DivergencePoint> divergence_curve(std::span<const TrajectoryPair> pairs, const PhaseNorm& norm)
{
    if (pairs.empty()) {
        throw std::invalid_argument("divergence_curve: no pairs");
    }
    const auto& t0 = pairs[0].t;
    const auto n = t0.size();
    for (const auto& pr : pairs) {
        if (pr.t.size() != n || pr.a.size() != n || pr.b.size() != n) {
            throw std::invalid_argument("divergence_curve: pairs must share one time grid");
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double want = t0[i] - t0[0];
            const double got = pr.t[i] - pr.t[0];
            if (std::abs(got - want) > 1e-9 * std::max(1.0, std::abs(want))) {
                throw std::invalid_argument("divergence_curve: pairs must share one time grid");
            }
        }
    }
    std::vector<DivergencePoint> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (const auto& pr : pairs) {
            s += norm.distance(pr.a[i], pr.b[i]);
        }
        s /= static_cast<double>(pairs.size());
        out[i] = {pairs[0].t[i] - pairs[0].t[0], s, std::log(s)};
    }
    return out;
}

FitWindow select_fit_window(std::span<const DivergencePoint> curve, double attractor_diameter,
                            const FitWindowOptions& opts)
{
    FitWindow w;
    const auto n = curve.size();
    auto fit_range = [&](std::size_t b, std::size_t e) {
        std::vector<double> xs, ys;
        for (std::size_t i = b; i < e; ++i) {
            xs.push_back(curve[i].t);
            ys.push_back(curve[i].log_mean);
        }
        return linear_fit(xs, ys);
    };

    if (opts.t_start && opts.t_end) {
        std::size_t b = n, e = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (curve[i].t >= *opts.t_start && curve[i].t <= *opts.t_end) {
                b = std::min(b, i);
                e = i + 1;
            }
        }
        if (b < e && e - b >= 2) {
            w.begin = b;
            w.end = e;
            w.fit = fit_range(b, e);
            w.found = true;
            w.t_start = curve[b].t;
            w.t_end = curve[e - 1].t;
        }
        return w;
    }

    double first = 0.0;
    for (const auto& pt : curve) {
        if (pt.mean_separation > 0.0) {
            first = pt.mean_separation;
            break;
        }
    }
    if (!(first > 0.0)) {
        return w;
    }
    std::size_t i0 = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (curve[i].mean_separation > opts.start_factor * first) {
            i0 = i;
            break;
        }
    }
    std::size_t i1 = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (curve[i].mean_separation >= opts.saturation_fraction * attractor_diameter) {
            i1 = i;
            break;
        }
    }
    if (i0 >= i1) {
        // Nothing admissible: report the whole positive curve for diagnostics.
        std::size_t b = 0;
        while (b < n && !(curve[b].mean_separation > 0.0)) {
            ++b;
        }
        if (n - b >= 2) {
            w.begin = b;
            w.end = n;
            w.fit = fit_range(b, n);
            w.t_start = curve[b].t;
            w.t_end = curve[n - 1].t;
        }
        return w;
    }

    // Prefix sums give O(1) regression statistics per window.
    const std::size_t m = i1 - i0;
    std::vector<double> sx(m + 1, 0.0), sy(m + 1, 0.0), sxx(m + 1, 0.0), sxy(m + 1, 0.0), syy(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double x = curve[i0 + i].t;
        const double y = curve[i0 + i].log_mean;
        sx[i + 1] = sx[i] + x;
        sy[i + 1] = sy[i] + y;
        sxx[i + 1] = sxx[i] + x * x;
        sxy[i + 1] = sxy[i] + x * y;
        syy[i + 1] = syy[i] + y * y;
    }
    std::size_t best_b = 0, best_e = 0;
    double best_r2 = -1.0;
    const std::size_t min_pts = std::max<std::size_t>(opts.min_points, 3);
    for (std::size_t b = 0; b < m; ++b) {
        for (std::size_t e = b + min_pts; e <= m; ++e) {
            const double k = static_cast<double>(e - b);
            const double cx = sxx[e] - sxx[b] - (sx[e] - sx[b]) * (sx[e] - sx[b]) / k;
            const double cy = syy[e] - syy[b] - (sy[e] - sy[b]) * (sy[e] - sy[b]) / k;
            const double cxy = sxy[e] - sxy[b] - (sx[e] - sx[b]) * (sy[e] - sy[b]) / k;
            if (!(cx > 0.0) || !(cy > 0.0)) {
                continue;
            }
            if (curve[i0 + e - 1].t - curve[i0 + b].t < opts.min_duration) {
                continue;
            }
            const double r2 = cxy * cxy / (cx * cy);
            if (r2 < opts.r2_min) {
                continue;
            }
            const std::size_t len = e - b;
            if (len > best_e - best_b || (len == best_e - best_b && r2 > best_r2)) {
                best_b = b;
                best_e = e;
                best_r2 = r2;
            }
        }
    }
    if (best_e > best_b) {
        w.found = true;
        w.begin = i0 + best_b;
        w.end = i0 + best_e;
    } else if (m >= 2) {
        w.begin = i0;
        w.end = i1;
    } else {
        return w;
    }
    w.fit = fit_range(w.begin, w.end);
    w.t_start = curve[w.begin].t;
    w.t_end = curve[w.end - 1].t;
    return w;
}

void LyapunovProtocol::validate() const
{
    auto fail = [](const char* field, const char* why) {
        throw std::invalid_argument(std::string("lyapunov.") + field + ": " + why);
    };
    if (n_fiducials < 1) fail("n_fiducials", "must be >= 1");
    if (n_samples < 1) fail("n_samples", "must be >= 1");
    if (gap_periods < 1) fail("gap_periods", "must be >= 1");
    if (horizon_periods < 1) fail("horizon_periods", "must be >= 1");
    if (records_per_period < 1) fail("records_per_period", "must be >= 1");
    if (!(epsilon > 0.0)) fail("epsilon", "must be positive");
    if (!(jitter >= 0.0)) fail("jitter", "must be >= 0");
    if (!(norm.dX > 0.0) || !(norm.dP > 0.0)) fail("norm", "scales must be positive");
    if (!(fit.r2_min > 0.0 && fit.r2_min <= 1.0)) fail("fit.r2_min", "must be in (0, 1]");
    if (!(fit.start_factor >= 1.0)) fail("fit.start_factor", "must be >= 1");
    if (!(fit.saturation_fraction > 0.0)) fail("fit.saturation_fraction", "must be positive");
    if (!(fit.min_duration >= 0.0)) fail("fit.min_duration", "must be >= 0");
    if (fit.t_start.has_value() != fit.t_end.has_value()) fail("fit", "t_start and t_end must be given together");
    if (fit.t_start && !(*fit.t_end > *fit.t_start)) fail("fit.t_end", "must exceed t_start");
}

LyapunovEstimate lyapunov_paper_procedure(const Runner& start, double period, const LyapunovProtocol& protocol)
{
    protocol.validate();
    const auto spp = steps_per_period(period, start.dt());
    const std::uint64_t every = std::max<std::uint64_t>(1, spp / protocol.records_per_period);
    const std::uint64_t horizon_steps = protocol.horizon_periods * spp;
    const std::uint64_t gap_steps = protocol.gap_periods * spp;
    const std::size_t n_rec = static_cast<std::size_t>(horizon_steps / every) + 1;
    const auto& norm = protocol.norm;

    std::vector<double> total(n_rec, 0.0);
    std::vector<std::vector<double>> per_fid(protocol.n_fiducials, std::vector<double>(n_rec, 0.0));
    double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
    double lo_p = lo_x, hi_p = -lo_x;
    auto track = [&](const PhaseState& s) {
        lo_x = std::min(lo_x, s.x / norm.dX);
        hi_x = std::max(hi_x, s.x / norm.dX);
        lo_p = std::min(lo_p, s.p / norm.dP);
        hi_p = std::max(hi_p, s.p / norm.dP);
    };

    NoiseSource directions(protocol.seed, 0x4c59415055ULL);
    for (std::size_t f = 0; f < protocol.n_fiducials; ++f) {
        auto fid = start.clone();
        if (fid->stochastic()) {
            fid->switch_noise(1000 + f);
        } else if (protocol.jitter > 0.0) {
            fid->displace(protocol.jitter * norm.dX * directions.increment(1.0),
                          protocol.jitter * norm.dP * directions.increment(1.0));
        }
        fid->run(gap_steps);

        for (std::size_t s = 0; s < protocol.n_samples; ++s) {
            auto ref = fid->clone();
            auto nb = fid->clone();
            if (nb->stochastic()) {
                nb->switch_noise(1 + f * 100000 + s);
            } else {
                const double u = directions.increment(1.0);
                const double v = directions.increment(1.0);
                const double r = std::hypot(u, v);
                nb->displace(protocol.epsilon * norm.dX * u / r, protocol.epsilon * norm.dP * v / r);
            }
            for (std::size_t r = 0; r < n_rec; ++r) {
                if (r > 0) {
                    ref->run(every);
                    nb->run(every);
                }
                const auto a = ref->state();
                const auto b = nb->state();
                track(a);
                const double d = std::log(norm.distance(a, b));
                total[r] += d;
                per_fid[f][r] += d;
            }
            if (gap_steps >= ref->steps() - fid->steps()) {
                const auto remaining = gap_steps - (ref->steps() - fid->steps());
                fid = std::move(ref);
                fid->run(remaining);
            } else {
                fid->run(gap_steps);
            }
        }
    }

    LyapunovEstimate est;
    est.n_fiducials = protocol.n_fiducials;
    est.n_samples = protocol.n_samples;
    est.attractor_diameter = std::hypot(hi_x - lo_x, hi_p - lo_p);
    const double count = static_cast<double>(protocol.n_fiducials * protocol.n_samples);
    const double t_rec = static_cast<double>(every) * start.dt();
    est.curve.resize(n_rec);
    for (std::size_t r = 0; r < n_rec; ++r) {
        const double lm = total[r] / count;
        est.curve[r] = {static_cast<double>(r) * t_rec, std::exp(lm), lm};
    }

    auto fit_opts = protocol.fit;
    fit_opts.min_duration = std::max(fit_opts.min_duration, period);
    const auto window = select_fit_window(est.curve, est.attractor_diameter, fit_opts);
    std::ostringstream diag;
    if (window.end > window.begin) {
        est.lambda = window.fit.slope;
        est.r_squared = window.fit.r_squared;
        est.t_start = window.t_start;
        est.t_end = window.t_end;
        for (std::size_t f = 0; f < protocol.n_fiducials; ++f) {
            std::vector<double> xs, ys;
            bool ok = true;
            for (std::size_t r = window.begin; r < window.end; ++r) {
                const double lm = per_fid[f][r] / static_cast<double>(protocol.n_samples);
                if (!std::isfinite(lm)) {
                    ok = false;
                    break;
                }
                xs.push_back(est.curve[r].t);
                ys.push_back(lm);
            }
            if (ok && xs.size() >= 2) {
                est.fiducial_slopes.push_back(linear_fit(xs, ys).slope);
            }
        }
        if (est.fiducial_slopes.size() >= 2) {
            est.std_error = std::sqrt(sample_variance(est.fiducial_slopes) /
                                      static_cast<double>(est.fiducial_slopes.size()));
        } else {
            est.std_error = window.fit.slope_stderr;
        }
    }
    est.reliable = window.found && est.r_squared >= 0.9;
    if (!window.found) {
        diag << "no window with r^2 >= " << protocol.fit.r2_min << " between the start threshold and "
             << protocol.fit.saturation_fraction << " of the attractor diameter";
    } else if (!est.reliable) {
        diag << "fit r^2 = " << est.r_squared << " below 0.9";
    }
    est.diagnostic = diag.str();
    return est;
}

} // namespace qtc

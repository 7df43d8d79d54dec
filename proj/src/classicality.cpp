#include "qtc/closure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qtc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct UnstableScan {
    bool any_unstable = false;
    bool determinate = false;
    double rhs = 0.0;
    double x = 0.0;
    double force_at = 0.0; // |F| used at x
};

// Half-width of the region where dF > 0, or 0 if there is none.
double unstable_half_width(const SystemSpec& sys)
{
    const auto d0 = force_derivatives(sys, 0.0, 0.0);
    if (!sys.quartic() || d0.dF <= 0.0) {
        return 0.0;
    }
    // dF = 2A - 12 B x^2 for both quartic families.
    const auto d1 = force_derivatives(sys, 1.0, 0.0);
    const double twelve_B = d0.dF - d1.dF;
    return std::sqrt(d0.dF / twelve_B);
}

double drive_rms_force(const SystemSpec& sys, double x)
{
    const double f = static_force(sys, x);
    const double lam = drive_amplitude(sys);
    return std::sqrt(f * f + 0.5 * lam * lam);
}

UnstableScan scan_unstable(const SystemSpec& sys, int samples)
{
    UnstableScan out;
    const double half = unstable_half_width(sys);
    if (half <= 0.0) {
        return out;
    }
    out.any_unstable = true;
    const double m = sys.mass();
    const int n = std::max(samples, 2);
    const double h = 2.0 * half / n;
    for (int i = 0; i < n; ++i) {
        // Interval midpoints never land on x = 0 or on the dF = 0 boundary.
        const double x = -half + (i + 0.5) * h;
        const auto d = force_derivatives(sys, x, 0.0);
        const double f = drive_rms_force(sys, x);
        if (!(f > 0.0) || d.dF <= 0.0) {
            continue;
        }
        const double rhs = std::abs(d.d2F / f) * std::sqrt(d.dF / (2.0 * m));
        if (!out.determinate || rhs > out.rhs) {
            out.determinate = true;
            out.rhs = rhs;
            out.x = x;
            out.force_at = f;
        }
    }
    return out;
}

void append(std::string& notes, const std::string& s)
{
    notes += notes.empty() ? "" : "; ";
    notes += s;
}

} // namespace

std::string_view verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::satisfied: return "satisfied";
    case Verdict::violated: return "violated";
    case Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

double KWindow::decades() const
{
    return empty ? 0.0 : std::log10(hi / lo);
}

ClassicalityReport classicality_report(const SystemSpec& sys, const PhaseState& typical, double t,
                                       const MeasurementConfig& meas, double hbar,
                                       const ClassicalityOptions& options)
{
    ClassicalityReport r;
    const double m = sys.mass();
    const double k = meas.k;
    const double margin = options.margin;
    const double F = force(sys, typical.x, t);
    const auto d = force_derivatives(sys, typical.x, t);

    // Localization at the unstable points.
    r.localization_lhs = 8.0 * k;
    const auto scan = scan_unstable(sys, options.unstable_samples);
    bool loc_determinate = true;
    if (scan.any_unstable) {
        if (scan.determinate) {
            r.localization_rhs = scan.rhs;
            r.localization_x = scan.x;
        } else {
            loc_determinate = false;
            append(r.notes, "localization: force vanishes throughout the unstable region");
        }
    } else {
        // No unstable region: evaluate at the typical point.
        r.localization_x = typical.x;
        if (d.d2F == 0.0) {
            r.localization_rhs = 0.0;
        } else if (F == 0.0) {
            loc_determinate = false;
            append(r.notes, "localization: zero force at the evaluation point");
        } else {
            r.localization_rhs = std::abs(d.d2F / F) * std::sqrt(std::abs(d.dF) / (2.0 * m));
        }
    }
    if (loc_determinate) {
        r.localization = (k > 0.0 && r.localization_lhs >= margin * r.localization_rhs)
                             ? Verdict::satisfied
                             : Verdict::violated;
    }

    // Strong nonlinearity, checked at the typical point and at the scan maximum.
    auto strong_at = [&](double d2F, double f, double dF) {
        if (f == 0.0 || d2F == 0.0) {
            return;
        }
        if (hbar * std::abs(d2F / f) >= 4.0 * std::sqrt(m * std::abs(dF))) {
            r.nonlinearity_strong = true;
            r.strong_rhs = std::max(r.strong_rhs, d2F * d2F * hbar / (4.0 * m * f * f));
        }
    };
    strong_at(d.d2F, F, d.dF);
    if (scan.determinate) {
        const auto ds = force_derivatives(sys, scan.x, t);
        strong_at(ds.d2F, scan.force_at, ds.dF);
    }

    // Action estimates.
    r.action_s = std::abs(typical.x * typical.p) / hbar;
    const double energy = typical.p * typical.p / (2.0 * m) + potential(sys, typical.x, t);
    r.s_force = (d.dF != 0.0 && typical.p != 0.0)
                    ? m * F * F / (d.dF * d.dF) * std::abs(F / typical.p) / hbar
                    : kNaN;
    r.s_energy = F != 0.0 ? std::abs(energy * typical.p / (4.0 * F)) / hbar : kNaN;
    if (std::isfinite(r.s_force) && std::isfinite(r.s_energy) && r.s_force > 0.0 && r.s_energy > 0.0) {
        const double ratio = r.s_force / r.s_energy;
        r.action_estimates_disagree = ratio > 10.0 || ratio < 0.1;
    }

    // Noise bounds at the typical point.
    r.hbar_k = hbar * k;
    // dF within rounding of zero (relative to its local variation) counts as zero.
    const double dF_abs = std::abs(d.dF) > 1e-9 * std::abs(d.d2F * typical.x) ? std::abs(d.dF) : 0.0;
    bool noise_determinate = dF_abs > 0.0 && r.action_s > 0.0;
    if (noise_determinate) {
        r.noise_lower = 2.0 * dF_abs / r.action_s;
        r.noise_upper = dF_abs * r.action_s / 4.0;
        r.noise = (r.hbar_k >= margin * r.noise_lower && r.hbar_k * margin <= r.noise_upper)
                      ? Verdict::satisfied
                      : Verdict::violated;
    } else {
        append(r.notes, dF_abs == 0.0 ? "noise: dF vanishes at the typical point"
                                      : "noise: zero action at the typical point");
    }

    // Admissible k.
    if (loc_determinate && noise_determinate) {
        double lo = std::max(margin * r.localization_rhs / 8.0, margin * r.noise_lower / hbar);
        if (r.nonlinearity_strong) {
            lo = std::max(lo, margin * r.strong_rhs / 8.0);
        }
        const double hi = r.noise_upper / (margin * hbar);
        r.k_window = {lo, hi, !(lo < hi)};
    }

    const bool strong_ok = !r.nonlinearity_strong || r.localization_lhs >= margin * r.strong_rhs;
    r.classical = r.localization == Verdict::satisfied && r.noise == Verdict::satisfied && strong_ok;
    if (r.action_estimates_disagree) {
        append(r.notes, "footnote action estimates differ by more than 10x; both reported");
    }
    return r;
}

} // namespace qtc

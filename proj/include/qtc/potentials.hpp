#pragma once

#include <optional>
#include <string_view>
#include <variant>

namespace qtc {

// The four single-particle model families. Drive terms enter the potential
// as +Lambda * x * cos(w t).

struct Harmonic {
    double m;  // pg
    double w0; // s^-1
};

struct DoubleWell {
    double m;
    double A; // pg/s^2
    double B; // pg um^-2 s^-2
};

struct DrivenHarmonic {
    double m;
    double w0;
    double Lambda; // pg um/s^2
    double w;      // s^-1
};

struct Duffing {
    double m;
    double A;
    double B;
    double Lambda;
    double w;
};

/// A validated model. Construct through the factory functions, which throw
/// std::invalid_argument when m <= 0, B <= 0 (quartic), or w <= 0 (driven).
class SystemSpec {
public:
    using Model = std::variant<Harmonic, DoubleWell, DrivenHarmonic, Duffing>;

    static SystemSpec harmonic(double m, double w0);
    static SystemSpec double_well(double m, double A, double B);
    static SystemSpec driven_harmonic(double m, double w0, double Lambda, double w);
    static SystemSpec duffing(double m, double A, double B, double Lambda, double w);
    static SystemSpec from_model(const Model& model);

    const Model& model() const noexcept { return model_; }
    double mass() const;
    /// Drive angular frequency; empty for undriven families.
    std::optional<double> drive_frequency() const;
    /// 2*pi/w for driven families.
    std::optional<double> drive_period() const;
    bool quartic() const;
    std::string_view family() const;

private:
    explicit SystemSpec(Model m) : model_(m) {}
    Model model_;
};

struct ForceDerivatives {
    double dF;  // dF/dx, pg/s^2
    double d2F; // d^2F/dx^2, pg um^-1 s^-2
    double d3V; // d^3V/dx^3 = -d2F
};

double potential(const SystemSpec& sys, double x, double t);
double force(const SystemSpec& sys, double x, double t);
ForceDerivatives force_derivatives(const SystemSpec& sys, double x, double t);

/// The x-independent part of the force is the only time dependence; this
/// returns the time-independent (undriven) force.
double static_force(const SystemSpec& sys, double x);

/// Amplitude of the drive force (0 when undriven).
double drive_amplitude(const SystemSpec& sys);

} // namespace qtc

#pragma once

#include "qtc/classical.hpp"
#include "qtc/noise.hpp"
#include "qtc/potentials.hpp"
#include "qtc/state.hpp"
#include "qtc/wavefunction.hpp"
#include "qtc/wigner.hpp"

#include <cstdint>
#include <memory>
#include <string_view>

namespace qtc {

/// A fixed-step trajectory of one backend. Time is t0 + steps * dt, so
/// stroboscopic sampling never accumulates rounding drift.
class Runner {
public:
    virtual ~Runner() = default;

    virtual std::unique_ptr<Runner> clone() const = 0;
    virtual std::string_view backend() const = 0;
    /// Phase-space point followed by the analysis (centroid for quantum states).
    virtual PhaseState state() const = 0;
    /// Centroid plus second moments; classical backends report zero variances.
    virtual GaussianState moments() const = 0;
    /// Whether the dynamics consumes noise.
    virtual bool stochastic() const = 0;
    /// Rigid phase-space shift of the state.
    virtual void displace(double dx, double dp) = 0;

    void step();
    void run(std::uint64_t n)
    {
        for (std::uint64_t i = 0; i < n; ++i) {
            step();
        }
    }
    /// Replaces the future noise with the derived stream `child`; the past is kept.
    void switch_noise(std::uint64_t child) { noise_ = noise_.derive(child); }

    double time() const noexcept { return t0_ + static_cast<double>(steps_) * dt_; }
    double dt() const noexcept { return dt_; }
    std::uint64_t steps() const noexcept { return steps_; }
    const SystemSpec& system() const noexcept { return sys_; }

protected:
    Runner(const SystemSpec& sys, double t0, double dt, NoiseSource noise);
    virtual void advance(double t, double dt) = 0;

    SystemSpec sys_;
    double t0_;
    double dt_;
    std::uint64_t steps_ = 0;
    NoiseSource noise_;
};

class ClassicalRunner final : public Runner {
public:
    ClassicalRunner(const SystemSpec& sys, PhaseState start, double t0, double dt);
    std::unique_ptr<Runner> clone() const override { return std::make_unique<ClassicalRunner>(*this); }
    std::string_view backend() const override { return "classical"; }
    PhaseState state() const override { return s_; }
    GaussianState moments() const override { return {s_.x, s_.p, 0.0, 0.0, 0.0}; }
    bool stochastic() const override { return false; }
    void displace(double dx, double dp) override;

private:
    void advance(double t, double dt) override;
    PhaseState s_;
};

class NoisyClassicalRunner final : public Runner {
public:
    NoisyClassicalRunner(const SystemSpec& sys, PhaseState start, double t0, double dt,
                         ClassicalNoiseSpec nspec, NoiseSource noise);
    std::unique_ptr<Runner> clone() const override { return std::make_unique<NoisyClassicalRunner>(*this); }
    std::string_view backend() const override { return "noisy-classical"; }
    PhaseState state() const override { return s_; }
    GaussianState moments() const override { return {s_.x, s_.p, 0.0, 0.0, 0.0}; }
    bool stochastic() const override { return nspec_.D_p > 0.0 || nspec_.D_x > 0.0; }
    void displace(double dx, double dp) override;

private:
    void advance(double t, double dt) override;
    PhaseState s_;
    ClassicalNoiseSpec nspec_;
};

class ClosureRunner final : public Runner {
public:
    ClosureRunner(const SystemSpec& sys, GaussianState start, double t0, double dt,
                  MeasurementConfig meas, double hbar, NoiseSource noise);
    std::unique_ptr<Runner> clone() const override { return std::make_unique<ClosureRunner>(*this); }
    std::string_view backend() const override { return "closure"; }
    PhaseState state() const override { return g_.centroid(); }
    GaussianState moments() const override { return g_; }
    bool stochastic() const override { return meas_.k > 0.0; }
    void displace(double dx, double dp) override;

private:
    void advance(double t, double dt) override;
    GaussianState g_;
    MeasurementConfig meas_;
    double hbar_;
};

/// Clones share the propagator (plans and scratch), so clones must be
/// stepped from a single thread.
class SseRunner final : public Runner {
public:
    SseRunner(const SystemSpec& sys, WaveFunction psi, double t0, double dt, MeasurementConfig meas,
              double hbar, NoiseSource noise);
    std::unique_ptr<Runner> clone() const override { return std::make_unique<SseRunner>(*this); }
    std::string_view backend() const override { return "sse"; }
    PhaseState state() const override { return moments().centroid(); }
    GaussianState moments() const override { return prop_->moments(psi_); }
    bool stochastic() const override { return meas_.k > 0.0; }
    void displace(double dx, double dp) override { prop_->displace(psi_, dx, dp); }

    const WaveFunction& wavefunction() const noexcept { return psi_; }
    const SsePropagator& propagator() const noexcept { return *prop_; }

private:
    void advance(double t, double dt) override;
    WaveFunction psi_;
    MeasurementConfig meas_;
    std::shared_ptr<SsePropagator> prop_;
};

class WignerRunner final : public Runner {
public:
    WignerRunner(const SystemSpec& sys, WignerGrid W, double t0, double dt, MeasurementConfig meas,
                 double hbar, NoiseSource noise);
    std::unique_ptr<Runner> clone() const override { return std::make_unique<WignerRunner>(*this); }
    std::string_view backend() const override { return "wigner-grid"; }
    PhaseState state() const override { return moments().centroid(); }
    GaussianState moments() const override { return qtc::moments(W_); }
    bool stochastic() const override { return meas_.k > 0.0; }
    void displace(double dx, double dp) override { prop_->displace(W_, dx, dp); }

    const WignerGrid& wigner() const noexcept { return W_; }

private:
    void advance(double t, double dt) override;
    WignerGrid W_;
    MeasurementConfig meas_;
    std::shared_ptr<WignerPropagator> prop_;
};

} // namespace qtc

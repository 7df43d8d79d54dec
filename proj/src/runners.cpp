#include "qtc/runner.hpp"

#include "qtc/closure.hpp"

#include <stdexcept>

namespace qtc {

Runner::Runner(const SystemSpec& sys, double t0, double dt, NoiseSource noise)
    : sys_(sys), t0_(t0), dt_(dt), noise_(noise)
{
    if (!(dt > 0.0)) {
        throw std::invalid_argument("runner: dt must be positive");
    }
}

void Runner::step()
{
    advance(time(), dt_);
    ++steps_;
}

ClassicalRunner::ClassicalRunner(const SystemSpec& sys, PhaseState start, double t0, double dt)
    : Runner(sys, t0, dt, NoiseSource(0)), s_(start)
{
}

void ClassicalRunner::advance(double t, double dt) { s_ = step_newton(sys_, s_, t, dt); }

void ClassicalRunner::displace(double dx, double dp)
{
    s_.x += dx;
    s_.p += dp;
}

NoisyClassicalRunner::NoisyClassicalRunner(const SystemSpec& sys, PhaseState start, double t0, double dt,
                                           ClassicalNoiseSpec nspec, NoiseSource noise)
    : Runner(sys, t0, dt, noise), s_(start), nspec_(nspec)
{
}

void NoisyClassicalRunner::advance(double t, double dt)
{
    s_ = step_noisy_classical(sys_, s_, t, dt, noise_, nspec_);
}

void NoisyClassicalRunner::displace(double dx, double dp)
{
    s_.x += dx;
    s_.p += dp;
}

ClosureRunner::ClosureRunner(const SystemSpec& sys, GaussianState start, double t0, double dt,
                             MeasurementConfig meas, double hbar, NoiseSource noise)
    : Runner(sys, t0, dt, noise), g_(start), meas_(meas), hbar_(hbar)
{
}

void ClosureRunner::advance(double t, double dt)
{
    g_ = step_gaussian_closure(sys_, g_, t, dt, meas_, hbar_, noise_);
}

void ClosureRunner::displace(double dx, double dp)
{
    g_.mean_x += dx;
    g_.mean_p += dp;
}

SseRunner::SseRunner(const SystemSpec& sys, WaveFunction psi, double t0, double dt, MeasurementConfig meas,
                     double hbar, NoiseSource noise)
    : Runner(sys, t0, dt, noise),
      psi_(std::move(psi)),
      meas_(meas),
      prop_(std::make_shared<SsePropagator>(psi_.grid, hbar, sys.mass()))
{
}

void SseRunner::advance(double t, double dt) { prop_->step(sys_, psi_, t, dt, meas_, noise_); }

WignerRunner::WignerRunner(const SystemSpec& sys, WignerGrid W, double t0, double dt, MeasurementConfig meas,
                           double hbar, NoiseSource noise)
    : Runner(sys, t0, dt, noise),
      W_(std::move(W)),
      meas_(meas),
      prop_(std::make_shared<WignerPropagator>(W_.x, W_.p, hbar, sys.mass()))
{
}

void WignerRunner::advance(double t, double dt) { prop_->step(sys_, W_, t, dt, meas_, noise_); }

} // namespace qtc

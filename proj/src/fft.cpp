#include "qtc/fft.hpp"

#include <new>
#include <stdexcept>
#include <utility>

namespace qtc {

FftwBuffer::FftwBuffer(std::size_t n)
    : ptr_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))), n_(n)
{
    if (!ptr_ && n > 0) {
        throw std::bad_alloc();
    }
    for (std::size_t i = 0; i < n; ++i) {
        data()[i] = 0.0;
    }
}

FftPlan::FftPlan(FftwBuffer& buf, int n, int howmany, int stride, int dist, int sign)
{
    int dims[] = {n};
    plan_ = fftw_plan_many_dft(1, dims, howmany, buf.raw(), nullptr, stride, dist, buf.raw(), nullptr,
                               stride, dist, sign, FFTW_ESTIMATE);
    if (!plan_) {
        throw std::runtime_error("FFTW planning failed");
    }
}

FftPlan::FftPlan(FftPlan&& other) noexcept : plan_(std::exchange(other.plan_, nullptr)) {}

FftPlan& FftPlan::operator=(FftPlan&& other) noexcept
{
    if (this != &other) {
        if (plan_) {
            fftw_destroy_plan(plan_);
        }
        plan_ = std::exchange(other.plan_, nullptr);
    }
    return *this;
}

FftPlan::~FftPlan()
{
    if (plan_) {
        fftw_destroy_plan(plan_);
    }
}

void FftPlan::execute() const
{
    fftw_execute(plan_);
}

} // namespace qtc

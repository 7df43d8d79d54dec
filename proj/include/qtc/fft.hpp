#pragma once

#include <complex>
#include <cstddef>
#include <memory>

#include <fftw3.h>

namespace qtc {

using cplx = std::complex<double>;

/// SIMD-aligned complex buffer owned through fftw_malloc.
class FftwBuffer {
public:
    FftwBuffer() = default;
    explicit FftwBuffer(std::size_t n);

    cplx* data() noexcept { return reinterpret_cast<cplx*>(ptr_.get()); }
    const cplx* data() const noexcept { return reinterpret_cast<const cplx*>(ptr_.get()); }
    fftw_complex* raw() noexcept { return ptr_.get(); }
    std::size_t size() const noexcept { return n_; }
    cplx& operator[](std::size_t i) noexcept { return data()[i]; }
    const cplx& operator[](std::size_t i) const noexcept { return data()[i]; }

private:
    struct Free {
        void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
    };
    std::unique_ptr<fftw_complex, Free> ptr_;
    std::size_t n_ = 0;
};

/// In-place batched 1-D complex transform over a buffer, planned with
/// FFTW_ESTIMATE so the plan (and therefore the rounding) is reproducible.
/// Unnormalized in both directions.
class FftPlan {
public:
    FftPlan() = default;
    /// `howmany` transforms of length n; element i of transform j sits at
    /// j*dist + i*stride.
    FftPlan(FftwBuffer& buf, int n, int howmany, int stride, int dist, int sign);
    FftPlan(FftPlan&&) noexcept;
    FftPlan& operator=(FftPlan&&) noexcept;
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan();

    void execute() const;

private:
    fftw_plan plan_ = nullptr;
};

} // namespace qtc

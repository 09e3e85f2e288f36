#pragma once

// Thin FFTW wrapper: cached out-of-place plans, safe to execute concurrently.
// Plans use FFTW_ESTIMATE so results do not depend on timing.

#include "rra/common.hpp"

namespace rra::detail {

enum class FftSign : int { Forward = -1, Backward = +1 };

class FftPlan {
public:
    /// Length-n 1-D transform: out[j] = sum_k in[k] exp(sign * 2 pi i j k / n).
    static const FftPlan& one_d(int n, FftSign sign);
    /// n0 x n1 row-major 2-D transform.
    static const FftPlan& two_d(int n0, int n1, FftSign sign);
    /// Hermitian-input backward transforms producing real output. Input holds
    /// the first n/2+1 (1-D) or n0 x (n1/2+1) (2-D) frequencies and is clobbered.
    static const FftPlan& real_1d(int n);
    static const FftPlan& real_2d(int n0, int n1);

    /// in and out must not alias.
    void execute(const cdouble* in, cdouble* out) const;
    void execute_real(cdouble* in, double* out) const;

    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan();

private:
    friend struct PlanFactory;
    explicit FftPlan(void* plan) : plan_(plan) {}
    void* plan_;
};

}  // namespace rra::detail

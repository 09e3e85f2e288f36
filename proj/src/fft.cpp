#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

namespace rra::detail {

namespace {

constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

enum class PlanKind : int { Complex, Real };

using PlanKey = std::tuple<PlanKind, int, int, int>;  // kind, n0, n1 (0 for 1-D), sign

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::map<PlanKey, std::unique_ptr<FftPlan>>& plan_cache() {
    static std::map<PlanKey, std::unique_ptr<FftPlan>> cache;
    return cache;
}

fftw_complex* as_fftw(cdouble* p) { return reinterpret_cast<fftw_complex*>(p); }

void* make_plan(const PlanKey& key) {
    const auto [kind, n0, n1, sign] = key;
    const std::size_t total = static_cast<std::size_t>(n0) * (n1 > 0 ? n1 : 1);
    std::vector<cdouble> a(total);
    if (kind == PlanKind::Complex) {
        std::vector<cdouble> b(total);
        if (n1 == 0) return fftw_plan_dft_1d(n0, as_fftw(a.data()), as_fftw(b.data()), sign, kFlags);
        return fftw_plan_dft_2d(n0, n1, as_fftw(a.data()), as_fftw(b.data()), sign, kFlags);
    }
    std::vector<double> b(total);
    if (n1 == 0) return fftw_plan_dft_c2r_1d(n0, as_fftw(a.data()), b.data(), kFlags);
    return fftw_plan_dft_c2r_2d(n0, n1, as_fftw(a.data()), b.data(), kFlags);
}

}  // namespace

FftPlan::~FftPlan() { fftw_destroy_plan(static_cast<fftw_plan>(plan_)); }

struct PlanFactory {
    static const FftPlan& get(const PlanKey& key) {
        std::lock_guard lock(planner_mutex());
        auto& cache = plan_cache();
        if (auto it = cache.find(key); it != cache.end()) return *it->second;
        void* p = make_plan(key);
        require(p != nullptr, "FftPlan: fftw planning failed");
        auto [it, inserted] = cache.emplace(key, std::unique_ptr<FftPlan>(new FftPlan(p)));
        return *it->second;
    }
};

const FftPlan& FftPlan::one_d(int n, FftSign sign) {
    require(n >= 1, "FftPlan: length must be positive");
    return PlanFactory::get({PlanKind::Complex, n, 0, static_cast<int>(sign)});
}

const FftPlan& FftPlan::two_d(int n0, int n1, FftSign sign) {
    require(n0 >= 1 && n1 >= 1, "FftPlan: dims must be positive");
    return PlanFactory::get({PlanKind::Complex, n0, n1, static_cast<int>(sign)});
}

const FftPlan& FftPlan::real_1d(int n) {
    require(n >= 1, "FftPlan: length must be positive");
    return PlanFactory::get({PlanKind::Real, n, 0, +1});
}

const FftPlan& FftPlan::real_2d(int n0, int n1) {
    require(n0 >= 1 && n1 >= 1, "FftPlan: dims must be positive");
    return PlanFactory::get({PlanKind::Real, n0, n1, +1});
}

void FftPlan::execute(const cdouble* in, cdouble* out) const {
    // new-array execute is thread safe; out-of-place c2c leaves `in` intact.
    fftw_execute_dft(static_cast<fftw_plan>(plan_), as_fftw(const_cast<cdouble*>(in)), as_fftw(out));
}

void FftPlan::execute_real(cdouble* in, double* out) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_), as_fftw(in), out);
}

}  // namespace rra::detail

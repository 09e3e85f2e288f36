#include "rra/align2d.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"

namespace rra {

namespace detail {

void accumulate_conj_product(const cdouble* a, const cdouble* b, double weight, int n, cdouble* acc) {
    const double* __restrict pa = reinterpret_cast<const double*>(a);
    const double* __restrict pb = reinterpret_cast<const double*>(b);
    double* __restrict pc = reinterpret_cast<double*>(acc);
    for (int j = 0; j < n; ++j) {
        const double ar = pa[2 * j], ai = pa[2 * j + 1];
        const double br = pb[2 * j], bi = pb[2 * j + 1];
        pc[2 * j] += weight * (ar * br + ai * bi);
        pc[2 * j + 1] += weight * (ar * bi - ai * br);
    }
}

void spectrum_to_values(const cdouble* xhat, int Q, int Q_out, double* out, cdouble* scratch) {
    // Re sum_s X(s) e^{-i s g} = Re sum_s conj(X(s)) e^{+i s g}; fold to the
    // Hermitian part so a half-length c2r transform gives the real part exactly.
    // Slot t pairs X(t) with X(-t), except the Q_out Nyquist slot, which pairs X(t) with itself.
    // X(s) is zero outside -Q/2 < s <= Q/2.
    const int half = Q_out / 2;
    for (int t = 0; t <= half; ++t) {
        const cdouble plus = t <= Q / 2 ? xhat[t] : cdouble{};
        cdouble minus{};
        if (t == half && t > 0) {
            minus = plus;
        } else if (t < Q / 2) {
            minus = xhat[t == 0 ? 0 : Q - t];
        }
        scratch[t] = 0.5 * (std::conj(plus) + minus);
    }
    FftPlan::real_1d(Q_out).execute_real(scratch, out);
}

int argmax_first(std::span<const double> values) {
    int best = 0;
    for (int j = 1; j < static_cast<int>(values.size()); ++j) {
        if (values[j] > values[best]) best = j;
    }
    return best;
}

}  // namespace detail

Landscape1D make_landscape_1d(std::vector<double> values) {
    require(!values.empty(), "landscape: empty value array");
    Landscape1D l;
    const int n = static_cast<int>(values.size());
    l.gammas.resize(n);
    for (int j = 0; j < n; ++j) l.gammas[j] = kTwoPi * j / n;
    l.values = std::move(values);
    l.argmax_index = detail::argmax_first(l.values);
    l.max_value = l.values[l.argmax_index];
    return l;
}

namespace {

void check_pair(const BesselImage& a, const BesselImage& b, const char* where) {
    require(a.grid && b.grid, std::string(where) + ": null grid");
    require_same_grid(*a.grid, *b.grid, where);
}

int resolve_q_out(int Q, int Q_out, const char* where) {
    if (Q_out == 0) return Q;
    require(Q_out >= Q, std::string(where) + ": Q_out must be >= Q");
    return Q_out;
}

}  // namespace

std::vector<cdouble> landscape_2d_spectrum(const BesselImage& a, const BesselImage& b) {
    check_pair(a, b, "landscape_2d");
    const auto& g = *a.grid;
    std::vector<cdouble> xhat(g.Q);
    for (int r = 0; r < g.R; ++r) {
        const std::size_t off = static_cast<std::size_t>(r) * g.Q;
        detail::accumulate_conj_product(&a.coeffs[off], &b.coeffs[off], kTwoPi * g.w_radial[r], g.Q,
                                        xhat.data());
    }
    return xhat;
}

Landscape1D landscape_from_spectrum(std::span<const cdouble> xhat, int Q_out) {
    const int Q = static_cast<int>(xhat.size());
    require(Q >= 1, "landscape_from_spectrum: empty spectrum");
    Q_out = resolve_q_out(Q, Q_out, "landscape_from_spectrum");
    std::vector<double> values(Q_out);
    std::vector<cdouble> scratch(Q_out / 2 + 1);
    detail::spectrum_to_values(xhat.data(), Q, Q_out, values.data(), scratch.data());
    return make_landscape_1d(std::move(values));
}

Landscape1D landscape_2d(const BesselImage& a, const BesselImage& b, int Q_out) {
    const auto xhat = landscape_2d_spectrum(a, b);
    return landscape_from_spectrum(xhat, Q_out);
}

Landscape1D brute_force_landscape_2d(const BesselImage& a, const BesselImage& b, int Q_out) {
    check_pair(a, b, "brute_force_landscape_2d");
    const auto& g = *a.grid;
    Q_out = resolve_q_out(g.Q, Q_out, "brute_force_landscape_2d");
    std::vector<double> values(Q_out, 0.0);
    for (int jg = 0; jg < Q_out; ++jg) {
        const double gamma = kTwoPi * jg / Q_out;
        cdouble total{};
        for (int j = 0; j < g.Q; ++j) {
            const cdouble phase = std::polar(1.0, -signed_frequency(j, g.Q) * gamma);
            for (int r = 0; r < g.R; ++r) {
                total += kTwoPi * g.w_radial[r] * std::conj(a.at(r, j)) * b.at(r, j) * phase;
            }
        }
        values[jg] = total.real();
    }
    return make_landscape_1d(std::move(values));
}

double argmax_refine(const Landscape1D& l, bool interpolate) {
    require(!l.values.empty(), "argmax_refine: empty landscape");
    const int n = l.size();
    const int j = l.argmax_index;
    const double step = kTwoPi / n;
    if (!interpolate || n < 3) return j * step;
    const double ym = l.values[(j + n - 1) % n];
    const double y0 = l.values[j];
    const double yp = l.values[(j + 1) % n];
    const double denom = ym - 2.0 * y0 + yp;
    if (!(denom < 0.0)) return j * step;
    const double offset = 0.5 * (ym - yp) / denom;
    return (j + std::clamp(offset, -0.5, 0.5)) * step;
}

}  // namespace rra

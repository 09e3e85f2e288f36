#include "rra/compress2d.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rra {

const char* to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::Radial2D: return "radial2d";
        case KernelKind::Radial3D: return "radial3d";
        case KernelKind::Degree3D: return "degree3d";
        case KernelKind::Radial2DTranslated: return "radial2d_translated";
    }
    return "unknown";
}

std::vector<double> radial_scale_2d(const PolarGrid& grid) {
    std::vector<double> eta(grid.R);
    for (int r = 0; r < grid.R; ++r) eta[r] = std::sqrt(grid.w_radial[r] * grid.dpsi);
    return eta;
}

KernelMatrix make_kernel(KernelKind kind, Eigen::MatrixXd entries, std::vector<double> scale_factors,
                         double landscape_scale) {
    require(entries.rows() == entries.cols() && entries.rows() >= 1, "make_kernel: kernel must be square");
    require(static_cast<Eigen::Index>(scale_factors.size()) == entries.rows(),
            "make_kernel: scale factor count does not match kernel size");
    require(entries.allFinite(), "make_kernel: non-finite kernel entries");
    KernelMatrix k;
    k.kind = kind;
    k.entries = 0.5 * (entries + entries.transpose());
    k.scale_factors = std::move(scale_factors);
    k.landscape_scale = landscape_scale;
    return k;
}

KernelMatrix kernel_2d(std::span<const BesselImage> targets) {
    require(!targets.empty(), "kernel_2d: need at least one target");
    const PolarGridPtr grid = targets.front().grid;
    require(grid != nullptr, "kernel_2d: null grid");
    for (const auto& t : targets) {
        require(t.grid != nullptr, "kernel_2d: null grid");
        require_same_grid(*grid, *t.grid, "kernel_2d");
    }
    const int R = grid->R;
    const int Q = grid->Q;
    const auto eta = radial_scale_2d(*grid);

    // Rows r, columns (re, im) of eta_r B(k_r, q) for q != 0; C = Z Z^T.
    // Fixed-size target blocks keep the summation order independent of input size.
    constexpr int kBlock = 32;
    const int n = static_cast<int>(targets.size());
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(R, R);
    for (int start = 0; start < n; start += kBlock) {
        const int count = std::min(kBlock, n - start);
        Eigen::MatrixXd z(R, static_cast<Eigen::Index>(count) * 2 * (Q - 1));
        for (int t = 0; t < count; ++t) {
            const auto& b = targets[start + t];
            for (int r = 0; r < R; ++r) {
                Eigen::Index col = static_cast<Eigen::Index>(t) * 2 * (Q - 1);
                for (int j = 1; j < Q; ++j) {
                    const cdouble v = eta[r] * b.at(r, j);
                    z(r, col++) = v.real();
                    z(r, col++) = v.imag();
                }
            }
        }
        acc.noalias() += z * z.transpose();
    }
    acc /= static_cast<double>(n);
    return make_kernel(KernelKind::Radial2D, std::move(acc), eta, 1.0 / grid->dpsi);
}

double translation_factor_plus(double k, double k_prime, double sigma) {
    const double s2 = sigma * sigma;
    return std::exp(-0.5 * s2 * (k * k + k_prime * k_prime)) * std::exp(k * k_prime * s2);
}

double translation_factor_minus(double k, double sigma) {
    require(sigma >= 0.0, "translation_factor_minus: sigma must be non-negative");
    const double kt = 0.5 * k * sigma;
    const double x = kt * kt;
    if (x == 0.0) return 1.0;
    // I_{-1/2}(x) - I_{1/2}(x) = sqrt(2 / (pi x)) (cosh x - sinh x)
    const double bessel_diff = std::sqrt(2.0 / (kPi * x)) * std::exp(-x);
    return kt * std::sqrt(0.5 * kPi) * std::exp(-x) * bessel_diff;
}

KernelMatrix kernel_2d_translated(const SphVolume& target, const PolarGrid& grid, double sigma) {
    require(sigma >= 0.0, "kernel_2d_translated: sigma must be non-negative");
    require(target.grid != nullptr, "kernel_2d_translated: null grid");
    const auto& sg = *target.grid;
    require(sg.R == grid.R, "kernel_2d_translated: shell count differs from ring count");
    for (int r = 0; r < grid.R; ++r) {
        require(std::abs(sg.k_nodes[r] - grid.k_nodes[r]) <= 1e-12 * grid.K,
                "kernel_2d_translated: shell radii differ from polar-grid radii");
    }
    const int R = grid.R;
    const int n = sg.coeffs_per_shell();
    Eigen::MatrixXd c(R, R);
    std::vector<double> e_minus(R);
    for (int r = 0; r < R; ++r) e_minus[r] = translation_factor_minus(grid.k_nodes[r], sigma);
    for (int r = 0; r < R; ++r) {
        for (int s = 0; s < R; ++s) {
            const cdouble* a = target.shell(r);
            const cdouble* b = target.shell(s);
            double total = 0.0;
            for (int i = 0; i < n; ++i) total += (std::conj(a[i]) * b[i]).real();
            const double offset = (std::conj(a[0]) * b[0]).real();
            c(r, s) = total * translation_factor_plus(grid.k_nodes[r], grid.k_nodes[s], sigma) -
                      offset * e_minus[r] * e_minus[s];
        }
    }
    return make_kernel(KernelKind::Radial2DTranslated, std::move(c), radial_scale_2d(grid), 1.0 / grid.dpsi);
}

namespace {

// Replaces the columns [first, last) spanning one eigenspace by the
// Gram-Schmidt orthonormalization of the projected unit vectors e_0, e_1, ...
// Works in cluster coordinates so the result stays inside the eigenspace.
void canonicalize_cluster(Eigen::MatrixXd& vecs, int first, int last) {
    const int dim = static_cast<int>(vecs.rows());
    const int c = last - first;
    const Eigen::MatrixXd span = vecs.middleCols(first, c);
    Eigen::MatrixXd chosen(c, c);
    int found = 0;
    for (int i = 0; i < dim && found < c; ++i) {
        Eigen::VectorXd v = span.row(i).transpose();
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < found; ++k) v -= chosen.col(k).dot(v) * chosen.col(k);
        }
        const double norm = v.norm();
        if (norm > 1e-6) chosen.col(found++) = v / norm;
    }
    if (found == c) vecs.middleCols(first, c) = span * chosen;
}

void apply_sign_rule(Eigen::Ref<Eigen::VectorXd> v) {
    const double scale = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-12 * scale) {
            if (v[i] < 0.0) v = -v;
            return;
        }
    }
}

}  // namespace

PrincipalBasisPtr principal_basis(const KernelMatrix& kern, int H) {
    const int dim = kern.dim();
    require(dim >= 1, "principal_basis: empty kernel");
    require(H >= 1 && H <= dim,
            "principal_basis: rank H=" + std::to_string(H) + " outside [1, " + std::to_string(dim) + "]");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(kern.entries);
    require(solver.info() == Eigen::Success, "principal_basis: eigen-decomposition failed");

    Eigen::VectorXd values = solver.eigenvalues().reverse();
    Eigen::MatrixXd vecs = solver.eigenvectors().rowwise().reverse();

    const double top = std::max(values.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const double tie = 1e-12 * top;
    for (int first = 0; first < dim;) {
        int last = first + 1;
        while (last < dim && values[last - 1] - values[last] <= tie) ++last;
        if (last - first > 1) canonicalize_cluster(vecs, first, last);
        first = last;
    }
    for (int h = 0; h < dim; ++h) apply_sign_rule(vecs.col(h));

    auto basis = std::make_shared<PrincipalBasis>();
    basis->kind = kern.kind;
    basis->H = H;
    basis->vectors = vecs.leftCols(H);
    basis->eigenvalues.assign(values.data(), values.data() + H);
    basis->scale_factors = kern.scale_factors;
    basis->landscape_scale = kern.landscape_scale;
    return basis;
}

CompressedImage compress_image(const BesselImage& b, const PrincipalBasisPtr& basis) {
    require(basis != nullptr, "compress_image: null basis");
    require(b.grid != nullptr, "compress_image: null grid");
    const int R = b.grid->R;
    const int Q = b.grid->Q;
    require(basis->dim() == R, "compress_image: basis dimension " + std::to_string(basis->dim()) +
                                   " does not match R=" + std::to_string(R));
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const Eigen::VectorXd> eta(basis->scale_factors.data(), R);
    const RowMajor weights = basis->vectors.transpose() * eta.asDiagonal();

    CompressedImage out;
    out.basis = basis;
    out.Q = Q;
    out.coeffs.assign(static_cast<std::size_t>(basis->H) * Q, cdouble{});
    const Eigen::Map<const RowMajor> rings(reinterpret_cast<const double*>(b.coeffs.data()), R, 2 * Q);
    Eigen::Map<RowMajor> rows(reinterpret_cast<double*>(out.coeffs.data()), basis->H, 2 * Q);
    rows.noalias() = weights * rings;
    return out;
}

std::vector<cdouble> landscape_2d_compressed_spectrum(const CompressedImage& a, const CompressedImage& b) {
    require(a.basis != nullptr && a.basis == b.basis, "landscape_2d_compressed: images use different bases");
    require(a.Q == b.Q, "landscape_2d_compressed: Q mismatch");
    const int H = a.H();
    const int Q = a.Q;
    const double weight = kTwoPi * a.basis->landscape_scale;
    std::vector<cdouble> xhat(Q);
    for (int h = 0; h < H; ++h) {
        const std::size_t off = static_cast<std::size_t>(h) * Q;
        detail::accumulate_conj_product(&a.coeffs[off], &b.coeffs[off], weight, Q, xhat.data());
    }
    return xhat;
}

Landscape1D landscape_2d_compressed(const CompressedImage& a, const CompressedImage& b, int Q_out) {
    const auto xhat = landscape_2d_compressed_spectrum(a, b);
    return landscape_from_spectrum(xhat, Q_out);
}

}  // namespace rra

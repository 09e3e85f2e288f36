#include "rra/grids.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace rra {

namespace {

// Monic Jacobi recurrence p_{n+1} = (x - a_n) p_n - b_n p_{n-1}.
struct JacobiRecurrence {
    double alpha;
    double beta;

    long double a(int n) const {
        const long double ab = alpha + beta;
        if (n == 0) return (beta - alpha) / (ab + 2.0L);
        if (alpha == beta) return 0.0L;
        const long double s = 2.0L * n + ab;
        return (static_cast<long double>(beta) * beta - static_cast<long double>(alpha) * alpha) /
               (s * (s + 2.0L));
    }

    long double b(int n) const {
        const long double ab = alpha + beta;
        const long double s = 2.0L * n + ab;
        return 4.0L * n * (n + alpha) * (n + beta) * (n + ab) / (s * s * (s + 1.0L) * (s - 1.0L));
    }

    long double mu0() const {
        return std::exp2l(alpha + beta + 1.0L) * std::tgammal(alpha + 1.0L) *
               std::tgammal(beta + 1.0L) / std::tgammal(alpha + beta + 2.0L);
    }
};

struct OrthonormalEval {
    long double value;       // p_n(x)
    long double derivative;  // p_n'(x)
    long double christoffel; // sum_{j<n} p_j(x)^2
};

OrthonormalEval eval_orthonormal(const JacobiRecurrence& rec, int n, long double x) {
    long double p_prev = 0.0L;
    long double p = 1.0L / std::sqrt(rec.mu0());
    long double dp_prev = 0.0L;
    long double dp = 0.0L;
    long double sum_sq = 0.0L;
    long double sqrt_b_prev = 0.0L;
    for (int j = 0; j < n; ++j) {
        sum_sq += p * p;
        const long double sqrt_b_next = std::sqrt(rec.b(j + 1));
        const long double p_next = ((x - rec.a(j)) * p - sqrt_b_prev * p_prev) / sqrt_b_next;
        const long double dp_next = (p + (x - rec.a(j)) * dp - sqrt_b_prev * dp_prev) / sqrt_b_next;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
        sqrt_b_prev = sqrt_b_next;
    }
    return {p, dp, sum_sq};
}

bool same_values(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

GaussRule gauss_jacobi(int n, double alpha, double beta) {
    require(n >= 1, "gauss_jacobi: need at least one node");
    require(alpha > -1.0 && beta > -1.0, "gauss_jacobi: alpha, beta must exceed -1");
    const JacobiRecurrence rec{alpha, beta};

    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(std::max(n - 1, 1));
    for (int j = 0; j < n; ++j) diag[j] = static_cast<double>(rec.a(j));
    for (int j = 1; j < n; ++j) sub[j - 1] = static_cast<double>(std::sqrt(rec.b(j)));
    if (n == 1) sub.resize(0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    require(solver.info() == Eigen::Success, "gauss_jacobi: tridiagonal eigen-solve failed");

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        long double x = solver.eigenvalues()[i];
        for (int it = 0; it < 8; ++it) {
            const auto e = eval_orthonormal(rec, n, x);
            const long double step = e.value / e.derivative;
            x -= step;
            if (std::fabs(step) < 1e-19L) break;
        }
        const auto e = eval_orthonormal(rec, n, x);
        rule.nodes[i] = static_cast<double>(x);
        rule.weights[i] = static_cast<double>(1.0L / e.christoffel);
    }
    return rule;
}

bool PolarGrid::same_as(const PolarGrid& other) const {
    return this == &other || (K == other.K && R == other.R && Q == other.Q &&
                              same_values(k_nodes, other.k_nodes) &&
                              same_values(w_radial, other.w_radial));
}

bool SphereGrid::same_as(const SphereGrid& other) const {
    return this == &other || (K == other.K && R == other.R && L == other.L &&
                              same_values(k_nodes, other.k_nodes) &&
                              same_values(w_radial, other.w_radial));
}

PolarGridPtr build_polar_grid(double K, int R, int Q) {
    require(K > 0.0 && std::isfinite(K), "build_polar_grid: K must be positive, got " + std::to_string(K));
    require(R >= 1, "build_polar_grid: R must be at least 1");
    require(Q >= 2 && Q % 2 == 0, "build_polar_grid: Q must be even and >= 2, got " + std::to_string(Q));

    // k = K (t + 1) / 2 maps (1 + t) dt onto (4 / K^2) k dk.
    const GaussRule rule = gauss_jacobi(R, 0.0, 1.0);
    auto grid = std::make_shared<PolarGrid>();
    grid->K = K;
    grid->R = R;
    grid->Q = Q;
    grid->k_nodes.resize(R);
    grid->w_radial.resize(R);
    const double half = 0.5 * K;
    for (int r = 0; r < R; ++r) {
        grid->k_nodes[r] = half * (rule.nodes[r] + 1.0);
        grid->w_radial[r] = half * half * rule.weights[r];
    }
    grid->dpsi = kTwoPi / Q;
    grid->psi_nodes.resize(Q);
    for (int q = 0; q < Q; ++q) grid->psi_nodes[q] = q * grid->dpsi;
    return grid;
}

namespace {

std::shared_ptr<SphereGrid> sphere_angular_part(double K, int L) {
    auto grid = std::make_shared<SphereGrid>();
    grid->K = K;
    grid->L = L;
    grid->M = 1 + 2 * L;
    const GaussRule legendre = gauss_legendre(L + 1);
    grid->polar_nodes = legendre.nodes;
    grid->polar_weights = legendre.weights;
    const int n_phi = 2 * L + 2;
    grid->azimuth_nodes.resize(n_phi);
    for (int p = 0; p < n_phi; ++p) grid->azimuth_nodes[p] = kTwoPi * p / n_phi;
    return grid;
}

}  // namespace

SphereGridPtr build_sphere_grid(double K, int R, int L) {
    require(K > 0.0 && std::isfinite(K), "build_sphere_grid: K must be positive, got " + std::to_string(K));
    require(R >= 1, "build_sphere_grid: R must be at least 1");
    require(L >= 0, "build_sphere_grid: L must be non-negative");

    const GaussRule rule = gauss_jacobi(R, 0.0, 2.0);
    auto grid = sphere_angular_part(K, L);
    grid->R = R;
    grid->k_nodes.resize(R);
    grid->w_radial.resize(R);
    const double half = 0.5 * K;
    for (int r = 0; r < R; ++r) {
        grid->k_nodes[r] = half * (rule.nodes[r] + 1.0);
        grid->w_radial[r] = half * half * half * rule.weights[r];
    }
    return grid;
}

SphereGridPtr build_sphere_grid_on_radii(double K, std::vector<double> k_nodes,
                                         std::vector<double> w_radial, int L) {
    require(K > 0.0, "build_sphere_grid_on_radii: K must be positive");
    require(!k_nodes.empty() && k_nodes.size() == w_radial.size(),
            "build_sphere_grid_on_radii: node/weight size mismatch");
    require(L >= 0, "build_sphere_grid_on_radii: L must be non-negative");
    auto grid = sphere_angular_part(K, L);
    grid->R = static_cast<int>(k_nodes.size());
    grid->k_nodes = std::move(k_nodes);
    grid->w_radial = std::move(w_radial);
    return grid;
}

int default_radial_count(double K) {
    require(K > 0.0, "default_radial_count: K must be positive");
    return static_cast<int>(std::ceil(K)) + 1;
}

}  // namespace rra

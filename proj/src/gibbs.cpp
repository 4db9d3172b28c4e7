#include "thermalab/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thermalab/errors.hpp"
#include "thermalab/operators.hpp"

namespace thermalab {

GibbsState gibbs_state(const Spectrum& spec, double beta) {
    if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
    GibbsState g;
    g.beta = beta;
    const Eigen::VectorXd x = -beta * spec.energies;
    const double shift = x.maxCoeff();
    const Eigen::VectorXd w = (x.array() - shift).exp();
    const double norm = w.sum();
    g.weights = w / norm;
    g.ln_z = std::log(norm) + shift;
    g.mean_energy = g.weights.dot(spec.energies);
    g.variance = g.weights.dot((spec.energies.array() - g.mean_energy).square().matrix());
    return g;
}

double solve_beta(const Spectrum& spec, double e_target, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const double e_min = spec.energies.minCoeff();
    const double e_max = spec.energies.maxCoeff();
    if (!(e_target > e_min && e_target < e_max))
        throw UnattainableEnergyError("target energy outside the open spectral interval");

    const double beta_cap = static_cast<double>(1 << 20);
    auto mean_at = [&](double beta) { return gibbs_state(spec, beta).mean_energy; };

    // E(beta) decreases in beta: expand until the bracket straddles.
    double lo = -64.0, hi = 64.0;
    while (mean_at(hi) > e_target) {
        hi *= 2.0;
        if (hi > beta_cap) throw NonConvergenceError("beta bracket expansion exceeded 2^20");
    }
    while (mean_at(lo) < e_target) {
        lo *= 2.0;
        if (lo < -beta_cap) throw NonConvergenceError("beta bracket expansion exceeded 2^20");
    }

    double mid = 0.0;
    for (int it = 0; it < 400; ++it) {
        mid = (lo + hi) / 2.0;
        const double e_mid = mean_at(mid);
        if (std::abs(e_mid - e_target) <= tol) return mid;
        if (e_mid > e_target)
            lo = mid;
        else
            hi = mid;
    }
    throw NonConvergenceError("beta bisection did not reach the energy tolerance");
}

BerryEsseen berry_esseen_error(const Eigen::VectorXd& energies, const Eigen::VectorXd& weights,
                               std::optional<std::pair<double, double>> moments) {
    if (energies.size() != weights.size() || energies.size() == 0)
        throw std::invalid_argument("energies and weights must have equal non-zero length");
    if (weights.minCoeff() < -1e-12) throw std::invalid_argument("weights must be non-negative");
    const double total = weights.sum();
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("weights must sum to one");

    const double mean = weights.dot(energies);
    const double var = weights.dot((energies.array() - mean).square().matrix());
    if (var <= 0.0)
        throw DegenerateDistributionError("weight distribution has zero energy variance");

    double g_mean = mean, g_var = var;
    if (moments) {
        g_mean = moments->first;
        g_var = moments->second;
        if (!(g_var > 0.0)) throw std::invalid_argument("external variance must be positive");
    }
    const double sd = std::sqrt(g_var);

    // Cumulative weights over distinct energies; the sup of |F - G| over the
    // real line is attained at a jump, checking both one-sided limits.
    BerryEsseen out;
    double cum = 0.0;
    int i = 0;
    const int n = static_cast<int>(energies.size());
    while (i < n) {
        int j = i;
        double jump = 0.0;
        while (j < n && energies[j] == energies[i]) jump += weights[j++];
        const double e = energies[i];
        const double g = 0.5 * std::erfc(-(e - g_mean) / (sd * std::sqrt(2.0)));
        const double below = std::abs(cum - g);
        cum += jump;
        const double above = std::abs(cum - g);
        if (below > out.zeta) {
            out.zeta = below;
            out.at_energy = e;
        }
        if (above > out.zeta) {
            out.zeta = above;
            out.at_energy = e;
        }
        i = j;
    }
    return out;
}

CorrelationFit fit_correlation_length(const Eigen::MatrixXcd& rho_comp,
                                      const LatticeSpec& lattice, char probe,
                                      const std::vector<int>& distances) {
    const long dim = lattice.hilbert_dim();
    if (rho_comp.rows() != dim || rho_comp.cols() != dim)
        throw std::invalid_argument("density matrix does not match the lattice");
    const Eigen::MatrixXcd p = pauli(probe);

    std::vector<int> c0(lattice.dimension, 0);
    const int site0 = lattice.site(c0);
    const Eigen::MatrixXcd rho0 = partial_trace(rho_comp, {site0}, lattice);
    const double mean0 = (p * rho0).trace().real();

    CorrelationFit fit;
    for (int r : distances) {
        if (r < 1 || r >= lattice.side) throw std::invalid_argument("probe distance out of range");
        if (lattice.boundary == Boundary::Periodic && r > lattice.side / 2)
            throw std::invalid_argument("periodic probe distance beyond side/2");
        std::vector<int> cr(lattice.dimension, 0);
        cr[0] = r;
        const int site_r = lattice.site(cr);
        const Eigen::MatrixXcd rho_pair = partial_trace(rho_comp, {site0, site_r}, lattice);
        const Eigen::MatrixXcd rho_r = partial_trace(rho_comp, {site_r}, lattice);
        const double joint = (kron(p, p) * rho_pair).trace().real();
        const double mean_r = (p * rho_r).trace().real();
        const double conn = joint - mean0 * mean_r;
        if (std::abs(conn) < 1e-14) continue;  // numerically dead point
        fit.points.push_back({r, std::abs(conn)});
    }
    if (fit.points.size() < 3)
        throw InsufficientDataError("fewer than three usable correlator points");

    // Least squares on ln|corr| = intercept - r / xi.
    const int m = static_cast<int>(fit.points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [r, v] : fit.points) {
        sx += r;
        sy += std::log(v);
        sxx += static_cast<double>(r) * r;
        sxy += r * std::log(v);
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / m;
    if (!(slope < 0.0))
        throw InsufficientDataError("correlators do not decay; correlation length undefined");
    fit.xi = -1.0 / slope;
    fit.z_amp = intercept / std::log(static_cast<double>(lattice.n_sites()));
    double rss = 0.0;
    for (const auto& [r, v] : fit.points) {
        const double e = std::log(v) - (intercept + slope * r);
        rss += e * e;
    }
    fit.residual_rms = std::sqrt(rss / m);
    return fit;
}

double relative_entropy_vs_gibbs(const DensityMatrix& tau_energy, const GibbsState& gibbs,
                                 const Spectrum& spec) {
    if (tau_energy.basis != Basis::Energy)
        throw BasisMismatchError("tau must be given in the energy basis");
    if (tau_energy.mat.rows() != spec.dim())
        throw std::invalid_argument("tau dimension mismatch");
    const double s_tau = von_neumann_entropy(tau_energy);
    const double e_tau = tau_energy.mat.diagonal().real().dot(spec.energies);
    return -s_tau + gibbs.beta * e_tau + gibbs.ln_z;
}

double relative_entropy_direct(const DensityMatrix& tau_energy, const GibbsState& gibbs,
                               const Spectrum& spec) {
    if (tau_energy.basis != Basis::Energy)
        throw BasisMismatchError("tau must be given in the energy basis");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        (tau_energy.mat + tau_energy.mat.adjoint()) / 2.0);
    const Eigen::VectorXd p = es.eigenvalues();
    if (p.minCoeff() <= 0.0)
        throw std::invalid_argument("direct relative entropy route requires full rank");
    // tr(tau ln tau)
    double t1 = 0.0;
    for (int i = 0; i < p.size(); ++i) t1 += p[i] * std::log(p[i]);
    // tr(tau ln g) with ln g diagonal in the energy basis
    const Eigen::VectorXd ln_g = (-gibbs.beta * spec.energies.array() - gibbs.ln_z).matrix();
    const double t2 = tau_energy.mat.diagonal().real().dot(ln_g);
    return t1 - t2;
}

}  // namespace thermalab

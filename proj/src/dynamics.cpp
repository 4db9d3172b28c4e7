#include "thermalab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thermalab/equilibrium.hpp"
#include "thermalab/errors.hpp"
#include "thermalab/parallel.hpp"

namespace thermalab {

namespace {

constexpr Complex kImag(0.0, 1.0);

Eigen::VectorXcd phase_vector(const Eigen::VectorXd& energies, double t) {
    return (-kImag * t * energies.array().cast<Complex>()).exp().matrix();
}

double checked_real(Complex v, const char* what) {
    if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v.real())))
        throw std::logic_error(std::string(what) + ": expectation has a large imaginary part");
    return v.real();
}

// exp(-i a) (1 - exp(-i w)) / (i w) = exp(-i (a + w/2)) sinc(w/2), the mean
// of exp(-i x) over x in [a, a + w].
Complex flat_phase_mean(double a, double w) {
    const double half = 0.5 * w;
    const double s = half == 0.0 ? 1.0 : std::sin(half) / half;
    return std::exp(-kImag * (a + half)) * s;
}

}  // namespace

void TimeGrid::validate() const {
    if (times.empty()) throw std::invalid_argument("TimeGrid: empty");
    if (times.front() < 0.0) throw std::invalid_argument("TimeGrid: negative time");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] <= times[i - 1]) throw std::invalid_argument("TimeGrid: not increasing");
    }
}

TimeGrid TimeGrid::linspace(double t0, double t1, int n) {
    if (n < 2 || t1 <= t0) throw std::invalid_argument("TimeGrid::linspace: bad parameters");
    TimeGrid g;
    g.times.resize(n);
    for (int i = 0; i < n; ++i) g.times[i] = t0 + (t1 - t0) * i / (n - 1);
    g.validate();
    return g;
}

TimeGrid TimeGrid::logspace(double t0, double t1, int n) {
    if (n < 2 || t0 <= 0.0 || t1 <= t0)
        throw std::invalid_argument("TimeGrid::logspace: bad parameters");
    TimeGrid g;
    g.times.resize(n);
    const double l0 = std::log(t0), l1 = std::log(t1);
    for (int i = 0; i < n; ++i) g.times[i] = std::exp(l0 + (l1 - l0) * i / (n - 1));
    g.validate();
    return g;
}

Eigen::VectorXd evolve_expectation(const Eigen::VectorXcd& c_energy, const Spectrum& spec,
                                   const Eigen::MatrixXcd& a_energy, const TimeGrid& grid) {
    grid.validate();
    if (c_energy.size() != spec.dim() || a_energy.rows() != spec.dim())
        throw BasisMismatchError("evolve_expectation: dimension mismatch");
    Eigen::VectorXd out(grid.times.size());
    for (std::size_t i = 0; i < grid.times.size(); ++i) {
        const Eigen::VectorXcd v = phase_vector(spec.energies, grid.times[i]).cwiseProduct(c_energy);
        out(i) = checked_real(v.dot(a_energy * v), "evolve_expectation");
    }
    return out;
}

Eigen::VectorXd evolve_expectation(const DensityMatrix& rho_energy, const Spectrum& spec,
                                   const Eigen::MatrixXcd& a_energy, const TimeGrid& grid) {
    grid.validate();
    if (rho_energy.basis != Basis::Energy)
        throw BasisMismatchError("evolve_expectation expects an energy-basis density matrix");
    if (rho_energy.mat.rows() != spec.dim() || a_energy.rows() != spec.dim())
        throw BasisMismatchError("evolve_expectation: dimension mismatch");
    // tr(D rho D^dagger A) = sum_{nu,mu} p_nu conj(p_mu) (rho o A^T)_{nu,mu}.
    const Eigen::MatrixXcd g = rho_energy.mat.cwiseProduct(a_energy.transpose());
    Eigen::VectorXd out(grid.times.size());
    for (std::size_t i = 0; i < grid.times.size(); ++i) {
        const Eigen::VectorXcd p = phase_vector(spec.energies, grid.times[i]);
        out(i) = checked_real(p.conjugate().dot(g * p.conjugate()), "evolve_expectation");
    }
    return out;
}

LongTimeAverage long_time_average(const Eigen::VectorXcd& c_energy, const Spectrum& spec,
                                  const Eigen::MatrixXcd& a_energy, double t_max, int n_points) {
    if (t_max <= 0.0 || n_points < 2)
        throw std::invalid_argument("long_time_average: bad parameters");
    const TimeGrid grid = TimeGrid::linspace(0.0, t_max, n_points);
    const Eigen::VectorXd series = evolve_expectation(c_energy, spec, a_energy, grid);

    LongTimeAverage out;
    out.average = (series.sum() - 0.5 * (series(0) + series(n_points - 1))) / (n_points - 1);
    for (const auto& [cb, ce] : spec.classes) {
        const Eigen::VectorXcd seg = c_energy.segment(cb, ce - cb);
        out.dephased_value +=
            checked_real(seg.dot(a_energy.block(cb, cb, ce - cb, ce - cb) * seg),
                         "long_time_average");
    }
    out.gap = std::abs(out.average - out.dephased_value);
    return out;
}

WindowDynamics window_dynamics(const Spectrum& spec, const WindowPartition& part,
                               const TimeGrid& grid) {
    grid.validate();
    const int n_windows = part.count();
    const int n_times = static_cast<int>(grid.times.size());

    WindowDynamics wd;
    wd.times = grid.times;
    wd.phi.resize(n_windows, n_times);
    wd.f.resize(n_windows, n_times);
    wd.singleton.resize(n_windows);
    wd.dims.resize(n_windows);
    wd.lo = part.lo;
    wd.width.resize(n_windows);
    for (int k = 0; k < n_windows; ++k) {
        wd.dims[k] = part.dim(k);
        wd.singleton[k] = part.dim(k) == 1 ? 1 : 0;
        wd.width[k] = part.width(k);
    }
    for (int i = 0; i < n_times; ++i) {
        const Eigen::VectorXcd p = phase_vector(spec.energies, grid.times[i]);
        for (int k = 0; k < n_windows; ++k) {
            const auto [b, e] = part.range[k];
            const int d = e - b;
            const Complex phi = p.segment(b, d).mean();
            wd.phi(k, i) = phi;
            wd.f(k, i) = d == 1 ? 1.0 : (d * std::norm(phi) - 1.0) / (d - 1.0);
        }
    }
    return wd;
}

double average_f(const Spectrum& spec, const WindowPartition& part, int k) {
    const auto [b, e] = part.range[k];
    const double d = static_cast<double>(e - b);
    if (e - b == 1) return 1.0;
    double sum_m2 = 0.0;
    for (const auto& [cb, ce] : classes_in_window(spec, b, e)) {
        const double m = static_cast<double>(ce - cb);
        sum_m2 += m * m;
    }
    return (sum_m2 / d - 1.0) / (d - 1.0);
}

Eigen::MatrixXcd constant_dos_phi(const WindowDynamics& wd) {
    const int n_windows = static_cast<int>(wd.dims.size());
    const int n_times = static_cast<int>(wd.times.size());
    Eigen::MatrixXcd flat(n_windows, n_times);
    for (int k = 0; k < n_windows; ++k) {
        for (int i = 0; i < n_times; ++i) {
            const double t = wd.times[i];
            flat(k, i) = flat_phase_mean(wd.lo[k] * t, wd.width[k] * t);
        }
    }
    return flat;
}

ConstantDosComparison constant_dos_comparison(const Spectrum& spec, const WindowPartition& part,
                                              const WindowDynamics& wd) {
    ConstantDosComparison out;
    out.phi_flat = constant_dos_phi(wd);
    out.abs_error = (wd.phi - out.phi_flat).cwiseAbs();
    out.max_spacing.resize(part.count());
    for (int k = 0; k < part.count(); ++k) {
        const auto [b, e] = part.range[k];
        double gap = 0.0;
        for (int nu = b + 1; nu < e; ++nu)
            gap = std::max(gap, spec.energies(nu) - spec.energies(nu - 1));
        // A single level has no internal spacing; the window width is the
        // honest scale for the flat-density error there.
        out.max_spacing(k) = e - b > 1 ? gap : part.width(k);
    }
    return out;
}

ExpectedDynamics expected_dynamics(const Eigen::VectorXcd& c_energy,
                                   const Eigen::MatrixXcd& a_energy, const Spectrum& spec,
                                   const WindowPartition& part, const TimeGrid& grid) {
    grid.validate();
    if (c_energy.size() != spec.dim() || a_energy.rows() != spec.dim())
        throw BasisMismatchError("expected_dynamics: dimension mismatch");
    const int n_windows = part.count();
    const Eigen::VectorXd q = window_weights(c_energy, part);

    // Pair couplings g(k, k') = <psi_k'| A |psi_k> restricted to the blocks.
    Eigen::MatrixXcd g(n_windows, n_windows);
    for (int k = 0; k < n_windows; ++k) {
        const auto [b, e] = part.range[k];
        const Eigen::VectorXcd column = a_energy.middleCols(b, e - b) * c_energy.segment(b, e - b);
        for (int j = 0; j < n_windows; ++j) {
            const auto [jb, je] = part.range[j];
            g(k, j) = c_energy.segment(jb, je - jb).dot(column.segment(jb, je - jb));
        }
    }

    ExpectedDynamics out;
    out.times = grid.times;
    out.initial_value = checked_real(c_energy.dot(a_energy * c_energy), "expected_dynamics");

    // Per-window diagonal expectation and its ensemble (twirl) average.
    Eigen::VectorXd a_diag(n_windows), e_diag(n_windows);
    for (int k = 0; k < n_windows; ++k) {
        const auto [b, e] = part.range[k];
        const int d = e - b;
        a_diag(k) = checked_real(g(k, k), "expected_dynamics");
        const double tr_a = checked_real(a_energy.block(b, b, d, d).trace(), "expected_dynamics");
        const auto [ca, cb] = window_twirl_coefficients(part, spec, k);
        e_diag(k) = ca * a_diag(k) + cb * q(k) * tr_a;
    }
    out.equilibrium_value = e_diag.sum();

    const WindowDynamics wd = window_dynamics(spec, part, grid);
    out.series.resize(grid.times.size());
    for (std::size_t i = 0; i < grid.times.size(); ++i) {
        const Eigen::VectorXcd phi = wd.phi.col(i);
        Complex cross = phi.cwiseProduct(g * phi.conjugate()).sum();
        for (int k = 0; k < n_windows; ++k) cross -= std::norm(phi(k)) * g(k, k);
        double relax = 0.0;
        for (int k = 0; k < n_windows; ++k) relax += wd.f(k, i) * (a_diag(k) - e_diag(k));
        out.series(i) =
            out.equilibrium_value + checked_real(cross, "expected_dynamics") + relax;
    }

    out.infinite_time_value = out.equilibrium_value;
    for (int k = 0; k < n_windows; ++k)
        out.infinite_time_value += average_f(spec, part, k) * (a_diag(k) - e_diag(k));
    return out;
}

RelaxationBound relaxation_bound(const WindowDynamics& wd, double a_norm) {
    if (a_norm < 0.0) throw std::invalid_argument("relaxation_bound: negative norm");
    const int n_windows = static_cast<int>(wd.dims.size());
    const int n_times = static_cast<int>(wd.times.size());
    const double k2 = static_cast<double>(n_windows) * n_windows;

    RelaxationBound out;
    out.times = wd.times;
    out.a_norm = a_norm;
    out.r.resize(n_times);
    out.r_flat.resize(n_times);
    const Eigen::MatrixXcd flat = constant_dos_phi(wd);
    for (int i = 0; i < n_times; ++i) {
        const double max_phi = wd.phi.col(i).cwiseAbs().maxCoeff();
        const double max_f = wd.f.col(i).maxCoeff();
        out.r(i) = a_norm * (k2 * max_phi * max_phi + 2.0 * max_f);

        double max_phi_flat = 0.0, max_f_flat = -1.0;
        for (int k = 0; k < n_windows; ++k) {
            const double m = std::abs(flat(k, i));
            max_phi_flat = std::max(max_phi_flat, m);
            const double d = static_cast<double>(wd.dims[k]);
            max_f_flat = std::max(max_f_flat, d == 1.0 ? 1.0 : (d * m * m - 1.0) / (d - 1.0));
        }
        out.r_flat(i) = a_norm * (k2 * max_phi_flat * max_phi_flat + 2.0 * max_f_flat);
    }
    return out;
}

double envelope_loglog_slope(const std::vector<double>& times, const Eigen::VectorXd& values,
                             double t_min, double t_max) {
    if (times.size() != static_cast<std::size_t>(values.size()))
        throw std::invalid_argument("envelope_loglog_slope: length mismatch");
    std::vector<double> lx, ly;
    for (std::size_t i = 1; i + 1 < times.size(); ++i) {
        if (times[i] < t_min || times[i] > t_max) continue;
        if (values(i) <= 0.0) continue;
        if (values(i) > values(i - 1) && values(i) >= values(i + 1)) {
            lx.push_back(std::log(times[i]));
            ly.push_back(std::log(values(i)));
        }
    }
    if (lx.size() < 3)
        throw InsufficientDataError("envelope_loglog_slope: fewer than three envelope points");
    const double n = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

DistanceBoundSeries dynamics_distance_bound(const Eigen::MatrixXcd& rho_comp,
                                            const Eigen::MatrixXcd& h,
                                            const Eigen::MatrixXcd& h_prime,
                                            const TimeGrid& grid) {
    grid.validate();
    const long dim = rho_comp.rows();
    if (h.rows() != dim || h_prime.rows() != dim)
        throw BasisMismatchError("dynamics_distance_bound: dimension mismatch");
    if (dim > (1L << 10))
        throw DimensionGuardError("dynamics_distance_bound materializes propagators; dim > 2^10");

    const Spectrum sa = diagonalize(h);
    const Spectrum sb = diagonalize(h_prime);
    const double norm_diff = operator_norm(h - h_prime);

    DistanceBoundSeries out;
    out.times = grid.times;
    out.distance.resize(grid.times.size());
    out.bound.resize(grid.times.size());
    out.max_violation = 0.0;
    for (std::size_t i = 0; i < grid.times.size(); ++i) {
        const double t = grid.times[i];
        const Eigen::MatrixXcd ua =
            sa.vectors * phase_vector(sa.energies, t).asDiagonal() * sa.vectors.adjoint();
        const Eigen::MatrixXcd ub =
            sb.vectors * phase_vector(sb.energies, t).asDiagonal() * sb.vectors.adjoint();
        out.distance(i) =
            trace_distance(ua * rho_comp * ua.adjoint(), ub * rho_comp * ub.adjoint());
        out.bound(i) = 2.0 * t * norm_diff;
        out.max_violation = std::max(out.max_violation, out.distance(i) - out.bound(i));
    }
    if (out.max_violation > 1e-8)
        throw std::logic_error("dynamics_distance_bound: exact series exceeded the bound");
    return out;
}

DynamicsConcentration mc_dynamics_concentration(const Eigen::VectorXcd& c_energy,
                                                const Eigen::MatrixXcd& a_energy,
                                                const Spectrum& spec, const WindowPartition& part,
                                                const TimeGrid& grid, int n_samples,
                                                std::uint64_t master_seed, int threads) {
    grid.validate();
    if (n_samples < 10)
        throw InsufficientDataError("mc_dynamics_concentration needs >= 10 samples");
    const int n_times = static_cast<int>(grid.times.size());

    DynamicsConcentration out;
    out.times = grid.times;
    out.samples.resize(n_samples, n_times);
    out.min_window_dim = part.min_dim();
    parallel_for(n_samples, threads, [&](int s) {
        const BlockUnitary u =
            sample_block_unitary(part, master_seed, static_cast<std::uint64_t>(s));
        const Eigen::VectorXcd b = apply_block_unitary(u, c_energy, /*adjoint=*/true);
        for (int i = 0; i < n_times; ++i) {
            const Eigen::VectorXcd v = phase_vector(spec.energies, grid.times[i]).cwiseProduct(b);
            const Eigen::VectorXcd y = apply_block_unitary(u, v);
            out.samples(s, i) = checked_real(y.dot(a_energy * y), "mc_dynamics_concentration");
        }
    });

    out.mean = out.samples.colwise().mean().transpose();
    out.variance.resize(n_times);
    for (int i = 0; i < n_times; ++i) {
        out.variance(i) =
            (out.samples.col(i).array() - out.mean(i)).square().sum() / (n_samples - 1.0);
    }
    return out;
}

double levy_reference(double eps, int min_window_dim, double a_norm, double c) {
    if (a_norm <= 0.0) throw std::invalid_argument("levy_reference: norm must be positive");
    return std::exp(-c * min_window_dim * eps * eps / (a_norm * a_norm));
}

}  // namespace thermalab

#include "thermalab/operators.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "thermalab/errors.hpp"

namespace thermalab {

namespace {

// Digit strides for the global basis index: site 0 most significant.
std::vector<long> site_strides(const LatticeSpec& lattice) {
    const int n = lattice.n_sites();
    std::vector<long> strides(n);
    long s = 1;
    for (int i = n - 1; i >= 0; --i) {
        strides[i] = s;
        s *= lattice.local_dim;
    }
    return strides;
}

Region complement_region(const Region& keep, const LatticeSpec& lattice) {
    Region env;
    size_t j = 0;
    for (int s = 0; s < lattice.n_sites(); ++s) {
        if (j < keep.size() && keep[j] == s) {
            ++j;
            continue;
        }
        env.push_back(s);
    }
    return env;
}

// Global index offset of every configuration of the given sites, enumerated
// with the first site as the most significant digit.
std::vector<long> config_offsets(const Region& sites, const LatticeSpec& lattice,
                                 const std::vector<long>& strides) {
    const int d = lattice.local_dim;
    long count = 1;
    for (size_t i = 0; i < sites.size(); ++i) count *= d;
    std::vector<long> offs(count, 0);
    for (long c = 0; c < count; ++c) {
        long rest = c;
        long off = 0;
        for (int i = static_cast<int>(sites.size()) - 1; i >= 0; --i) {
            off += (rest % d) * strides[sites[i]];
            rest /= d;
        }
        offs[c] = off;
    }
    return offs;
}

}  // namespace

Eigen::MatrixXcd pauli(char which) {
    Eigen::MatrixXcd m(2, 2);
    const Complex i(0.0, 1.0);
    switch (which) {
        case 'i': m << 1, 0, 0, 1; break;
        case 'x': m << 0, 1, 1, 0; break;
        case 'y': m << 0, -i, i, 0; break;
        case 'z': m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("unknown Pauli label");
    }
    return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

long region_dim(const Region& r, const LatticeSpec& lattice) {
    validate_region(r, lattice);
    long d = 1;
    for (size_t i = 0; i < r.size(); ++i) d *= lattice.local_dim;
    return d;
}

Eigen::MatrixXcd embed_observable(const Eigen::MatrixXcd& block, const Region& region,
                                  const LatticeSpec& lattice) {
    const long dr = region_dim(region, lattice);
    if (block.rows() != dr || block.cols() != dr)
        throw std::invalid_argument("block dimension does not match region");
    const long dim = lattice.hilbert_dim();
    const auto strides = site_strides(lattice);
    const Region env = complement_region(region, lattice);
    const auto reg_off = config_offsets(region, lattice, strides);
    const auto env_off = config_offsets(env, lattice, strides);

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (long e : env_off)
        for (long a = 0; a < dr; ++a)
            for (long b = 0; b < dr; ++b) out(e + reg_off[a], e + reg_off[b]) = block(a, b);
    return out;
}

Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, const Region& keep,
                               const LatticeSpec& lattice) {
    const long dim = lattice.hilbert_dim();
    if (rho.rows() != dim || rho.cols() != dim)
        throw std::invalid_argument("density matrix dimension mismatch");
    const long dr = region_dim(keep, lattice);
    const auto strides = site_strides(lattice);
    const Region env = complement_region(keep, lattice);
    const auto reg_off = config_offsets(keep, lattice, strides);
    const auto env_off = config_offsets(env, lattice, strides);

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dr, dr);
    for (long a = 0; a < dr; ++a)
        for (long b = 0; b < dr; ++b) {
            Complex acc(0.0, 0.0);
            for (long e : env_off) acc += rho(e + reg_off[a], e + reg_off[b]);
            out(a, b) = acc;
        }
    return out;
}

Eigen::MatrixXcd partial_trace_columns(const Eigen::MatrixXcd& cols, const Region& keep,
                                       const LatticeSpec& lattice) {
    const long dim = lattice.hilbert_dim();
    if (cols.rows() != dim) throw std::invalid_argument("factor row dimension mismatch");
    const long dr = region_dim(keep, lattice);
    const auto strides = site_strides(lattice);
    const Region env = complement_region(keep, lattice);
    const auto reg_off = config_offsets(keep, lattice, strides);
    const auto env_off = config_offsets(env, lattice, strides);
    const long de = static_cast<long>(env_off.size());

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dr, dr);
    Eigen::MatrixXcd m(dr, de);
    for (long c = 0; c < cols.cols(); ++c) {
        for (long a = 0; a < dr; ++a)
            for (long e = 0; e < de; ++e) m(a, e) = cols(env_off[e] + reg_off[a], c);
        out.noalias() += m * m.adjoint();
    }
    return out;
}

double hermiticity_residual(const Eigen::MatrixXcd& a) {
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("trace_distance dimension mismatch");
    Eigen::MatrixXcd diff = a - b;
    if (hermiticity_residual(diff) > 1e-9)
        throw std::invalid_argument("trace_distance expects Hermitian inputs");
    diff = (diff + diff.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

double operator_norm(const Eigen::MatrixXcd& a) {
    if (hermiticity_residual(a) > 1e-9)
        throw std::invalid_argument("operator_norm expects a Hermitian input");
    Eigen::MatrixXcd h = (a + a.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::VectorXcd bloch_product_state(const LatticeSpec& lattice,
                                     const std::vector<std::pair<double, double>>& angles) {
    if (lattice.local_dim != 2)
        throw UnsupportedError("Bloch product states require local dimension 2");
    const int n = lattice.n_sites();
    if (static_cast<int>(angles.size()) != n)
        throw std::invalid_argument("one (theta, phi) pair per site required");
    std::vector<std::array<Complex, 2>> amp(n);
    for (int s = 0; s < n; ++s) {
        const double theta = angles[s].first, phi = angles[s].second;
        amp[s][0] = Complex(std::cos(theta / 2.0), 0.0);
        amp[s][1] = std::exp(Complex(0.0, phi)) * std::sin(theta / 2.0);
    }
    const long dim = lattice.hilbert_dim();
    Eigen::VectorXcd v(dim);
    for (long idx = 0; idx < dim; ++idx) {
        Complex a(1.0, 0.0);
        long rest = idx;
        for (int s = n - 1; s >= 0; --s) {
            a *= amp[s][rest % 2];
            rest /= 2;
        }
        v[idx] = a;
    }
    return v;
}

Eigen::VectorXcd bloch_product_state(const LatticeSpec& lattice, double theta, double phi) {
    return bloch_product_state(
        lattice, std::vector<std::pair<double, double>>(lattice.n_sites(), {theta, phi}));
}

}  // namespace thermalab

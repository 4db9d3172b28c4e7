#include "thermalab/hamiltonian.hpp"

#include <stdexcept>

#include "thermalab/errors.hpp"
#include "thermalab/operators.hpp"

namespace thermalab {

double ModelSpec::coupling(const std::string& name, double fallback) const {
    auto it = couplings.find(name);
    return it == couplings.end() ? fallback : it->second;
}

namespace {

void push_term(std::vector<Term>& terms, Region region, const Eigen::MatrixXcd& block,
               double coefficient) {
    if (coefficient == 0.0) return;
    terms.push_back({std::move(region), block, coefficient});
}

std::vector<Term> model_terms(const ModelSpec& spec) {
    const LatticeSpec& lat = spec.lattice;
    std::vector<Term> terms;

    switch (spec.kind) {
        case ModelKind::MixedFieldIsing: {
            if (lat.local_dim != 2)
                throw UnsupportedError("mixed-field Ising requires local dimension 2");
            const double j = spec.coupling("J", 1.0);
            const double hx = spec.coupling("hx", 1.05);
            const double hz = spec.coupling("hz", 0.5);
            const Eigen::MatrixXcd zz = kron(pauli('z'), pauli('z'));
            for (const auto& b : lat.bonds()) push_term(terms, {b.first, b.second}, zz, j);
            for (int s = 0; s < lat.n_sites(); ++s) {
                push_term(terms, {s}, pauli('x'), hx);
                push_term(terms, {s}, pauli('z'), hz);
            }
            break;
        }
        case ModelKind::HeisenbergXXZ: {
            if (lat.local_dim != 2)
                throw UnsupportedError("Heisenberg XXZ requires local dimension 2");
            const double jxy = spec.coupling("Jxy", 1.0);
            const double jz = spec.coupling("Jz", 1.0);
            const double hz = spec.coupling("hz", 0.0);
            // (XX + YY)/2 has unit operator norm; the factor moves into the
            // coefficient so every stored block stays normalized.
            const Eigen::MatrixXcd xxyy =
                (kron(pauli('x'), pauli('x')) + kron(pauli('y'), pauli('y'))) / 2.0;
            const Eigen::MatrixXcd zz = kron(pauli('z'), pauli('z'));
            for (const auto& b : lat.bonds()) {
                push_term(terms, {b.first, b.second}, xxyy, 2.0 * jxy);
                push_term(terms, {b.first, b.second}, zz, jz);
            }
            for (int s = 0; s < lat.n_sites(); ++s) push_term(terms, {s}, pauli('z'), hz);
            break;
        }
        case ModelKind::Custom: {
            if (spec.custom_terms.empty())
                throw std::invalid_argument("custom model needs at least one term");
            for (const auto& ct : spec.custom_terms) {
                validate_region(ct.region, lat);
                const long dr = region_dim(ct.region, lat);
                if (ct.block.rows() != dr || ct.block.cols() != dr)
                    throw std::invalid_argument("custom term block does not match its region");
                if (hermiticity_residual(ct.block) > 1e-12)
                    throw std::invalid_argument("custom term block is not Hermitian");
                const double norm = operator_norm(ct.block);
                if (norm == 0.0) throw std::invalid_argument("custom term block is zero");
                push_term(terms, ct.region, ct.block / norm, norm);
            }
            break;
        }
    }
    if (terms.empty()) throw std::invalid_argument("model has no non-zero terms");
    return terms;
}

}  // namespace

HamiltonianData build_hamiltonian(const ModelSpec& spec) {
    const long dim = spec.lattice.hilbert_dim(spec.max_log2_dim);
    HamiltonianData out;
    out.terms = model_terms(spec);

    out.matrix = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& t : out.terms)
        out.matrix += t.coefficient * embed_observable(t.block, t.region, spec.lattice);

    out.hermiticity = hermiticity_residual(out.matrix);
    if (out.hermiticity > 1e-12)
        throw std::invalid_argument("assembled Hamiltonian failed the Hermiticity check");

    out.locality_diameter = 0;
    for (const auto& t : out.terms)
        out.locality_diameter =
            std::max(out.locality_diameter, spec.lattice.region_diameter(t.region));
    return out;
}

Eigen::MatrixXcd translation_operator(const LatticeSpec& lattice, int axis) {
    lattice.validate();
    if (lattice.boundary != Boundary::Periodic)
        throw UnsupportedError("translation_operator requires periodic boundary");
    if (axis < 0 || axis >= lattice.dimension)
        throw std::invalid_argument("translation_operator: axis out of range");

    const int n_sites = lattice.n_sites();
    const long dim = lattice.hilbert_dim();
    // Site s contributes the digit of weight d^(n_sites-1-s); the shifted
    // configuration places that digit at the translated site.
    std::vector<int> target(n_sites);
    for (int s = 0; s < n_sites; ++s) {
        auto c = lattice.coords(s);
        c[axis] = (c[axis] + 1) % lattice.side;
        target[s] = lattice.site(c);
    }
    std::vector<long> weight(n_sites);
    for (int s = 0; s < n_sites; ++s) {
        long w = 1;
        for (int t = s + 1; t < n_sites; ++t) w *= lattice.local_dim;
        weight[s] = w;
    }
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(dim, dim);
    for (long idx = 0; idx < dim; ++idx) {
        long rest = idx, out_idx = 0;
        for (int s = 0; s < n_sites; ++s) {
            const long digit = rest / weight[s];
            rest %= weight[s];
            out_idx += digit * weight[target[s]];
        }
        t(out_idx, idx) = Complex(1.0, 0.0);
    }
    return t;
}

}  // namespace thermalab

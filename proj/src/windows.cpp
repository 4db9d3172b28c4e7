#include "thermalab/windows.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thermalab/errors.hpp"

namespace thermalab {

double WindowPartition::max_width() const {
    double w = 0.0;
    for (int k = 0; k < count(); ++k) w = std::max(w, width(k));
    return w;
}

int WindowPartition::min_dim() const {
    int d = dim(0);
    for (int k = 1; k < count(); ++k) d = std::min(d, dim(k));
    return d;
}

int WindowPartition::window_of_level(int nu) const {
    for (int k = 0; k < count(); ++k)
        if (nu >= range[k].first && nu < range[k].second) return k;
    throw std::invalid_argument("level index outside the partition");
}

WindowPartition partition_spectrum(const Spectrum& spec, double delta,
                                   std::optional<double> anchor_opt) {
    if (!(delta > 0.0)) throw std::invalid_argument("window width must be positive");
    if (spec.dim() == 0) throw std::invalid_argument("empty spectrum");

    WindowPartition part;
    part.nominal_width = delta;
    part.anchor = anchor_opt.value_or(spec.energies[0]);
    if (spec.energies[0] < part.anchor)
        throw std::invalid_argument("anchor must not exceed the lowest eigenvalue");

    const double scale = std::max(1.0, spec.energies.cwiseAbs().maxCoeff());
    const double eps = 1e-12 * scale;

    for (size_t ci = 0; ci < spec.classes.size(); ++ci) {
        const auto [begin, end] = spec.classes[ci];
        const double e_lo = spec.energies[begin];
        const double e_hi = spec.energies[end - 1];

        const bool open_window = !part.range.empty() && e_lo < part.hi.back();
        if (!open_window) {
            // Start the bin this class energy falls into; empty bins in
            // between are never materialized.
            const long idx = static_cast<long>(std::floor((e_lo - part.anchor) / delta));
            double lo = part.anchor + static_cast<double>(idx) * delta;
            // A previously moved edge may sit above the nominal grid line;
            // windows must tile without overlap.
            if (!part.hi.empty()) lo = std::max(lo, part.hi.back());
            part.lo.push_back(lo);
            part.hi.push_back(part.anchor + static_cast<double>(idx + 1) * delta);
            part.range.push_back({begin, end});
            part.edge_moved.push_back(0);
        } else {
            part.range.back().second = end;
        }

        if (e_hi >= part.hi.back()) {
            // The class straddles the top edge: move the edge just past the
            // class, halfway to the next distinct eigenvalue when one exists.
            double moved = e_hi + eps;
            if (ci + 1 < spec.classes.size()) {
                const double next = spec.energies[spec.classes[ci + 1].first];
                moved = std::min(e_hi + (next - e_hi) / 2.0, e_hi + delta / 2.0);
            }
            part.hi.back() = moved;
            part.edge_moved.back() = 1;
        }
    }

    // Contiguity audit: windows tile all levels in order.
    int expect = 0;
    for (int k = 0; k < part.count(); ++k) {
        if (part.range[k].first != expect)
            throw std::logic_error("window partition lost contiguity");
        expect = part.range[k].second;
    }
    if (expect != spec.dim()) throw std::logic_error("window partition dropped levels");
    return part;
}

Eigen::VectorXd window_weights(const Eigen::VectorXcd& c_energy, const WindowPartition& part) {
    Eigen::VectorXd q(part.count());
    for (int k = 0; k < part.count(); ++k)
        q[k] = c_energy.segment(part.range[k].first, part.dim(k)).squaredNorm();
    return q;
}

Eigen::VectorXd window_weights(const Eigen::VectorXd& diagonal, const WindowPartition& part) {
    Eigen::VectorXd q(part.count());
    for (int k = 0; k < part.count(); ++k)
        q[k] = diagonal.segment(part.range[k].first, part.dim(k)).sum();
    return q;
}

std::vector<std::pair<int, int>> classes_in_window(const Spectrum& spec, int begin, int end) {
    std::vector<std::pair<int, int>> out;
    for (const auto& [cb, ce] : spec.classes) {
        if (ce <= begin) continue;
        if (cb >= end) break;
        if (cb < begin || ce > end)
            throw BasisMismatchError("degeneracy class straddles a window boundary");
        out.emplace_back(cb, ce);
    }
    return out;
}

long count_states_in_window(const Spectrum& spec, double center, double half_width) {
    if (half_width < 0.0) throw std::invalid_argument("count_states_in_window: negative width");
    const double* begin = spec.energies.data();
    const double* end = begin + spec.energies.size();
    // Ascending energies: binary-search both edges of [center - w, center + w].
    const double* lo = std::lower_bound(begin, end, center - half_width);
    const double* hi = std::upper_bound(begin, end, center + half_width);
    return hi - lo;
}

SpectralAssumptionReport spectral_assumption_report(const Spectrum& spec, double delta,
                                                    int n_sites) {
    if (n_sites < 1) throw std::invalid_argument("spectral_assumption_report: n_sites < 1");
    SpectralAssumptionReport rep;
    const double e_max = spec.energies(spec.energies.size() - 1);
    const double mean = spec.energies.mean();
    const double root_n = std::sqrt(static_cast<double>(n_sites));

    for (double center = mean; center <= e_max; center += delta) {
        const long m_base = count_states_in_window(spec, center, delta);
        if (m_base == 0) continue;
        const int k_max = static_cast<int>(std::floor((e_max - center) / root_n));
        for (int k = 1; k <= k_max; ++k) {
            const long m_shift = count_states_in_window(spec, center + k * root_n, delta);
            const double ratio = static_cast<double>(k) * k * k * static_cast<double>(m_shift) /
                                 static_cast<double>(m_base);
            rep.decay_rows.push_back({center, k, m_base, m_shift, ratio});
            rep.decay_worst = std::max(rep.decay_worst, ratio);
        }
    }
    rep.decay_pass = rep.decay_worst <= 1.0;

    const WindowPartition part = partition_spectrum(spec, delta);
    const double median = spec.energies(spec.energies.size() / 2);
    for (int k = 0; k + 1 < part.count(); ++k) {
        if (part.hi[k + 1] > median) break;
        ++rep.monotone_pairs_checked;
        if (part.dim(k) > part.dim(k + 1)) {
            rep.monotone_violations.push_back({k, part.dim(k), part.dim(k + 1)});
        }
    }
    rep.monotone_pass = rep.monotone_violations.empty();
    return rep;
}

}  // namespace thermalab

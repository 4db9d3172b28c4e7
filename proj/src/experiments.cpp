#include "thermalab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "thermalab/cache.hpp"
#include "thermalab/csv.hpp"
#include "thermalab/dynamics.hpp"
#include "thermalab/equilibrium.hpp"
#include "thermalab/errors.hpp"
#include "thermalab/locality.hpp"
#include "thermalab/microcanonical.hpp"
#include "thermalab/parallel.hpp"
#include "thermalab/weingarten.hpp"

namespace thermalab {

namespace fs = std::filesystem;

namespace {

double median(std::vector<double> v) {
    if (v.empty()) throw InsufficientDataError("median of an empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

fs::path ensure_dir(const std::string& run_dir) {
    fs::path dir(run_dir);
    fs::create_directories(dir);
    return dir;
}

RunReport base_report(const char* command, const ExperimentConfig& cfg) {
    RunReport rep;
    rep.command = command;
    rep.config = config_to_json(cfg);
    rep.config_hash = config_hash(cfg);
    rep.master_seed = cfg.master_seed;
    rep.threads = cfg.threads;
    return rep;
}

// Save a table and register it as an artifact. Timing values never go into
// CSVs: tables must be byte-identical across reruns and thread counts.
void emit(RunReport& rep, const fs::path& dir, const std::string& name, const CsvTable& table) {
    const std::string file = name + ".csv";
    table.save(dir / file);
    rep.add_artifact(name, file);
}

TimeGrid build_grid(const TimeGridSpec& g) {
    return g.kind == "logspace" ? TimeGrid::logspace(g.t0, g.t1, g.n)
                                : TimeGrid::linspace(g.t0, g.t1, g.n);
}

// Keeps the total footprint of per-thread transient states bounded.
int cap_threads_by_memory(int threads, double bytes_per_thread, double budget = 2e9) {
    while (threads > 1 && bytes_per_thread * threads > budget) --threads;
    return threads;
}

}  // namespace

const SpectrumEntry& SpectrumProvider::get(const ModelSpec& model) {
    const std::string key = model_key(model);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    SpectrumEntry e;
    e.key = key;
    Stopwatch build_clock;
    e.ham = build_hamiltonian(model);
    e.build_seconds = build_clock.lap();

    fs::path file;
    bool loaded = false;
    if (cache_dir_) {
        file = cache_path(*cache_dir_, "spectrum", key);
        if (fs::exists(file)) {
            e.spec = load_spectrum_cache(file);
            if (e.spec.dim() != e.ham.matrix.rows())
                throw CacheCorruptError("cached spectrum dimension does not match the model");
            e.cache_hit = true;
            loaded = true;
        }
    }
    if (!loaded) {
        Stopwatch solve_clock;
        e.spec = diagonalize(e.ham.matrix);
        e.solve_seconds = solve_clock.lap();
        if (cache_dir_) {
            fs::create_directories(*cache_dir_);
            save_spectrum_cache(file, e.spec);
        }
    }
    return memo_.emplace(key, std::move(e)).first->second;
}

Workbench make_workbench(const ExperimentConfig& cfg, SpectrumProvider& prov) {
    Workbench wb;
    wb.entry = &prov.get(cfg.model);
    const Spectrum& spec = wb.entry->spec;

    wb.delta = resolve_delta(cfg.delta, spec, cfg.model.lattice);
    wb.part = partition_spectrum(spec, wb.delta);

    wb.c_comp = bloch_product_state(cfg.model.lattice, cfg.state.theta, cfg.state.phi);
    wb.c_energy = spec.vectors.adjoint() * wb.c_comp;
    wb.state_energy = spec.energies.dot(wb.c_energy.cwiseAbs2());

    double beta = cfg.beta.value;
    if (cfg.beta.mode == BetaPolicy::Mode::SolveFromState)
        beta = solve_beta(spec, wb.state_energy, 1e-10 * cfg.model.lattice.n_sites());
    wb.gibbs = gibbs_state(spec, beta);

    wb.a_comp = embed_observable(pauli(cfg.observable.pauli), Region{cfg.observable.site},
                                 cfg.model.lattice);
    wb.a_energy = spec.vectors.adjoint() * wb.a_comp * spec.vectors;
    return wb;
}

ThermalizationResult run_thermalization_experiment(const ExperimentConfig& cfg,
                                                   SpectrumProvider& prov) {
    ThermalizationResult out;
    for (int side : cfg.sweep.sizes) {
        ExperimentConfig sized = cfg;
        sized.model.lattice.side = side;
        sized.model.lattice.validate();
        const Workbench wb = make_workbench(sized, prov);
        const Spectrum& spec = wb.entry->spec;
        const LatticeSpec& lattice = sized.model.lattice;

        ThermalizationSizeResult r;
        r.side = side;
        r.n_sites = lattice.n_sites();
        r.dim = spec.dim();
        r.delta = wb.delta;
        r.beta = wb.gibbs.beta;
        r.state_energy = wb.state_energy;
        r.n_windows = wb.part.count();
        r.min_window_dim = wb.part.min_dim();
        r.spectrum_seconds = wb.entry->solve_seconds;

        const FactoredDensity fg = gibbs_factored(wb.gibbs, spec);
        const int n = cfg.n_samples;
        const int threads = cap_threads_by_memory(
            cfg.threads,
            16.0 * static_cast<double>(spec.dim()) * static_cast<double>(spec.classes.size()));

        std::map<int, std::vector<double>> dl;
        for (int l : cfg.l_list) dl[l].assign(n, 0.0);
        parallel_for(n, threads, [&](int s) {
            const BlockUnitary u =
                sample_block_unitary(wb.part, cfg.master_seed, static_cast<std::uint64_t>(s));
            const FactoredDensity feq = equilibrium_factored(wb.c_energy, u, spec);
            for (int l : cfg.l_list)
                dl.at(l)[s] = local_distinguishability(feq, fg, l, lattice, 1).value;
        });

        const double delta_big = cfg.delta_big_multiple * wb.part.nominal_width;
        const auto deficits = entropy_deficit_samples(wb.c_energy, wb.part, spec, wb.state_energy,
                                                      delta_big, cfg.master_seed, n, threads);
        for (const auto& d : deficits) {
            r.eta_bits.push_back(d.eta_bits);
            r.p_delta.push_back(d.p_delta);
        }

        r.dl_samples = std::move(dl);
        for (int l : cfg.l_list) r.median_dl[l] = median(r.dl_samples.at(l));
        r.median_eta_bits = median(r.eta_bits);
        r.median_p_delta = median(r.p_delta);
        out.sizes.push_back(std::move(r));
    }
    return out;
}

GibbsInvarianceResult run_gibbs_invariance_experiment(const ExperimentConfig& cfg,
                                                      SpectrumProvider& prov) {
    const Workbench wb = make_workbench(cfg, prov);
    const Spectrum& spec = wb.entry->spec;
    const LatticeSpec& lattice = cfg.model.lattice;

    GibbsInvarianceResult out;
    out.n_sites = lattice.n_sites();
    out.dim = spec.dim();
    out.beta = wb.gibbs.beta;
    out.delta = wb.delta;
    out.n_windows = wb.part.count();

    const FactoredDensity fg = gibbs_factored(wb.gibbs, spec);
    // Maximal smoothing: one window spanning the whole spectrum.
    const double span = spec.energies(spec.dim() - 1) - spec.energies(0);
    const WindowPartition single = partition_spectrum(spec, span + 1.0);

    const int n = cfg.n_samples;
    const int threads = cap_threads_by_memory(
        cfg.threads,
        2.0 * 16.0 * static_cast<double>(spec.dim()) * static_cast<double>(spec.dim()));

    for (int l : cfg.l_list) {
        out.dl_windowed[l].assign(n, 0.0);
        out.dl_reference[l].assign(n, 0.0);
    }
    const std::uint64_t ref_seed = stream_seed(cfg.master_seed, 0x9E, 1);
    parallel_for(n, threads, [&](int s) {
        const BlockUnitary u =
            sample_block_unitary(wb.part, cfg.master_seed, static_cast<std::uint64_t>(s));
        const FactoredDensity rotated = rotated_gibbs_factored(wb.gibbs, spec, u);
        const BlockUnitary u_ref =
            sample_block_unitary(single, ref_seed, static_cast<std::uint64_t>(s));
        const FactoredDensity rotated_ref = rotated_gibbs_factored(wb.gibbs, spec, u_ref);
        for (int l : cfg.l_list) {
            out.dl_windowed.at(l)[s] = local_distinguishability(rotated, fg, l, lattice, 1).value;
            out.dl_reference.at(l)[s] =
                local_distinguishability(rotated_ref, fg, l, lattice, 1).value;
        }
    });

    for (int l : cfg.l_list) {
        out.median_windowed[l] = median(out.dl_windowed.at(l));
        out.median_reference[l] = median(out.dl_reference.at(l));
    }
    const int l0 = cfg.l_list.front();
    out.ratio_l_first = out.median_reference.at(l0) > 0.0
                            ? out.median_windowed.at(l0) / out.median_reference.at(l0)
                            : 0.0;
    return out;
}

RunReport run_spectrum_command(const ExperimentConfig& cfg, SpectrumProvider& prov,
                               const std::string& run_dir) {
    const fs::path dir = ensure_dir(run_dir);
    RunReport rep = base_report("spectrum", cfg);
    Stopwatch total;

    const Workbench wb = make_workbench(cfg, prov);
    const Spectrum& spec = wb.entry->spec;
    rep.add_timing("hamiltonian_build", wb.entry->build_seconds);
    rep.add_timing("eigensolver", wb.entry->solve_seconds);

    std::vector<int> class_id(spec.dim());
    for (std::size_t c = 0; c < spec.classes.size(); ++c)
        for (int i = spec.classes[c].first; i < spec.classes[c].second; ++i)
            class_id[i] = static_cast<int>(c);

    CsvTable levels({"nu", "energy", "class_id"});
    for (long nu = 0; nu < spec.dim(); ++nu)
        levels.add_row({csv_int(nu), csv_num(spec.energies(nu)), csv_int(class_id[nu])});
    emit(rep, dir, "levels", levels);

    CsvTable wins({"k", "lo", "hi", "begin", "end", "dim", "width", "edge_moved"});
    for (int k = 0; k < wb.part.count(); ++k)
        wins.add_row({csv_int(k), csv_num(wb.part.lo[k]), csv_num(wb.part.hi[k]),
                      csv_int(wb.part.range[k].first), csv_int(wb.part.range[k].second),
                      csv_int(wb.part.dim(k)), csv_num(wb.part.width(k)),
                      csv_int(wb.part.edge_moved[k] ? 1 : 0)});
    emit(rep, dir, "windows", wins);

    rep.add_metric("dim", static_cast<double>(spec.dim()), "dimensionless");
    rep.add_metric("n_sites", cfg.model.lattice.n_sites(), "dimensionless");
    rep.add_metric("n_classes", static_cast<double>(spec.classes.size()), "dimensionless");
    rep.add_metric("n_windows", wb.part.count(), "dimensionless");
    rep.add_metric("min_window_dim", wb.part.min_dim(), "dimensionless");
    rep.add_metric("delta", wb.delta, "energy");
    rep.add_metric("max_window_width", wb.part.max_width(), "energy");
    rep.add_metric("e_min", spec.energies(0), "energy");
    rep.add_metric("e_max", spec.energies(spec.dim() - 1), "energy");
    rep.add_metric("eigen_residual", spec.max_residual, "dimensionless");
    rep.add_metric("ortho_residual", spec.ortho_residual, "dimensionless");
    rep.add_metric("hermiticity_residual", wb.entry->ham.hermiticity, "dimensionless");
    rep.add_metric("state_energy", wb.state_energy, "energy");
    rep.diagnostics["cache_hit"] = wb.entry->cache_hit;
    rep.diagnostics["spectrum_key"] = wb.entry->key;

    rep.add_timing("total", total.elapsed());
    rep.save(run_dir);
    return rep;
}

RunReport run_sample_command(const ExperimentConfig& cfg, SpectrumProvider& prov,
                             const std::string& run_dir) {
    const fs::path dir = ensure_dir(run_dir);
    RunReport rep = base_report("sample", cfg);
    Stopwatch total;

    const Workbench wb = make_workbench(cfg, prov);
    const Spectrum& spec = wb.entry->spec;
    const int n = cfg.n_samples;
    const double bound = wb.part.max_width();

    Eigen::VectorXd residual(n), norm_diff(n), shift(n);
    parallel_for(n, cfg.threads, [&](int s) {
        const BlockUnitary u =
            sample_block_unitary(wb.part, cfg.master_seed, static_cast<std::uint64_t>(s));
        residual(s) = unitarity_residual(u);
        norm_diff(s) = conjugate_hamiltonian(spec, u).op_norm_diff;
        double e_rot = 0.0;
        for (int k = 0; k < u.count(); ++k) {
            const auto [b, e] = u.range[k];
            const Eigen::VectorXcd a = u.blocks[k].adjoint() * wb.c_energy.segment(b, e - b);
            e_rot += spec.energies.segment(b, e - b).dot(a.cwiseAbs2());
        }
        shift(s) = e_rot - wb.state_energy;
    });

    CsvTable t({"sample", "unitarity_residual", "op_norm_diff", "bound", "within_bound",
                "energy_shift"});
    bool all_within = true;
    for (int s = 0; s < n; ++s) {
        const bool ok = norm_diff(s) <= bound + 1e-9 && std::abs(shift(s)) <= bound + 1e-9;
        all_within = all_within && ok;
        t.add_row({csv_int(s), csv_num(residual(s)), csv_num(norm_diff(s)), csv_num(bound),
                   csv_int(ok ? 1 : 0), csv_num(shift(s))});
    }
    emit(rep, dir, "samples", t);

    rep.add_metric("max_unitarity_residual", residual.maxCoeff(), "dimensionless");
    rep.add_metric("max_op_norm_diff", norm_diff.maxCoeff(), "energy");
    rep.add_metric("norm_bound", bound, "energy");
    rep.add_metric("max_abs_energy_shift", shift.cwiseAbs().maxCoeff(), "energy");
    rep.add_metric("all_within_bound", all_within ? 1.0 : 0.0, "dimensionless");
    rep.add_metric("n_samples", n, "dimensionless");

    rep.add_timing("total", total.elapsed());
    rep.save(run_dir);
    return rep;
}

RunReport run_equilibrium_command(const ExperimentConfig& cfg, SpectrumProvider& prov,
                                  const std::string& run_dir) {
    const fs::path dir = ensure_dir(run_dir);
    RunReport rep = base_report("equilibrium", cfg);
    Stopwatch total;

    const Workbench wb = make_workbench(cfg, prov);
    const Spectrum& spec = wb.entry->spec;
    const long dim = spec.dim();
    const int n = cfg.n_samples;

    // Monte-Carlo mean of the equilibrium state against the closed-form
    // ensemble average, entrywise in standard-error units. Accumulation is
    // serial in sample order, so thread count cannot perturb the sums.
    Stopwatch clock;
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXd sumsq_re = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd sumsq_im = Eigen::MatrixXd::Zero(dim, dim);
    for (int s = 0; s < n; ++s) {
        const BlockUnitary u =
            sample_block_unitary(wb.part, cfg.master_seed, static_cast<std::uint64_t>(s));
        const Eigen::MatrixXcd rho = equilibrium_state(wb.c_energy, u, spec).mat;
        sum += rho;
        sumsq_re += rho.real().cwiseProduct(rho.real());
        sumsq_im += rho.imag().cwiseProduct(rho.imag());
    }
    const Eigen::MatrixXcd mc_mean = sum / static_cast<double>(n);
    const Eigen::MatrixXcd analytic = ensemble_average_equilibrium(wb.c_energy, wb.part, spec).mat;

    double worst_sigma = 0.0;
    double max_abs_dev = 0.0;
    long entries_beyond_4se = 0;
    for (long j = 0; j < dim; ++j) {
        for (long i = 0; i < dim; ++i) {
            for (int reim = 0; reim < 2; ++reim) {
                const double m = reim == 0 ? mc_mean(i, j).real() : mc_mean(i, j).imag();
                const double a = reim == 0 ? analytic(i, j).real() : analytic(i, j).imag();
                const double sq = reim == 0 ? sumsq_re(i, j) : sumsq_im(i, j);
                const double var = std::max(0.0, (sq - n * m * m) / (n - 1.0));
                const double se = std::sqrt(var / n);
                const double dev = std::abs(m - a);
                max_abs_dev = std::max(max_abs_dev, dev);
                const double sigma = std::max(0.0, dev - 1e-12) / std::max(se, 1e-15);
                worst_sigma = std::max(worst_sigma, sigma);
                if (sigma > 4.0) ++entries_beyond_4se;
            }
        }
    }
    rep.add_timing("ensemble_mean", clock.lap());

    // Purity of the dephased state: sampled vs analytic.
    const ParticipationStats ps = participation_statistics(
        wb.c_energy, wb.part, spec, stream_seed(cfg.master_seed, 0xB2, 0), std::max(2, n),
        cfg.threads);
    rep.add_timing("purity", clock.lap());
    CsvTable purity({"sample", "purity"});
    for (int s = 0; s < ps.purity_samples.size(); ++s)
        purity.add_row({csv_int(s), csv_num(ps.purity_samples(s))});
    emit(rep, dir, "purity", purity);

    // Entropy deficit samples and the tail-fraction table.
    const double delta_big = cfg.delta_big_multiple * wb.part.nominal_width;
    const auto deficits =
        entropy_deficit_samples(wb.c_energy, wb.part, spec, wb.state_energy, delta_big,
                                stream_seed(cfg.master_seed, 0xB3, 0), n, cfg.threads);
    rep.add_timing("entropy_deficit", clock.lap());
    CsvTable deficit({"sample", "eta_bits", "eta_nats", "p_delta"});
    std::vector<double> etas;
    for (int s = 0; s < n; ++s) {
        etas.push_back(deficits[s].eta_bits);
        deficit.add_row({csv_int(s), csv_num(deficits[s].eta_bits), csv_num(deficits[s].eta_nats),
                         csv_num(deficits[s].p_delta)});
    }
    emit(rep, dir, "deficit", deficit);

    CsvTable lemma({"r_bits", "fraction", "bound", "binomial_se", "within_3se"});
    bool lemma_ok = true;
    for (int r : {2, 4, 6}) {
        long count = 0;
        for (const auto& d : deficits)
            if (d.eta_bits > r) ++count;
        const double f = static_cast<double>(count) / n;
        const double b = std::pow(2.0, 1 - r);
        const double se = std::sqrt(std::max(0.0, f * (1.0 - f)) / n);
        const bool ok = f <= b + 3.0 * se;
        lemma_ok = lemma_ok && ok;
        lemma.add_row({csv_int(r), csv_num(f), csv_num(b), csv_num(se), csv_int(ok ? 1 : 0)});
    }
    emit(rep, dir, "lemma_tail", lemma);

    // Per-window twirl diagnostics.
    const Eigen::VectorXd q = window_weights(wb.c_energy, wb.part);
    CsvTable winq({"k", "dim", "q", "twirl_a", "twirl_b", "avg_f"});
    for (int k = 0; k < wb.part.count(); ++k) {
        const auto [ca, cb] = window_twirl_coefficients(wb.part, spec, k);
        winq.add_row({csv_int(k), csv_int(wb.part.dim(k)), csv_num(q(k)), csv_num(ca), csv_num(cb),
                      csv_num(average_f(spec, wb.part, k))});
    }
    emit(rep, dir, "window_weights", winq);

    rep.add_metric("mean_worst_sigma", worst_sigma, "dimensionless");
    rep.add_metric("mean_max_abs_dev", max_abs_dev, "dimensionless");
    rep.add_metric("mean_entries_beyond_4se", static_cast<double>(entries_beyond_4se),
                   "dimensionless");
    rep.add_metric("purity_mc", ps.mean, "dimensionless");
    rep.add_metric("purity_mc_se", ps.std_error, "dimensionless");
    rep.add_metric("purity_analytic", ps.analytic, "dimensionless");
    rep.add_metric("purity_analytic_draft", ps.analytic_draft, "dimensionless");
    rep.add_metric("median_eta_bits", median(etas), "bits");
    rep.add_metric("lemma_tail_ok", lemma_ok ? 1.0 : 0.0, "dimensionless");
    rep.add_metric("p_delta", deficits.front().p_delta, "dimensionless");
    rep.add_metric("delta_big", delta_big, "energy");

    rep.add_timing("total", total.elapsed());
    rep.save(run_dir);
    return rep;
}

RunReport run_thermality_command(const ExperimentConfig& cfg, SpectrumProvider& prov,
                                 const std::string& run_dir) {
    const fs::path dir = ensure_dir(run_dir);
    RunReport rep = base_report("thermality", cfg);
    Stopwatch total;

    const Workbench wb = make_workbench(cfg, prov);
    const Spectrum& spec = wb.entry->spec;
    const LatticeSpec& lattice = cfg.model.lattice;
    const GibbsState& g = wb.gibbs;

    const BerryEsseen be = berry_esseen_error(spec.energies, g.weights);

    double xi = cfg.xi.value;
    std::string xi_source = "manual";
    const Eigen::MatrixXcd rho_gibbs_comp =
        spec.vectors * g.weights.asDiagonal() * spec.vectors.adjoint();
    if (cfg.xi.mode == XiPolicy::Mode::Fit) {
        const CorrelationFit fit =
            fit_correlation_length(rho_gibbs_comp, lattice, cfg.xi.probe, cfg.xi.distances);
        xi = fit.xi;
        xi_source = "fit";
        CsvTable corr({"distance", "abs_connected_correlator"});
        for (const auto& [d, v] : fit.points) corr.add_row({csv_int(d), csv_num(v)});
        emit(rep, dir, "correlators", corr);
        rep.add_metric("xi_fit_residual_rms", fit.residual_rms, "dimensionless");
        rep.add_metric("z_amp", fit.z_amp, "dimensionless");
    }

    // tau: the dephased initial state.
    const Eigen::MatrixXcd rho_e = wb.c_energy * wb.c_energy.adjoint();
    const DensityMatrix tau = dephase(DensityMatrix{rho_e, Basis::Energy}, spec);
    ConditionReport cr = check_indistinguishability_condition(
        tau, g, spec, cfg.condition.epsilon, cfg.condition.l, xi, cfg.condition.z, lattice);
    cr.xi_source = xi_source;

    // Dual-route relative entropy consistency on a full-rank diagonal state.
    const DensityMatrix ref = gme_state(wb.part, window_weights(g.weights, wb.part), spec.dim());
    const double rel_a = relative_entropy_vs_gibbs(ref, g, spec);
    const double rel_b = relative_entropy_direct(ref, g, spec);

    CsvTable summary({"beta", "zeta", "zeta_at_energy", "xi", "s_rel_bits", "condition_lhs",
                      "condition_rhs", "condition_satisfied", "guaranteed_bound"});
    summary.add_row({csv_num(g.beta), csv_num(be.zeta), csv_num(be.at_energy), csv_num(xi),
                     csv_num(cr.s_rel_bits), csv_num(cr.lhs), csv_num(cr.rhs),
                     csv_int(cr.satisfied ? 1 : 0), csv_num(cr.guaranteed_bound)});
    emit(rep, dir, "summary", summary);

    rep.add_metric("beta", g.beta, "inverse_energy");
    rep.add_metric("state_energy", wb.state_energy, "energy");
    rep.add_metric("gibbs_mean_energy", g.mean_energy, "energy");
    rep.add_metric("gibbs_energy_variance", g.variance, "energy_squared");
    rep.add_metric("ln_z", g.ln_z, "dimensionless");
    rep.add_metric("zeta", be.zeta, "dimensionless");
    rep.add_metric("zeta_at_energy", be.at_energy, "energy");
    rep.add_metric("xi", xi, "sites");
    rep.add_metric("s_rel_bits", cr.s_rel_bits, "bits");
    rep.add_metric("condition_lhs", cr.lhs, "dimensionless");
    rep.add_metric("condition_rhs", cr.rhs, "dimensionless");
    rep.add_metric("condition_satisfied", cr.satisfied ? 1.0 : 0.0, "dimensionless");
    rep.add_metric("guaranteed_bound", cr.guaranteed_bound, "dimensionless");
    rep.add_metric("rel_entropy_route_shifted", rel_a, "nats");
    rep.add_metric("rel_entropy_route_direct", rel_b, "nats");
    rep.add_metric("rel_entropy_route_gap", std::abs(rel_a - rel_b), "nats");
    rep.diagnostics["xi_source"] = xi_source;

    if (lattice.boundary == Boundary::Periodic && lattice.n_sites() >= 2) {
        const Eigen::MatrixXcd t_op = translation_operator(lattice, 0);
        std::vector<int> c0 = lattice.coords(0);
        c0[0] = (c0[0] + 1) % lattice.side;
        const Region x{0}, y{lattice.site(c0)};
        const TranslationGap tg =
            translation_gap(rho_gibbs_comp, pauli(cfg.observable.pauli), x, y, lattice, spec, t_op);
        rep.add_metric("translation_gap", tg.gap, "dimensionless");
        rep.add_metric("translation_min_invariance", tg.min_invariance, "dimensionless");
    }

    rep.add_timing("total", total.elapsed());
    rep.save(run_dir);
    return rep;
}

RunReport run_dynamics_command(const ExperimentConfig& cfg, SpectrumProvider& prov,
                               const std::string& run_dir) {
    const fs::path dir = ensure_dir(run_dir);
    RunReport rep = base_report("dynamics", cfg);
    Stopwatch total;

    const Workbench wb = make_workbench(cfg, prov);
    const Spectrum& spec = wb.entry->spec;
    const TimeGrid grid = build_grid(cfg.time_grid);
    Stopwatch clock;

    const Eigen::VectorXd exact = evolve_expectation(wb.c_energy, spec, wb.a_energy, grid);
    const ExpectedDynamics ed = expected_dynamics(wb.c_energy, wb.a_energy, spec, wb.part, grid);
    const DynamicsConcentration mc = mc_dynamics_concentration(
        wb.c_energy, wb.a_energy, spec, wb.part, grid, cfg.n_samples, cfg.master_seed, cfg.threads);
    rep.add_timing("series", clock.lap());

    CsvTable series({"t", "exact", "expected", "mc_mean", "mc_variance"});
    for (std::size_t i = 0; i < grid.times.size(); ++i)
        series.add_row({csv_num(grid.times[i]), csv_num(exact(i)), csv_num(ed.series(i)),
                        csv_num(mc.mean(i)), csv_num(mc.variance(i))});
    emit(rep, dir, "series", series);

    const WindowDynamics wd = window_dynamics(spec, wb.part, grid);
    const ConstantDosComparison cd = constant_dos_comparison(spec, wb.part, wd);
    const double a_norm = operator_norm(wb.a_comp);
    const RelaxationBound rb = relaxation_bound(wd, a_norm);
    rep.add_timing("window_functions", clock.lap());

    CsvTable wdyn({"k", "t", "re_phi", "im_phi", "abs_phi", "f", "abs_phi_flat", "flat_abs_error",
                   "flat_error_bound"});
    for (int k = 0; k < wb.part.count(); ++k)
        for (std::size_t i = 0; i < grid.times.size(); ++i)
            wdyn.add_row({csv_int(k), csv_num(grid.times[i]), csv_num(wd.phi(k, i).real()),
                          csv_num(wd.phi(k, i).imag()), csv_num(std::abs(wd.phi(k, i))),
                          csv_num(wd.f(k, i)), csv_num(std::abs(cd.phi_flat(k, i))),
                          csv_num(cd.abs_error(k, i)),
                          csv_num(grid.times[i] * cd.max_spacing(k))});
    emit(rep, dir, "window_dynamics", wdyn);

    CsvTable relax({"t", "r", "r_flat"});
    for (std::size_t i = 0; i < grid.times.size(); ++i)
        relax.add_row({csv_num(grid.times[i]), csv_num(rb.r(i)), csv_num(rb.r_flat(i))});
    emit(rep, dir, "relaxation", relax);

    const LongTimeAverage lta =
        long_time_average(wb.c_energy, spec, wb.a_energy, grid.times.back(), 2001);
    rep.add_metric("long_time_average", lta.average, "dimensionless");
    rep.add_metric("long_time_dephased_value", lta.dephased_value, "dimensionless");
    rep.add_metric("long_time_gap", lta.gap, "dimensionless");

    if (spec.dim() <= 1024) {
        const BlockUnitary u0 = sample_block_unitary(wb.part, cfg.master_seed, 0);
        const ConjugatedHamiltonian ch = conjugate_hamiltonian(spec, u0);
        const Eigen::MatrixXcd rho0 = wb.c_comp * wb.c_comp.adjoint();
        const DistanceBoundSeries db =
            dynamics_distance_bound(rho0, wb.entry->ham.matrix, ch.matrix, grid);
        CsvTable dist({"t", "trace_distance", "bound"});
        for (std::size_t i = 0; i < grid.times.size(); ++i)
            dist.add_row(
                {csv_num(grid.times[i]), csv_num(db.distance(i)), csv_num(db.bound(i))});
        emit(rep, dir, "distance_bound", dist);
        rep.add_metric("distance_bound_max_violation", db.max_violation, "dimensionless");
        rep.add_metric("op_norm_diff", ch.op_norm_diff, "energy");
        rep.add_timing("distance_bound", clock.lap());
    } else {
        rep.diagnostics["distance_bound"] = "skipped: dimension above 1024";
    }

    rep.add_metric("initial_value", ed.initial_value, "dimensionless");
    rep.add_metric("equilibrium_value", ed.equilibrium_value, "dimensionless");
    rep.add_metric("infinite_time_value", ed.infinite_time_value, "dimensionless");
    if (!grid.times.empty() && grid.times.front() == 0.0)
        rep.add_metric("t0_gap", std::abs(exact(0) - ed.initial_value), "dimensionless");
    rep.add_metric("a_norm", a_norm, "dimensionless");
    rep.add_metric("min_window_dim", mc.min_window_dim, "dimensionless");
    rep.add_metric("mc_max_variance", mc.variance.maxCoeff(), "dimensionless");
    rep.add_metric("levy_reference_eps_0p1", levy_reference(0.1, mc.min_window_dim, a_norm),
                   "dimensionless");

    rep.add_timing("total", total.elapsed());
    rep.save(run_dir);
    return rep;
}

RunReport run_moments_command(const ExperimentConfig& cfg, SpectrumProvider& prov,
                              const std::string& run_dir) {
    const fs::path dir = ensure_dir(run_dir);
    RunReport rep = base_report("moments", cfg);
    Stopwatch total;

    CsvTable gram({"degree", "d", "gram_residual"});
    double gram_worst = 0.0;
    for (int d = 2; d <= 8; ++d) {
        const double r2 = weingarten_gram_residual(2, d);
        gram_worst = std::max(gram_worst, r2);
        gram.add_row({csv_int(2), csv_int(d), csv_num(r2)});
    }
    for (int d = 3; d <= 8; ++d) {
        const double r3 = weingarten_gram_residual(3, d);
        gram_worst = std::max(gram_worst, r3);
        gram.add_row({csv_int(3), csv_int(d), csv_num(r3)});
    }
    emit(rep, dir, "gram", gram);

    CsvTable haar({"d", "first_moment_max_se", "second_mc", "second_analytic", "second_dev_se"});
    double haar_worst = 0.0;
    const int n_haar = std::max(1000, cfg.n_samples);
    for (int d : {2, 4, 8}) {
        const HaarMomentReport h =
            haar_moment_verify(d, n_haar, stream_seed(cfg.master_seed, 0xC0, d));
        haar_worst = std::max({haar_worst, h.first_moment_max_se, h.second_moment_dev_se});
        haar.add_row({csv_int(d), csv_num(h.first_moment_max_se), csv_num(h.second_moment_mc),
                      csv_num(h.second_moment_analytic), csv_num(h.second_moment_dev_se)});
    }
    emit(rep, dir, "haar_moments", haar);

    const Workbench wb = make_workbench(cfg, prov);
    const Spectrum& spec = wb.entry->spec;
    CsvTable sm({"label", "delta", "min_window_dim", "mean", "variance", "variance_times_dmin"});
    double var_fine = 0.0, var_coarse = 0.0;
    int dmin_fine = 0, dmin_coarse = 0;
    for (int pass = 0; pass < 2; ++pass) {
        const WindowPartition part =
            pass == 0 ? wb.part : partition_spectrum(spec, 2.0 * wb.delta);
        const SecondMomentReport r = equilibrium_second_moment_check(
            wb.c_energy, wb.a_energy, part, spec, stream_seed(cfg.master_seed, 0xC1, pass),
            cfg.n_samples, cfg.threads);
        if (pass == 0) {
            var_fine = r.variance;
            dmin_fine = r.min_window_dim;
        } else {
            var_coarse = r.variance;
            dmin_coarse = r.min_window_dim;
        }
        sm.add_row({pass == 0 ? "fine" : "coarse", csv_num(pass == 0 ? wb.delta : 2.0 * wb.delta),
                    csv_int(r.min_window_dim), csv_num(r.mean), csv_num(r.variance),
                    csv_num(r.variance_times_dmin)});
    }
    emit(rep, dir, "second_moment", sm);

    rep.add_metric("gram_worst_residual", gram_worst, "dimensionless");
    rep.add_metric("haar_worst_dev_se", haar_worst, "dimensionless");
    rep.add_metric("second_moment_var_fine", var_fine, "dimensionless");
    rep.add_metric("second_moment_var_coarse", var_coarse, "dimensionless");
    rep.add_metric("second_moment_dmin_fine", dmin_fine, "dimensionless");
    rep.add_metric("second_moment_dmin_coarse", dmin_coarse, "dimensionless");

    rep.add_timing("total", total.elapsed());
    rep.save(run_dir);
    return rep;
}

RunReport run_check_assumptions_command(const ExperimentConfig& cfg, SpectrumProvider& prov,
                                        const std::string& run_dir) {
    const fs::path dir = ensure_dir(run_dir);
    RunReport rep = base_report("check-assumptions", cfg);
    Stopwatch total;

    const Workbench wb = make_workbench(cfg, prov);
    const Spectrum& spec = wb.entry->spec;
    const int n_sites = cfg.model.lattice.n_sites();

    const SpectralAssumptionReport sar = spectral_assumption_report(spec, wb.delta, n_sites);
    CsvTable decay({"center", "k", "m_base", "m_shifted", "ratio"});
    for (const auto& row : sar.decay_rows)
        decay.add_row({csv_num(row.center), csv_int(row.k), csv_int(row.m_base),
                       csv_int(row.m_shifted), csv_num(row.ratio)});
    emit(rep, dir, "decay", decay);

    CsvTable mono({"window", "dim_lo", "dim_hi"});
    for (const auto& v : sar.monotone_violations)
        mono.add_row({csv_int(v.window), csv_int(v.dim_lo), csv_int(v.dim_hi)});
    emit(rep, dir, "monotone_violations", mono);

    // Upper energy tails of the initial state against the sub-Gaussian
    // product-state reference; width heuristic: spectral span per sqrt-site.
    const Eigen::VectorXd w = wb.c_energy.cwiseAbs2();
    const double e_sq = spec.energies.cwiseAbs2().dot(w);
    const double sigma_state =
        std::sqrt(std::max(0.0, e_sq - wb.state_energy * wb.state_energy));
    std::vector<double> thresholds;
    for (double j : {0.5, 1.0, 1.5, 2.0})
        thresholds.push_back(wb.state_energy + j * sigma_state);
    const double span = spec.energies(spec.dim() - 1) - spec.energies(0);
    const double width_scale = span / (2.0 * std::sqrt(static_cast<double>(n_sites)));
    const auto tails = energy_tail_report(w, spec, thresholds, wb.state_energy / n_sites,
                                          width_scale, n_sites);
    CsvTable tail({"threshold", "tail_weight", "eta", "bound", "exceeds_bound"});
    bool any_exceeds = false;
    for (const auto& row : tails) {
        any_exceeds = any_exceeds || row.exceeds_bound;
        tail.add_row({csv_num(row.threshold), csv_num(row.tail_weight), csv_num(row.eta),
                      csv_num(row.bound), csv_int(row.exceeds_bound ? 1 : 0)});
    }
    emit(rep, dir, "tails", tail);

    rep.add_metric("decay_worst", sar.decay_worst, "dimensionless");
    rep.add_metric("decay_pass", sar.decay_pass ? 1.0 : 0.0, "dimensionless");
    rep.add_metric("decay_rows", static_cast<double>(sar.decay_rows.size()), "dimensionless");
    rep.add_metric("monotone_pairs_checked", sar.monotone_pairs_checked, "dimensionless");
    rep.add_metric("monotone_pass", sar.monotone_pass ? 1.0 : 0.0, "dimensionless");
    rep.add_metric("monotone_violations", static_cast<double>(sar.monotone_violations.size()),
                   "dimensionless");
    rep.add_metric("tail_any_exceeds", any_exceeds ? 1.0 : 0.0, "dimensionless");
    rep.add_metric("tail_width_scale", width_scale, "energy");

    rep.add_timing("total", total.elapsed());
    rep.save(run_dir);
    return rep;
}

RunReport run_sweep_command(const ExperimentConfig& cfg, SpectrumProvider& prov,
                            const std::string& run_dir) {
    const fs::path dir = ensure_dir(run_dir);
    RunReport rep = base_report("sweep", cfg);
    Stopwatch total;

    if (cfg.sweep.mode == "thermalization") {
        const ThermalizationResult res = run_thermalization_experiment(cfg, prov);

        CsvTable scaling({"side", "n_sites", "dim", "delta", "beta", "n_windows",
                          "min_window_dim", "l", "median_dl", "median_eta_bits",
                          "median_p_delta"});
        CsvTable samples({"side", "sample", "l", "dl", "eta_bits", "p_delta"});
        for (const auto& r : res.sizes) {
            rep.add_timing("eigensolver_side_" + std::to_string(r.side), r.spectrum_seconds);
            for (int l : cfg.l_list) {
                scaling.add_row({csv_int(r.side), csv_int(r.n_sites), csv_int(r.dim),
                                 csv_num(r.delta), csv_num(r.beta), csv_int(r.n_windows),
                                 csv_int(r.min_window_dim), csv_int(l),
                                 csv_num(r.median_dl.at(l)), csv_num(r.median_eta_bits),
                                 csv_num(r.median_p_delta)});
                for (int s = 0; s < cfg.n_samples; ++s)
                    samples.add_row({csv_int(r.side), csv_int(s), csv_int(l),
                                     csv_num(r.dl_samples.at(l)[s]), csv_num(r.eta_bits[s]),
                                     csv_num(r.p_delta[s])});
            }
        }
        emit(rep, dir, "scaling", scaling);
        emit(rep, dir, "samples", samples);

        const int l0 = cfg.l_list.front();
        bool monotone = true;
        for (std::size_t i = 1; i < res.sizes.size(); ++i)
            monotone =
                monotone && res.sizes[i].median_dl.at(l0) <= res.sizes[i - 1].median_dl.at(l0);
        rep.add_metric("median_dl_first_size", res.sizes.front().median_dl.at(l0),
                       "dimensionless");
        rep.add_metric("median_dl_last_size", res.sizes.back().median_dl.at(l0), "dimensionless");
        rep.add_metric("trend_monotone_nonincreasing", monotone ? 1.0 : 0.0, "dimensionless");
        rep.add_metric("ratio_last_to_first",
                       res.sizes.front().median_dl.at(l0) > 0.0
                           ? res.sizes.back().median_dl.at(l0) /
                                 res.sizes.front().median_dl.at(l0)
                           : 0.0,
                       "dimensionless");
    } else {
        const GibbsInvarianceResult res = run_gibbs_invariance_experiment(cfg, prov);

        CsvTable tbl({"sample", "l", "dl_windowed", "dl_reference"});
        for (int l : cfg.l_list)
            for (int s = 0; s < cfg.n_samples; ++s)
                tbl.add_row({csv_int(s), csv_int(l), csv_num(res.dl_windowed.at(l)[s]),
                             csv_num(res.dl_reference.at(l)[s])});
        emit(rep, dir, "gibbs_invariance", tbl);

        const int l0 = cfg.l_list.front();
        rep.add_metric("beta", res.beta, "inverse_energy");
        rep.add_metric("delta", res.delta, "energy");
        rep.add_metric("n_windows", res.n_windows, "dimensionless");
        rep.add_metric("median_windowed", res.median_windowed.at(l0), "dimensionless");
        rep.add_metric("median_reference", res.median_reference.at(l0), "dimensionless");
        rep.add_metric("ratio_windowed_to_reference", res.ratio_l_first, "dimensionless");
    }

    rep.add_timing("total", total.elapsed());
    rep.save(run_dir);
    return rep;
}

}  // namespace thermalab

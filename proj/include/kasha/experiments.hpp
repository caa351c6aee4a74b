// experiments.hpp — Named end-to-end experiments: each resolves its
// configuration (writing every defaulted value back), runs, and emits CSV
// data plus a metadata sidecar that is itself a valid config for re-running.

#pragma once

#include <filesystem>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kasha/band.hpp"
#include "kasha/catalog.hpp"
#include "kasha/config.hpp"
#include "kasha/csv.hpp"
#include "kasha/disorder.hpp"
#include "kasha/expfit.hpp"
#include "kasha/green.hpp"
#include "kasha/mcwf.hpp"
#include "kasha/rates.hpp"

namespace kasha {

inline constexpr const char* version_string = "0.1.0";

inline std::vector<std::string> experiment_names() {
    return {"band",      "rates",        "kasha-dynamics", "scaling-scan",
            "mcwf-vs-rate", "disorder",  "table1"};
}

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

// read-or-default accessors that write the resolved value back into the
// config, so the dumped metadata reproduces the run exactly
inline double resolve(Config& cfg, const std::string& sec, const std::string& key,
                      double fallback) {
    const double v = cfg.get_double(sec, key, fallback);
    cfg.set(sec, key, fmt(v));
    return v;
}

inline std::int64_t resolve_int(Config& cfg, const std::string& sec,
                                const std::string& key, std::int64_t fallback) {
    const std::int64_t v = cfg.get_int(sec, key, fallback);
    cfg.set(sec, key, std::to_string(v));
    return v;
}

inline std::string resolve_string(Config& cfg, const std::string& sec,
                                  const std::string& key,
                                  const std::string& fallback) {
    const std::string v = cfg.get_string(sec, key, fallback);
    cfg.set(sec, key, v);
    return v;
}

inline std::vector<double> parse_list(const std::string& text,
                                      const std::string& what) {
    std::istringstream in(text);
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    if (!in.eof() || values.empty())
        throw std::invalid_argument(what + ": expected space-separated numbers, got '" +
                                    text + "'");
    return values;
}

// equidistant in-band spectrum nu_m = m * 4 Omega / n_max
inline std::vector<VibrationalMode> equidistant_modes(double omega_nn, int n_max,
                                                      double s,
                                                      double gamma_over_nu) {
    std::vector<VibrationalMode> modes;
    modes.reserve(n_max);
    for (int m = 1; m <= n_max; ++m) {
        const double nu = 4.0 * omega_nn * m / n_max;
        modes.emplace_back(nu, gamma_over_nu * nu, s);
    }
    return modes;
}

inline std::vector<double> linear_grid(double t_max, int n_times) {
    std::vector<double> grid;
    grid.reserve(n_times);
    for (int i = 1; i <= n_times; ++i) grid.push_back(t_max * i / n_times);
    return grid;
}

inline void write_metadata(const Config& cfg, const std::string& path) {
    auto out = open_output(path);
    out << "# run metadata; re-runnable as a config file\n";
    cfg.dump(out);
}

// geometry block shared by every chain experiment; d = 1 internally
struct ChainSetup {
    int N;
    double k0d;
    double omega_nn;
};

inline ChainSetup resolve_chain(Config& cfg, std::int64_t default_n) {
    ChainSetup chain;
    chain.N = static_cast<int>(resolve_int(cfg, "aggregate", "N", default_n));
    chain.k0d = resolve(cfg, "aggregate", "k0d", 0.0126);
    const AggregateSpec bare(chain.N, 1.0, chain.k0d);
    chain.omega_nn = coupling_matrices(bare).omega(0, 1);
    cfg.set("aggregate", "omega_nn_gamma0", fmt(chain.omega_nn));
    return chain;
}

inline std::vector<VibrationalMode> resolve_modes(Config& cfg, double omega_nn,
                                                  std::int64_t default_n_max) {
    const int n_max =
        static_cast<int>(resolve_int(cfg, "modes", "n_max", default_n_max));
    const double s = resolve(cfg, "modes", "s", 0.01);
    const double gq = resolve(cfg, "modes", "gamma_over_nu", 0.1);
    if (n_max < 1) throw std::invalid_argument("modes.n_max must be >= 1");
    return equidistant_modes(omega_nn, n_max, s, gq);
}

}  // namespace detail

// Band-structure table: analytic periodic nearest-neighbor band, open-chain
// cosine sums and the exact all-neighbor diagonalization, rank-aligned.
inline void experiment_band(Config& cfg, const std::string& out_dir) {
    const auto chain = detail::resolve_chain(cfg, 20);
    const AggregateSpec spec(chain.N, 1.0, chain.k0d);
    const auto couplings = coupling_matrices(spec);
    const auto analytic = band_analytic(chain.omega_nn, chain.N, 1.0);
    const auto exact = band_exact(couplings);
    const auto cosine = full_band_shifts(couplings, 1.0, false);
    const auto ks = momentum_grid(chain.N);

    // pair analytic/cosine (k-ordered) with exact (rank-ordered) by rank
    std::vector<int> order(chain.N);
    for (int c = 0; c < chain.N; ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (analytic.shifts(a) != analytic.shifts(b))
            return analytic.shifts(a) > analytic.shifts(b);
        return ks[a] < ks[b];
    });

    auto out = open_output(out_dir + "/band.csv");
    CsvWriter csv(out);
    csv.row({"rank", "k", "q_d", "shift_analytic_gamma0", "shift_cosine_gamma0",
             "shift_exact_gamma0", "decay_analytic_gamma0", "decay_exact_gamma0"});
    for (int rank = 0; rank < chain.N; ++rank) {
        const int c = order[rank];
        csv.data_row(rank, ks[c], analytic.q_values[c], analytic.shifts(c),
                     cosine[c], exact.shifts(rank), analytic.decays(c),
                     exact.decays(rank));
    }
    cfg.set("results", "bandwidth_gamma0",
            detail::fmt(exact.shifts(0) - exact.shifts(chain.N - 1)));
    cfg.set("results", "symmetric_decay_gamma0",
            detail::fmt(exact.symmetric_decay()));
    detail::write_metadata(cfg, out_dir + "/band_metadata.cfg");
}

// Transfer-rate matrix between collective states plus the aggregate Kasha
// rate against its closed-form and scaling-law estimates.
inline void experiment_rates(Config& cfg, const std::string& out_dir) {
    const auto chain = detail::resolve_chain(cfg, 20);
    const auto modes = detail::resolve_modes(cfg, chain.omega_nn, 5);
    const std::string band_kind =
        detail::resolve_string(cfg, "band", "kind", "exact");
    ExcitonBand band;
    if (band_kind == "exact") {
        const AggregateSpec spec(chain.N, 1.0, chain.k0d);
        band = band_exact(coupling_matrices(spec));
    } else if (band_kind == "analytic") {
        band = band_analytic(chain.omega_nn, chain.N, 1.0);
    } else {
        throw std::invalid_argument("band.kind must be 'exact' or 'analytic'");
    }
    const auto model = build_rate_model(band, modes);

    auto out = open_output(out_dir + "/rates.csv");
    CsvWriter csv(out);
    std::vector<std::string> header = {"state", "shift_gamma0",
                                       "radiative_gamma0"};
    for (int b = 0; b < chain.N; ++b)
        header.push_back("to_" + std::to_string(b));
    csv.row(header);
    for (int a = 0; a < chain.N; ++a) {
        std::vector<std::string> fields = {std::to_string(a),
                                           detail::fmt(band.shifts(a)),
                                           detail::fmt(model.radiative(a))};
        for (int b = 0; b < chain.N; ++b)
            fields.push_back(detail::fmt(model.transfer(a, b)));
        csv.row(fields);
    }

    const double s_mean = modes.front().s;
    cfg.set("results", "kappa_sum_gamma0",
            detail::fmt(total_kasha_rate(band, modes)));
    cfg.set("results", "kappa_closed_form_gamma0",
            detail::fmt(kasha_rate_closed_form(modes, chain.omega_nn,
                                               band.symmetric_decay())));
    cfg.set("results", "kappa_scaling_gamma0",
            detail::fmt(scaling_law(s_mean, chain.omega_nn,
                                    static_cast<int>(modes.size()))));
    detail::write_metadata(cfg, out_dir + "/rates_metadata.cfg");
}

// Population rate equations from the symmetric state: one column per
// collective state, labeled by the integer quasi-momentum index k.
inline void experiment_kasha_dynamics(Config& cfg, const std::string& out_dir) {
    const auto chain = detail::resolve_chain(cfg, 100);
    const auto modes = detail::resolve_modes(cfg, chain.omega_nn, 40);
    const double t_max_inv_omega =
        detail::resolve(cfg, "grid", "t_max_inv_omega", 6.0);
    const int n_times =
        static_cast<int>(detail::resolve_int(cfg, "grid", "n_times", 240));
    const auto band = band_analytic(chain.omega_nn, chain.N, 1.0);
    const auto model = build_rate_model(band, modes);

    Eigen::VectorXd p0 = Eigen::VectorXd::Zero(chain.N);
    p0(band.symmetric_index) = 1.0;
    const auto t_grid =
        detail::linear_grid(t_max_inv_omega / chain.omega_nn, n_times);
    const auto traj = integrate_rate_equations(model, p0, t_grid);

    const auto ks = momentum_grid(chain.N);
    auto out = open_output(out_dir + "/kasha-dynamics.csv");
    CsvWriter csv(out);
    std::vector<std::string> header = {"time_gamma0", "time_omega", "emitted"};
    for (int k : ks) header.push_back("p_k" + std::to_string(k));
    csv.row(header);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        std::vector<std::string> fields = {
            detail::fmt(t_grid[i]), detail::fmt(t_grid[i] * chain.omega_nn),
            detail::fmt(traj.emitted(i))};
        for (int c = 0; c < chain.N; ++c)
            fields.push_back(detail::fmt(traj.populations(i, c)));
        csv.row(fields);
    }

    std::vector<double> ps(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        ps[i] = traj.populations(i, band.symmetric_index);
    const auto fit = fit_exponential(t_grid, ps);
    cfg.set("results", "kappa_fit_gamma0", detail::fmt(fit.rate));
    cfg.set("results", "kappa_fit_r_squared", detail::fmt(fit.r_squared));
    cfg.set("results", "kappa_sum_gamma0",
            detail::fmt(total_kasha_rate(band, modes)));
    detail::write_metadata(cfg, out_dir + "/kasha-dynamics_metadata.cfg");
}

// Kasha rate versus mode count: equidistant spectra against the scaling law,
// plus a randomized-spectrum ensemble (nu uniform in-band, s uniform).
inline void experiment_scaling_scan(Config& cfg, const std::string& out_dir) {
    const auto chain = detail::resolve_chain(cfg, 20);
    const int n_min =
        static_cast<int>(detail::resolve_int(cfg, "scan", "n_min", 2));
    const int n_top =
        static_cast<int>(detail::resolve_int(cfg, "scan", "n_max", 16));
    const double s = detail::resolve(cfg, "modes", "s", 0.01);
    const double gq = detail::resolve(cfg, "modes", "gamma_over_nu", 0.1);
    const int n_real =
        static_cast<int>(detail::resolve_int(cfg, "scan", "n_realizations", 200));
    const double s_max = detail::resolve(cfg, "scan", "s_max", 0.2);
    const std::uint64_t seed = static_cast<std::uint64_t>(
        detail::resolve_int(cfg, "run", "seed", 20260823));
    if (n_min < 1 || n_top < n_min)
        throw std::invalid_argument("scan.n_min/n_max must satisfy 1 <= n_min <= n_max");

    const auto band = band_analytic(chain.omega_nn, chain.N, 1.0);
    auto out = open_output(out_dir + "/scaling-scan.csv");
    CsvWriter csv(out);
    csv.row({"n_max", "predictor", "kappa_equidistant_gamma0",
             "kappa_scaling_gamma0", "kappa_random_mean_gamma0",
             "kappa_random_stderr_gamma0", "s_mean_random"});
    for (int n = n_min; n <= n_top; ++n) {
        const auto modes = detail::equidistant_modes(chain.omega_nn, n, s, gq);
        const double kappa_eq = total_kasha_rate(band, modes);
        const double kappa_law = scaling_law(s, chain.omega_nn, n);

        double kap_sum = 0.0, kap_sumsq = 0.0, s_sum = 0.0;
        for (int r = 0; r < n_real; ++r) {
            std::mt19937_64 rng(detail::splitmix64(
                seed ^ (0xA0761D6478BD642FULL * (n + 1)) ^
                (0xE7037ED1A0B428DBULL * (r + 1))));
            std::vector<VibrationalMode> random_modes;
            random_modes.reserve(n);
            double s_real = 0.0;
            for (int m = 0; m < n; ++m) {
                const double nu = detail::uniform01(rng) * 4.0 * chain.omega_nn;
                const double sm = detail::uniform01(rng) * s_max;
                random_modes.emplace_back(nu, gq * nu, sm);
                s_real += sm;
            }
            const double kap = total_kasha_rate(band, random_modes);
            kap_sum += kap;
            kap_sumsq += kap * kap;
            s_sum += s_real / n;
        }
        const double mean = kap_sum / n_real;
        // sample variance / n_real = squared standard error of the mean
        const double stderr2 =
            n_real > 1
                ? std::max(0.0, (kap_sumsq / n_real - mean * mean)) / (n_real - 1)
                : 0.0;
        csv.data_row(n, (n + 1.0) * (2.0 * n + 1.0) / n, kappa_eq, kappa_law,
                     mean, std::sqrt(stderr2), s_sum / n_real);
    }
    detail::write_metadata(cfg, out_dir + "/scaling-scan_metadata.cfg");
}

// Quantum-jump ensemble against the incoherent rate model from the same
// exact band; also writes the full per-state ensemble table.
inline void experiment_mcwf_vs_rate(Config& cfg, const std::string& out_dir) {
    const auto chain = detail::resolve_chain(cfg, 20);
    const auto modes = detail::resolve_modes(cfg, chain.omega_nn, 5);
    McwfOptions opts;
    opts.n_traj =
        static_cast<int>(detail::resolve_int(cfg, "mcwf", "n_traj", 2000));
    opts.n_workers =
        static_cast<int>(detail::resolve_int(cfg, "mcwf", "threads", 1));
    opts.rtol = detail::resolve(cfg, "mcwf", "rtol", 1e-6);
    opts.atol = detail::resolve(cfg, "mcwf", "atol", 1e-10);
    opts.seed = static_cast<std::uint64_t>(
        detail::resolve_int(cfg, "run", "seed", 20260823));
    const double t_max_kappa = detail::resolve(cfg, "grid", "t_max_kappa", 3.0);
    const int n_times =
        static_cast<int>(detail::resolve_int(cfg, "grid", "n_times", 60));

    const AggregateSpec spec(chain.N, 1.0, chain.k0d, modes);
    const auto couplings = coupling_matrices(spec);
    const auto band = band_exact(couplings);
    const double kappa_ref = total_kasha_rate(band, modes);
    const auto t_grid = detail::linear_grid(t_max_kappa / kappa_ref, n_times);

    const auto h = build_effective_hamiltonian(spec, couplings);
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(h.basis.dimension());
    for (int j = 0; j < chain.N; ++j)
        psi0(h.basis.vacuum(j)) = band.mode_vectors(j, band.symmetric_index);
    psi0.normalize();
    const auto ens = mcwf_run(h, psi0, t_grid, band, opts);

    const auto model = build_rate_model(band, modes);
    Eigen::VectorXd p0 = Eigen::VectorXd::Zero(chain.N);
    p0(band.symmetric_index) = 1.0;
    const auto rate_traj = integrate_rate_equations(model, p0, t_grid);

    {
        auto out = open_output(out_dir + "/mcwf-vs-rate.csv");
        CsvWriter csv(out);
        csv.row({"time_gamma0", "p_sym_mcwf", "p_sym_mcwf_stderr", "p_sym_rate",
                 "emitted_mcwf", "emitted_mcwf_stderr", "emitted_rate"});
        for (std::size_t i = 0; i < t_grid.size(); ++i)
            csv.data_row(t_grid[i], ens.mean_populations(i, band.symmetric_index),
                         ens.std_errors(i, band.symmetric_index),
                         rate_traj.populations(i, band.symmetric_index),
                         ens.emitted(i), ens.emitted_std_error(i),
                         rate_traj.emitted(i));
    }
    {
        auto out = open_output(out_dir + "/mcwf-vs-rate_states.csv");
        CsvWriter csv(out);
        std::vector<std::string> header = {"time_gamma0"};
        for (int c = 0; c < band.size(); ++c) header.push_back("p_" + std::to_string(c));
        for (int c = 0; c < band.size(); ++c)
            header.push_back("stderr_" + std::to_string(c));
        csv.row(header);
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            std::vector<std::string> fields = {detail::fmt(t_grid[i])};
            for (int c = 0; c < band.size(); ++c)
                fields.push_back(detail::fmt(ens.mean_populations(i, c)));
            for (int c = 0; c < band.size(); ++c)
                fields.push_back(detail::fmt(ens.std_errors(i, c)));
            csv.row(fields);
        }
    }

    std::vector<double> ps(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        ps[i] = ens.mean_populations(i, band.symmetric_index);
    const auto fit_q = fit_exponential(t_grid, ps);
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        ps[i] = rate_traj.populations(i, band.symmetric_index);
    const auto fit_r = fit_exponential(t_grid, ps);
    cfg.set("results", "kappa_mcwf_gamma0", detail::fmt(fit_q.rate));
    cfg.set("results", "kappa_mcwf_r_squared", detail::fmt(fit_q.r_squared));
    cfg.set("results", "kappa_rate_gamma0", detail::fmt(fit_r.rate));
    cfg.set("results", "kappa_sum_gamma0", detail::fmt(kappa_ref));
    cfg.set("results", "kappa_scaling_gamma0",
            detail::fmt(scaling_law(modes.front().s, chain.omega_nn,
                                    static_cast<int>(modes.size()))));
    detail::write_metadata(cfg, out_dir + "/mcwf-vs-rate_metadata.cfg");
}

// Symmetric-state decay under static frequency disorder of increasing width.
inline void experiment_disorder(Config& cfg, const std::string& out_dir) {
    const auto chain = detail::resolve_chain(cfg, 20);
    // default to a spectrum dense enough to stay resonant under the disorder
    const auto modes = detail::resolve_modes(cfg, chain.omega_nn, 6);
    const auto widths_rel = detail::parse_list(
        detail::resolve_string(cfg, "disorder", "widths_over_omega", "0 1 2"),
        "disorder.widths_over_omega");
    const int n_real = static_cast<int>(
        detail::resolve_int(cfg, "disorder", "n_realizations", 24));
    McwfOptions opts;
    opts.n_traj =
        static_cast<int>(detail::resolve_int(cfg, "mcwf", "n_traj", 32));
    opts.n_workers =
        static_cast<int>(detail::resolve_int(cfg, "mcwf", "threads", 1));
    opts.rtol = detail::resolve(cfg, "mcwf", "rtol", 1e-6);
    opts.atol = detail::resolve(cfg, "mcwf", "atol", 1e-10);
    opts.seed = static_cast<std::uint64_t>(
        detail::resolve_int(cfg, "run", "seed", 20260823));
    const double t_max_kappa = detail::resolve(cfg, "grid", "t_max_kappa", 2.0);
    const int n_times =
        static_cast<int>(detail::resolve_int(cfg, "grid", "n_times", 40));

    const AggregateSpec spec(chain.N, 1.0, chain.k0d, modes);
    const auto band = band_exact(coupling_matrices(spec));
    const double kappa_ref = total_kasha_rate(band, modes);
    const auto t_grid = detail::linear_grid(t_max_kappa / kappa_ref, n_times);

    std::vector<double> widths;
    for (double w : widths_rel) widths.push_back(w * chain.omega_nn);
    DisorderSpec base(0.0, n_real, opts.seed);
    const auto results =
        disordered_decay_experiment(spec, widths, t_grid, base, opts);

    auto out = open_output(out_dir + "/disorder.csv");
    CsvWriter csv(out);
    csv.row({"width_gamma0", "width_over_omega", "fitted_rate_gamma0",
             "mean_rate_gamma0", "rate_stderr_gamma0", "r_squared"});
    for (std::size_t i = 0; i < results.size(); ++i)
        csv.data_row(results[i].width, widths_rel[i], results[i].fitted_rate,
                     results[i].mean_rate, results[i].rate_std_error,
                     results[i].r_squared);
    cfg.set("results", "kappa_sum_clean_gamma0", detail::fmt(kappa_ref));
    detail::write_metadata(cfg, out_dir + "/disorder_metadata.cfg");
}

// Dye-catalog summary table: relevant-mode count, mean Huang-Rhys factor and
// the scaling-law timescale against the quoted literature value.
inline void experiment_table1(Config& cfg, const std::string& out_dir) {
    auto out = open_output(out_dir + "/table1.csv");
    CsvWriter csv(out);
    csv.row({"name", "d_nm", "dipole_debye", "gamma0_MHz", "lambda0_nm",
             "omega_nn_THz", "n_max", "s_mean", "timescale_fs", "quoted_fs"});
    for (const auto& dye : bundled_dyes()) {
        const auto rel = count_relevant_modes(dye);
        std::vector<std::string> fields = {
            dye.name,
            detail::fmt(dye.d_nm),
            detail::fmt(dye.dipole_debye),
            detail::fmt(dye.gamma0_mhz),
            detail::fmt(dye.lambda0_nm),
            detail::fmt(dye.omega_nn_thz),
            std::to_string(rel.n_max),
            detail::fmt(rel.s_mean),
            rel.n_max > 0 ? detail::fmt(estimate_timescale(dye)) : "",
            dye.quoted_timescale_fs ? detail::fmt(*dye.quoted_timescale_fs) : ""};
        csv.row(fields);
    }
    detail::write_metadata(cfg, out_dir + "/table1_metadata.cfg");
}

// Entry point used by the CLI and by the metadata round-trip: dispatches on
// the experiment name and stamps the run section.
inline void run_experiment(const std::string& name, Config cfg,
                           const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    cfg.set("run", "experiment", name);
    cfg.set("run", "version", version_string);
    if (name == "band")
        experiment_band(cfg, out_dir);
    else if (name == "rates")
        experiment_rates(cfg, out_dir);
    else if (name == "kasha-dynamics")
        experiment_kasha_dynamics(cfg, out_dir);
    else if (name == "scaling-scan")
        experiment_scaling_scan(cfg, out_dir);
    else if (name == "mcwf-vs-rate")
        experiment_mcwf_vs_rate(cfg, out_dir);
    else if (name == "disorder")
        experiment_disorder(cfg, out_dir);
    else if (name == "table1")
        experiment_table1(cfg, out_dir);
    else
        throw std::invalid_argument("unknown experiment '" + name + "'");
}

// Config-driven entry point (used for metadata re-runs): the experiment name
// must be present as run.experiment.
inline void run_experiment(const Config& cfg, const std::string& out_dir) {
    if (!cfg.has("run", "experiment")) {
        std::string names;
        for (const auto& n : experiment_names()) names += " " + n;
        throw std::invalid_argument(
            "config does not name an experiment (run.experiment); available:" +
            names);
    }
    run_experiment(cfg.get_string("run", "experiment"), cfg, out_dir);
}

}  // namespace kasha

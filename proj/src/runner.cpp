#include "cosmon/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "cosmon/cutoffs.hpp"
#include "cosmon/fft.hpp"
#include "cosmon/parallel.hpp"
#include "cosmon/rng.hpp"
#include "cosmon/specfun.hpp"
#include "cosmon/svg.hpp"

namespace cosmon::runner {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw SchemaError("config field '" + key + "': " + e.what());
    }
}

} // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("config file not found: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("config parse error: ") + e.what());
    }

    RunConfig cfg;
    try {
        const json bg = get_or(j, "background", json::object());
        cfg.bg = BackgroundParams(get_or(bg, "a_rot", 1.0));
        const json md = get_or(j, "mode", json::object());
        cfg.mode = ModeParams(get_or(md, "k", 0), get_or(md, "m", 0.0));
        const json gr = get_or(j, "grid", json::object());
        cfg.grid.t_period = get_or(gr, "t_period", 32.0);
        cfg.grid.n_t = get_or(gr, "n_t", std::size_t{512});
        cfg.grid.r_max = get_or(gr, "r_max", 6.0);
        cfg.grid.n_r = get_or(gr, "n_r", std::size_t{512});
        cfg.grid.bg = cfg.bg;
        cfg.grid.mode = cfg.mode;
        const json ab = get_or(j, "absorber", json::object());
        cfg.absorber_R = get_or(ab, "R", 3.3);
        cfg.r0_source = get_or(ab, "r0_source", 2.5);
        cfg.seed = get_or(j, "seed", uint64_t{12345});

        const json tol = get_or(j, "tolerances", json::object());
        cfg.ray_tol = get_or(tol, "ray_tol", 1e-10);
        cfg.ode_tol = get_or(tol, "ode_tol", 1e-12);
        cfg.residual_tol = get_or(tol, "residual_tol", 1e-4);
        cfg.elliptic_mass_min = get_or(tol, "elliptic_mass_min", 1e-3);
        cfg.off_flowout_max = get_or(tol, "off_flowout_max", 0.05);

        if (j.contains("trace")) {
            const json tr = j.at("trace");
            cfg.trace.s_max = get_or(tr, "s_max", 10.0);
            cfg.trace.n_samples = get_or(tr, "n_samples", 81);
            if (tr.contains("seeds")) {
                for (const auto& s : tr.at("seeds")) {
                    if (!s.is_array() || s.size() != 6)
                        throw SchemaError("trace.seeds entries must be [t,r,phi,lambda,xi,eta]");
                    cfg.trace.seeds.push_back({s[0].get<double>(), s[1].get<double>(),
                                               s[2].get<double>(), s[3].get<double>(),
                                               s[4].get<double>(), s[5].get<double>()});
                }
            }
        }
        if (cfg.trace.seeds.empty())
            cfg.trace.seeds.push_back({0.0, cfg.bg.a_rot, 0.0, 1.0, 0.0, 0.0});

        if (j.contains("escape")) {
            const json es = j.at("escape");
            const json K = get_or(es, "K", json::object());
            cfg.escape.K = {get_or(K, "t_lo", -0.5), get_or(K, "t_hi", 0.5),
                            get_or(K, "r_lo", 0.5 * cfg.bg.a_rot),
                            get_or(K, "r_hi", 1.5 * cfg.bg.a_rot)};
            cfg.escape.R = get_or(es, "R", 2.0);
        }

        if (j.contains("mode_experiment")) {
            const json me = j.at("mode_experiment");
            cfg.mode_exp.lambda = get_or(me, "lambda", 1.0);
            cfg.mode_exp.r_lo = get_or(me, "r_lo", 0.1);
            cfg.mode_exp.r_hi = get_or(me, "r_hi", 10.0);
            cfg.mode_exp.draws = get_or(me, "draws", 50);
            cfg.mode_exp.uc_trials = get_or(me, "uc_trials", 100);
        }

        if (j.contains("counterexample")) {
            const json ce = j.at("counterexample");
            cfg.cex_grids.n_lambda = get_or(ce, "n_lambda", 200);
            cfg.cex_grids.n_t = get_or(ce, "n_t", 96);
            cfg.cex_grids.t_window = get_or(ce, "t_window", 60.0);
            cfg.cex_grids.n_r = get_or(ce, "n_r", 1024);
            cfg.cex_grids.refinements = get_or(ce, "refinements", 3);
        }

        cfg.coercivity_trials = get_or(get_or(j, "coercivity", json::object()), "trials", 100);

        if (j.contains("solve")) {
            const json sv = get_or(j.at("solve"), "source", json::object());
            cfg.source.t0 = get_or(sv, "t0", 8.0);
            cfg.source.r0 = get_or(sv, "r0", 2.0);
            cfg.source.half_t = get_or(sv, "half_t", 0.22);
            cfg.source.half_r = get_or(sv, "half_r", 0.22);
        }

        if (j.contains("wavefront")) {
            const json wf = j.at("wavefront");
            const json wj = get_or(wf, "window", json::object());
            cfg.wf.window.sigma_t = get_or(wj, "sigma_t", 1.2);
            cfg.wf.window.sigma_r = get_or(wj, "sigma_r", 0.5);
            cfg.wf.window.stride_t = get_or(wj, "stride_t", std::size_t{16});
            cfg.wf.window.stride_r = get_or(wj, "stride_r", std::size_t{32});
            const json th = get_or(wf, "thresholds", json::object());
            cfg.wf.thresholds.rel_threshold = get_or(th, "rel_threshold", 1e-3);
            cfg.wf.thresholds.lambda_min = get_or(th, "lambda_min", 15.0);
            cfg.wf.thresholds.tube_pos_mult = get_or(th, "tube_pos_mult", 3.0);
            cfg.wf.thresholds.tube_angle_deg = get_or(th, "tube_angle_deg", 15.0);
            const json ct = get_or(wf, "control", json::object());
            cfg.wf.control_t_offset = get_or(ct, "t_offset", -8.0);
            cfg.wf.control_r0 = get_or(ct, "r0", 2.5);
            cfg.wf.control_lambda = get_or(ct, "lambda", cfg.wf.control_lambda);
        }
    } catch (const json::exception& e) {
        throw SchemaError(std::string("config: ") + e.what());
    }

    // cross-field constraints, revalidated at load
    if (!(cfg.grid.t_period > 0.0) || !(cfg.grid.r_max > 0.0) || cfg.grid.n_r < 16)
        throw SchemaError("grid: t_period and r_max must be positive, n_r >= 16");
    if (!is_pow2(cfg.grid.n_t)) throw SchemaError("grid.n_t must be a power of two");
    if (!(cfg.grid.r_max > cfg.absorber_R + 2.0))
        throw SchemaError("grid.r_max must exceed absorber.R + 2");
    if (!(cfg.absorber_R > std::max(cfg.bg.a_rot, cfg.r0_source)))
        throw SchemaError("absorber.R must exceed max(a_rot, r0_source)");
    if (!(1.0 - cfg.bg.a_rot * cfg.bg.a_rot / (cfg.absorber_R * cfg.absorber_R) > 0.9))
        throw SchemaError("absorber.R must satisfy 1 - a^2/R^2 > 9/10");
    if (!(cfg.source.t0 - cfg.source.half_t > 0.0 &&
          cfg.source.t0 + cfg.source.half_t < cfg.grid.t_period))
        throw SchemaError("solve.source bump must fit inside one period");
    if (!(cfg.source.r0 + cfg.source.half_r < cfg.r0_source))
        throw SchemaError("solve.source bump must be supported in r < r0_source");
    return cfg;
}

namespace {

SpacetimeField make_source_field(const RunConfig& cfg) {
    SpacetimeField f = cfg.grid.make_field();
    const Bump bt(cfg.source.t0 - cfg.source.half_t, cfg.source.t0 + cfg.source.half_t);
    const Bump br(cfg.source.r0 - cfg.source.half_r, cfg.source.r0 + cfg.source.half_r);
    for (std::size_t it = 0; it < f.n_t; ++it) {
        const double wt = bt(f.t(it));
        if (wt == 0.0) continue;
        for (std::size_t j = 0; j < f.n_r(); ++j) f.at(it, j) = wt * br(f.r[j]);
    }
    return f;
}

void append_checks(std::vector<Check>& into, const std::vector<Check>& from,
                   const std::string& prefix) {
    for (Check c : from) {
        c.name = prefix + c.name;
        into.push_back(std::move(c));
    }
}

std::vector<Check> run_trace(const RunConfig& cfg, const fs::path& out) {
    std::vector<Check> checks;
    std::vector<double> s_values;
    for (int i = 0; i < cfg.trace.n_samples; ++i)
        s_values.push_back(-cfg.trace.s_max +
                           2.0 * cfg.trace.s_max * i / (cfg.trace.n_samples - 1));
    const auto paths = rays::integrate_batch(cfg.bg, cfg.trace.seeds, s_values, cfg.ray_tol);

    double worst_closed_form = 0.0, worst_null = 0.0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const rays::RayPath& p = paths[i];
        const double lambda = cfg.trace.seeds[i].lambda;
        const double c = p.closed_form_c();
        const double a2 = cfg.bg.a_rot * cfg.bg.a_rot;
        for (const rays::RaySample& smp : p.samples) {
            const double w = 2.0 * lambda * smp.s + c;
            const double dev = std::abs(smp.q.r * smp.q.r - a2 - w * w) /
                               ((1.0 + smp.s * smp.s) * lambda * lambda);
            worst_closed_form = std::max(worst_closed_form, dev);
            worst_null = std::max(worst_null, std::abs(principal_symbol(cfg.bg, smp.q)) /
                                                  (lambda * lambda));
        }
        const fs::path file =
            i == 0 ? out / "rays.csv"
                   : out / ("rays_" + std::to_string(i) + ".csv");
        rays::write_ray_csv(p, file.string());
    }
    checks.push_back({"closed_form_deviation", worst_closed_form <= 1e-8, worst_closed_form, 1e-8});
    checks.push_back({"null_constraint_drift", worst_null <= 1e-8, worst_null, 1e-8});
    return checks;
}

std::vector<Check> run_escape(const RunConfig& cfg, const fs::path& out) {
    std::vector<Check> checks;
    const rays::EscapeReport rep =
        rays::escape_analysis(cfg.bg, cfg.escape.K, cfg.escape.R, cfg.ray_tol);
    json jr;
    jr["T"] = rep.T;
    jr["seed_count"] = rep.seed_count;
    jr["max_escape_radius"] = rep.max_escape_radius;
    std::ofstream(out / "escape.json") << jr.dump(2) << "\n";
    checks.push_back({"all_rays_escape", true, static_cast<double>(rep.seed_count), 0.0});
    checks.push_back({"escape_time_finite", std::isfinite(rep.T), rep.T, 0.0});
    return checks;
}

std::vector<Check> run_mode(const RunConfig& cfg, const fs::path& out) {
    std::vector<Check> checks;
    SplitMix64 rng(cfg.seed);

    // oracle equivalence: numerical ODE against the Bessel closed form
    double worst = 0.0;
    for (int d = 0; d < cfg.mode_exp.draws; ++d) {
        const double lambda = rng.next_sign() * rng.uniform(0.5, 2.5);
        const int k = static_cast<int>(rng.next_below(5)) - 2;
        double m = 0.0;
        const int regime = static_cast<int>(rng.next_below(3));
        if (regime == 1) m = rng.uniform(0.1, 0.7) * std::abs(lambda);       // oscillatory
        else if (regime == 2) m = rng.uniform(1.3, 2.0) * std::abs(lambda);  // evanescent
        const ModeParams mp(k, m);
        const modes::ExactMode em = modes::exact_mode(cfg.bg, mp, lambda, modes::Branch::regular);

        const double r_start = 1.0;
        std::vector<double> samples;
        for (int i = 0; i <= 60; ++i)
            samples.push_back(cfg.mode_exp.r_lo +
                              (cfg.mode_exp.r_hi - cfg.mode_exp.r_lo) * i / 60.0);
        const modes::ModeProfile prof = modes::solve_mode_ode(
            cfg.bg, mp, lambda, {cfg.mode_exp.r_lo, cfg.mode_exp.r_hi}, r_start,
            {cplx(em(r_start), 0.0), cplx(em.derivative(r_start), 0.0)}, samples, cfg.ode_tol);
        double scale = 0.0;
        for (double r : samples) scale = std::max(scale, std::abs(em(r)));
        for (std::size_t i = 0; i < samples.size(); ++i)
            worst = std::max(worst,
                             std::abs(prof.values[i].real() - em(samples[i])) / scale);
    }
    checks.push_back({"oracle_equivalence", worst <= 1e-8, worst, 1e-8});

    // unique continuation on an interval straddling r = a
    const modes::UniqueContinuationReport uc = modes::unique_continuation_check(
        cfg.bg, cfg.mode, cfg.mode_exp.lambda, {0.4 * cfg.bg.a_rot, 1.6 * cfg.bg.a_rot},
        cfg.ode_tol, cfg.mode_exp.uc_trials, cfg.seed + 1);
    checks.push_back({"uc_zero_data_sup", uc.zero_data_sup <= 1e-12, uc.zero_data_sup, 1e-12});
    checks.push_back({"uc_min_window_mass_positive", uc.min_window_mass > 0.0,
                      uc.min_window_mass, 0.0});

    // one documented profile artifact
    const modes::ExactMode em =
        modes::exact_mode(cfg.bg, cfg.mode, cfg.mode_exp.lambda, modes::Branch::regular);
    std::vector<double> rg;
    for (int i = 0; i <= 400; ++i)
        rg.push_back(cfg.mode_exp.r_lo + (cfg.mode_exp.r_hi - cfg.mode_exp.r_lo) * i / 400.0);
    const modes::ModeProfile prof =
        modes::solve_mode_ode(cfg.bg, cfg.mode, cfg.mode_exp.lambda,
                              {cfg.mode_exp.r_lo, cfg.mode_exp.r_hi}, 1.0,
                              {cplx(em(1.0), 0.0), cplx(em.derivative(1.0), 0.0)}, rg,
                              cfg.ode_tol);
    modes::write_profile_csv(prof, (out / "mode_profile.csv").string());

    json jr;
    jr["oracle_equivalence_max_rel_err"] = worst;
    jr["uc_zero_data_sup"] = uc.zero_data_sup;
    jr["uc_min_window_mass"] = uc.min_window_mass;
    std::ofstream(out / "mode.json") << jr.dump(2) << "\n";
    return checks;
}

std::vector<Check> run_counterexample(const RunConfig& cfg, const fs::path& out) {
    std::vector<Check> checks;
    const auto [field, rep] = modes::counterexample(cfg.bg, cfg.mode.k, modes::ZetaSpec{},
                                                    cfg.cex_grids);
    write_field_csv(field, (out / "counterexample_field.csv").string());

    // control window with positive exponents: the derivative norm converges
    modes::ZetaSpec control;
    control.nu_lo = 0.25;
    control.nu_plateau_lo = 1.0 / 3.0;
    control.nu_plateau_hi = 2.0 / 3.0;
    control.nu_hi = 0.75;
    modes::CounterexampleGrids cg = cfg.cex_grids;
    cg.refinements = std::max(1, cfg.cex_grids.refinements - 1);
    const auto [cf, crep] = modes::counterexample(cfg.bg, cfg.mode.k, control, cg);

    json jr;
    jr["l2_per_level"] = rep.l2_per_level;
    jr["l2_ratio"] = rep.l2_ratio;
    jr["eps_ladder"] = rep.eps_ladder;
    jr["dr_norm_sq_per_eps"] = rep.dr_norm_sq_per_eps;
    jr["slope"] = rep.slope;
    jr["control_slope"] = crep.slope;
    jr["f1_near_zero_warning"] = rep.f1_near_zero_warning;
    std::ofstream(out / "counterexample.json") << jr.dump(2) << "\n";

    checks.push_back({"l2_refinement_stable", std::abs(rep.l2_ratio - 1.0) <= 0.01,
                      std::abs(rep.l2_ratio - 1.0), 0.01});
    const bool slope_ok = rep.slope > -4.0 / 3.0 - 0.2 && rep.slope < -2.0 / 3.0 + 0.2;
    checks.push_back({"divergence_slope_in_window", slope_ok, rep.slope, -2.0 / 3.0 + 0.2});
    checks.push_back({"control_slope_converges", crep.slope > -0.2, crep.slope, -0.2});
    return checks;
}

std::vector<Check> run_coercivity(const RunConfig& cfg, const fs::path& out) {
    std::vector<Check> checks;
    const solver::CoercivityReport rep = solver::coercivity_check(
        cfg.bg, cfg.mode, cfg.coercivity_trials, cfg.grid.t_period, cfg.seed);
    json jr;
    jr["max_identity_rel_err"] = rep.max_identity_rel_err;
    jr["min_slack"] = rep.min_slack;
    jr["trials"] = rep.trials;
    std::ofstream(out / "coercivity.json") << jr.dump(2) << "\n";
    checks.push_back({"pairing_identity", rep.max_identity_rel_err <= 1e-8,
                      rep.max_identity_rel_err, 1e-8});
    checks.push_back({"inequality_slack_nonnegative", rep.min_slack >= -1e-9, rep.min_slack, 0.0});
    return checks;
}

std::vector<Check> run_solve(const RunConfig& cfg, const fs::path& out, SpacetimeField* u_out,
                             SpacetimeField* f_out) {
    std::vector<Check> checks;
    const solver::AbsorberSpec spec(cfg.bg, cfg.absorber_R, cfg.r0_source);
    const SpacetimeField f = make_source_field(cfg);
    auto [u, rep] = solver::solve_forward(spec, cfg.grid, f);

    write_field_binary(u, (out / "solution.json").string(), (out / "solution.bin").string());
    const modes::H1kNormReport h1k = modes::h1k_norm(cfg.bg, cfg.mode, u);
    json jr;
    jr["interior_residual_rel"] = rep.interior_residual_rel;
    jr["elliptic_mass_fraction"] = rep.elliptic_mass_fraction;
    jr["total_norm_sq"] = rep.total_norm_sq;
    jr["max_diag_ratio"] = rep.max_diag_ratio;
    jr["h1k_norm"] = {{"l2", h1k.l2},
                      {"dt", h1k.dt},
                      {"dr", h1k.dr},
                      {"twisted", h1k.twisted},
                      {"total", h1k.total()}};
    jr["warnings"] = rep.warnings;
    std::ofstream(out / "solve.json") << jr.dump(2) << "\n";

    checks.push_back({"interior_residual", rep.interior_residual_rel <= cfg.residual_tol,
                      rep.interior_residual_rel, cfg.residual_tol});
    checks.push_back({"elliptic_mass_fraction", rep.elliptic_mass_fraction > cfg.elliptic_mass_min,
                      rep.elliptic_mass_fraction, cfg.elliptic_mass_min});
    if (u_out) *u_out = std::move(u);
    if (f_out) *f_out = f;
    return checks;
}

std::vector<Check> run_wavefront(const RunConfig& cfg, const fs::path& out) {
    std::vector<Check> checks;
    SpacetimeField u = cfg.grid.make_field(), f = cfg.grid.make_field();
    append_checks(checks, run_solve(cfg, out, &u, &f), "solve.");

    const wavefront::WindowSpec win = cfg.wf.window;
    const wavefront::PhaseEnergyMap map_f = wavefront::phase_energy(f, win);
    const wavefront::PhaseEnergyMap map_u = wavefront::phase_energy(u, win);
    wavefront::write_phase_map_csv(map_u, (out / "phase_u.csv").string());
    wavefront::write_phase_map_svg(map_u, (out / "phase_u.svg").string());
    wavefront::write_phase_map_csv(map_f, (out / "phase_f.csv").string());

    const wavefront::Region f_region{
        cfg.source.t0 - cfg.source.half_t - 3.0 * win.sigma_t,
        cfg.source.t0 + cfg.source.half_t + 3.0 * win.sigma_t,
        cfg.source.r0 - cfg.source.half_r - 3.0 * win.sigma_r,
        cfg.source.r0 + cfg.source.half_r + 3.0 * win.sigma_r};

    wavefront::FlowoutThresholds th = cfg.wf.thresholds;
    th.r_max_classify = cfg.absorber_R;

    const std::vector<PhasePoint> seeds =
        wavefront::seeds_from_map(map_f, cfg.bg, th, f_region, cfg.grid.t_period);
    double lam_min_seed = std::numeric_limits<double>::infinity();
    for (const PhasePoint& s : seeds) lam_min_seed = std::min(lam_min_seed, std::abs(s.lambda));
    const double horizon =
        seeds.empty() ? 1.0 : 1.5 * cfg.grid.r_max / std::max(lam_min_seed, 0.5);
    const std::vector<rays::RayPath> flowout =
        rays::forward_flowout(cfg.bg, seeds, horizon, cfg.ray_tol);
    if (!flowout.empty()) rays::write_ray_csv(flowout.front(), (out / "flowout_0.csv").string());

    const wavefront::FlowoutVerdict verdict =
        wavefront::flowout_consistency(map_u, cfg.grid.t_period, cfg.mode.k, flowout, f_region, th);

    // negative control: a packet placed off the forward flowout must fail
    double ctrl_t = cfg.source.t0 + cfg.wf.control_t_offset;
    ctrl_t = std::fmod(ctrl_t + cfg.grid.t_period, cfg.grid.t_period);
    const double lam0 = cfg.wf.control_lambda;
    const double xi0 =
        lam0 * std::sqrt(1.0 - cfg.bg.a_rot * cfg.bg.a_rot / (cfg.wf.control_r0 * cfg.wf.control_r0));
    const SpacetimeField ctrl = wavefront::make_packet(u, ctrl_t, cfg.wf.control_r0, 2.0 * win.sigma_t,
                                                       2.0 * win.sigma_r, lam0, xi0);
    const wavefront::PhaseEnergyMap map_c = wavefront::phase_energy(ctrl, win);
    const wavefront::FlowoutVerdict verdict_c =
        wavefront::flowout_consistency(map_c, cfg.grid.t_period, cfg.mode.k, flowout, f_region, th);

    const wavefront::EllipticProbeReport ell = wavefront::elliptic_support_probe(
        u, cfg.bg, cfg.mode, 0.1, 2.0 * M_PI * 10.0 / cfg.grid.t_period);

    json jr;
    jr["seeds"] = seeds.size();
    jr["off_fraction"] = verdict.off_fraction;
    jr["on_energy"] = verdict.on_energy;
    jr["off_energy"] = verdict.off_energy;
    jr["cells_on"] = verdict.n_on;
    jr["cells_off"] = verdict.n_off;
    jr["control_off_fraction"] = verdict_c.off_fraction;
    jr["elliptic_mass_fraction"] = ell.mass_fraction;
    jr["uc_zero_data_sup"] = ell.uc.zero_data_sup;
    jr["uc_min_window_mass"] = ell.uc.min_window_mass;
    std::ofstream(out / "wavefront.json") << jr.dump(2) << "\n";

    checks.push_back({"off_flowout_fraction", verdict.off_fraction <= cfg.off_flowout_max,
                      verdict.off_fraction, cfg.off_flowout_max});
    checks.push_back({"negative_control_fails", verdict_c.off_fraction > 0.5,
                      verdict_c.off_fraction, 0.5});
    checks.push_back({"elliptic_probe_fraction", ell.mass_fraction > cfg.elliptic_mass_min,
                      ell.mass_fraction, cfg.elliptic_mass_min});
    return checks;
}

} // namespace

int run(const std::string& experiment, const std::string& config_path,
        const std::string& out_dir, int threads, std::optional<uint64_t> seed_override) {
    json report;
    report["experiment"] = experiment;
    RunResult result;
    try {
        RunConfig cfg = load_config(config_path);
        if (seed_override) cfg.seed = *seed_override;
        if (threads > 0) set_threads(threads);
        report["seed"] = cfg.seed;

        fs::path out(out_dir);
        fs::create_directories(out);

        if (experiment == "trace") {
            result.checks = run_trace(cfg, out);
        } else if (experiment == "escape") {
            result.checks = run_escape(cfg, out);
        } else if (experiment == "mode") {
            result.checks = run_mode(cfg, out);
        } else if (experiment == "counterexample") {
            result.checks = run_counterexample(cfg, out);
        } else if (experiment == "coercivity") {
            result.checks = run_coercivity(cfg, out);
        } else if (experiment == "solve") {
            result.checks = run_solve(cfg, out, nullptr, nullptr);
        } else if (experiment == "wavefront") {
            result.checks = run_wavefront(cfg, out);
        } else if (experiment == "all") {
            append_checks(result.checks, run_trace(cfg, out), "trace.");
            append_checks(result.checks, run_escape(cfg, out), "escape.");
            append_checks(result.checks, run_mode(cfg, out), "mode.");
            append_checks(result.checks, run_counterexample(cfg, out), "counterexample.");
            append_checks(result.checks, run_coercivity(cfg, out), "coercivity.");
            append_checks(result.checks, run_wavefront(cfg, out), "wavefront.");
        } else {
            throw SchemaError("unknown experiment: " + experiment);
        }

        json jc = json::array();
        for (const Check& c : result.checks) {
            json e;
            e["name"] = c.name;
            e["pass"] = c.pass;
            e["value"] = c.value;
            e["threshold"] = c.threshold;
            jc.push_back(e);
        }
        report["checks"] = jc;
        report["pass"] = result.all_pass();
        std::ofstream(fs::path(out_dir) / "report.json") << report.dump(2) << "\n";
        return result.all_pass() ? kOk : kInvariantFailure;
    } catch (const SchemaError& e) {
        std::fprintf(stderr, "schema error: %s\n", e.what());
        return kSchemaViolation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kNumericalFailure;
    }
}

} // namespace cosmon::runner

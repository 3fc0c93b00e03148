#include "pilotwave/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "pilotwave/fields.hpp"
#include "pilotwave/guidance.hpp"
#include "pilotwave/io.hpp"
#include "pilotwave/kemmer.hpp"
#include "pilotwave/reference.hpp"
#include "pilotwave/rng.hpp"
#include "pilotwave/trajectories.hpp"
#include "pilotwave/twolevel.hpp"

namespace pw::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct ParameterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string term_name(traj::Termination t) {
    switch (t) {
        case traj::Termination::Absorbed: return "absorbed";
        case traj::Termination::Escaped: return "escaped";
        default: return "max_time";
    }
}

void require(bool ok, const std::string& precondition) {
    if (!ok) throw ParameterError("parameter violates precondition: " + precondition);
}

// ---------------------------------------------------------------------------
// Trajectory scenarios
// ---------------------------------------------------------------------------

RunReport run_figures(const ScenarioConfig& cfg, double default_delta) {
    require(cfg.photons >= 1, "photons >= 1");
    require(cfg.b_min < cfg.b_max, "b_min < b_max");
    require(cfg.t_max > 0.0, "t_max > 0");
    require(cfg.strength >= 0.0, "strength >= 0");

    const double delta = cfg.delta_set ? cfg.delta : default_delta;
    traj::ScenarioField field = traj::make_figure_scenario(delta, cfg.strength);
    field.include_incident = !cfg.dipole_only;
    if (cfg.phasor_guidance) field.guidance = traj::GuidanceMode::Phasor;

    const traj::EnsembleResult ens = traj::run_figure_ensemble(
        field, cfg.photons, cfg.b_min, cfg.b_max, cfg.t_max, 1.0 / 256.0, {}, cfg.workers);

    RunReport rep;
    io::CsvFile csv(cfg.out / "trajectories.csv");
    csv.header({"id", "t", "x", "y", "z", "vx", "vy", "vz", "termination"});
    for (std::size_t i = 0; i < ens.trajectories.size(); ++i) {
        const auto& tr = ens.trajectories[i];
        const std::string tn = tr.singular ? "singular" : term_name(tr.termination);
        for (const auto& s : tr.samples)
            csv.row({std::to_string(i), io::format_double(s.t), io::format_double(s.r.x),
                     io::format_double(s.r.y), io::format_double(s.r.z),
                     io::format_double(s.v.x), io::format_double(s.v.y),
                     io::format_double(s.v.z), tn});
    }
    csv.close();
    rep.files.push_back("trajectories.csv");

    // Scattering-plane plot: photons move left to right, dipole at the origin.
    io::SvgPlot plot(-2.2, 2.2, -1.2, 1.2, 880, 480);
    for (const auto& tr : ens.trajectories) {
        std::vector<Vec3> xy;
        xy.reserve(tr.samples.size());
        for (const auto& s : tr.samples) xy.push_back({s.r.x, s.r.z, 0.0});
        const char* color = tr.termination == traj::Termination::Absorbed  ? "#c62828"
                            : tr.termination == traj::Termination::Escaped ? "#1565c0"
                                                                           : "#757575";
        plot.polyline(xy, color, 1.2);
    }
    plot.circle(0.0, 0.0, 5.0, "#000000");
    std::ostringstream cap;
    cap << "delta = " << delta << ", absorbed " << ens.absorbed << "/" << cfg.photons;
    plot.text(-2.1, 1.1, cap.str());
    plot.save(cfg.out / "figure.svg");
    rep.files.push_back("figure.svg");

    std::ostringstream sum;
    sum << "delta=" << delta << " absorbed_fraction=" << ens.absorbed_fraction()
        << " escaped=" << ens.escaped << " max_orbits=" << ens.max_orbits()
        << " singular=" << ens.singular;
    rep.summary = sum.str();
    rep.flagged = ens.singular;
    return rep;
}

RunReport run_phase_sweep(const ScenarioConfig& cfg) {
    require(cfg.photons >= 1, "photons >= 1");
    RunReport rep;
    io::CsvFile csv(cfg.out / "phase_sweep.csv");
    csv.header({"delta", "absorbed_fraction", "escaped", "mean_min_approach"});
    std::ostringstream sum;
    sum << "absorbed_fractions=";
    for (int s = -3; s <= 3; ++s) {
        const double delta = s * kPi / 8.0;
        traj::ScenarioField field = traj::make_figure_scenario(delta, cfg.strength);
        const traj::EnsembleResult ens = traj::run_figure_ensemble(
            field, cfg.photons, cfg.b_min, cfg.b_max, cfg.t_max, 1.0 / 256.0, {}, cfg.workers);
        double mean_min = 0.0;
        for (const auto& tr : ens.trajectories) mean_min += tr.min_approach;
        mean_min /= ens.trajectories.size();
        csv.row_values({delta, ens.absorbed_fraction(),
                        static_cast<double>(ens.escaped), mean_min});
        rep.flagged += ens.singular;
        sum << ens.absorbed_fraction() << (s < 3 ? "," : "");
    }
    csv.close();
    rep.files.push_back("phase_sweep.csv");
    rep.summary = sum.str();
    return rep;
}

RunReport run_jump_demo_scenario(const ScenarioConfig& cfg) {
    traj::JumpDemoConfig jc;
    const traj::JumpDemoResult res = traj::run_jump_demo(jc);

    RunReport rep;
    const double T = 2.0 * kPi / guidance::kHydrogenOmega0;
    io::CsvFile csv(cfg.out / "jump_demo.csv");
    csv.header({"t", "x", "y", "z", "vx", "vy", "vz", "speed", "free_to_attached_ratio"});
    for (const auto& s : res.trajectory.samples) {
        const double frac = std::clamp((s.t - jc.t_jump) / T, 0.0, 1.0);
        const double ratio = jc.ratio_start * std::pow(jc.ratio_end / jc.ratio_start, frac);
        csv.row_values({s.t, s.r.x, s.r.y, s.r.z, s.v.x, s.v.y, s.v.z, s.v.norm(), ratio});
    }
    csv.close();
    rep.files.push_back("jump_demo.csv");

    std::ostringstream sum;
    sum << "pre_amplitude=" << res.pre_amplitude << " post_amplitude=" << res.post_amplitude
        << " suppression=" << res.post_amplitude / res.pre_amplitude;
    rep.summary = sum.str();
    rep.flagged = res.trajectory.flagged ? 1 : 0;
    return rep;
}

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

RunReport run_spectrum(const ScenarioConfig& cfg) {
    require(cfg.gamma > 0.0, "gamma > 0");
    require(cfg.trains >= 1, "trains >= 1");
    require(cfg.omega0 > 0.0, "omega0 > 0");

    const double gamma = cfg.gamma * cfg.omega0;
    twolevel::SpectrumOptions sopt;
    twolevel::Spectrum total;
    total.omega.resize(sopt.bins);
    total.power.assign(sopt.bins, 0.0);
    const double w = sopt.half_width_in_gamma * gamma;
    for (int i = 0; i < sopt.bins; ++i)
        total.omega[i] = cfg.omega0 - w + 2.0 * w * i / (sopt.bins - 1);

    // Fixed chunking; per-chunk partial spectra are summed in chunk order, so
    // the result is independent of the worker count. Train i draws its
    // duration from the child generator (seed, i).
    constexpr int kChunk = 512;
    const int n_chunks = (cfg.trains + kChunk - 1) / kChunk;
    std::vector<std::vector<double>> partial(n_chunks, std::vector<double>(sopt.bins, 0.0));

    const auto do_chunk = [&](int c) {
        twolevel::Spectrum s;
        s.omega = total.omega;
        s.power.assign(sopt.bins, 0.0);
        const int lo = c * kChunk, hi = std::min(cfg.trains, lo + kChunk);
        for (int i = lo; i < hi; ++i) {
            Rng r = Rng::child(cfg.seed, static_cast<std::uint64_t>(i));
            const double tau = -std::log(r.uniform()) / (0.5 * gamma);
            twolevel::accumulate_train(s, cfg.omega0, tau);
        }
        partial[c] = std::move(s.power);
    };

    if (cfg.workers <= 1) {
        for (int c = 0; c < n_chunks; ++c) do_chunk(c);
    } else {
        std::vector<std::thread> pool;
        std::atomic_int next{0};
        for (int w2 = 0; w2 < cfg.workers; ++w2)
            pool.emplace_back([&] {
                for (int c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) do_chunk(c);
            });
        for (auto& th : pool) th.join();
    }
    for (int c = 0; c < n_chunks; ++c)
        for (int i = 0; i < sopt.bins; ++i) total.power[i] += partial[c][i];
    for (double& p : total.power) p /= cfg.trains;

    const twolevel::LorentzianFit fit = twolevel::fit_lorentzian(total);
    const double ks = twolevel::ks_distance_lorentzian(total, cfg.omega0, gamma);

    RunReport rep;
    io::CsvFile csv(cfg.out / "spectrum.csv");
    csv.header({"omega", "power"});
    for (std::size_t i = 0; i < total.omega.size(); ++i)
        csv.row_values({total.omega[i], total.power[i]});
    csv.close();
    rep.files.push_back("spectrum.csv");

    io::CsvFile fitcsv(cfg.out / "spectrum_fit.csv");
    fitcsv.header({"center", "fwhm", "gamma_target", "ks_distance", "trains"});
    fitcsv.row_values({fit.center, fit.fwhm, gamma, ks, static_cast<double>(cfg.trains)});
    fitcsv.close();
    rep.files.push_back("spectrum_fit.csv");

    std::ostringstream sum;
    sum << "fwhm=" << fit.fwhm << " gamma=" << gamma << " rel_err="
        << std::abs(fit.fwhm - gamma) / gamma << " ks=" << ks;
    rep.summary = sum.str();
    return rep;
}

// ---------------------------------------------------------------------------
// Kemmer evolution
// ---------------------------------------------------------------------------

RunReport run_kemmer(const ScenarioConfig& cfg) {
    require(cfg.resolution >= 8, "resolution >= 8 nodes per wavelength");
    require(cfg.periods > 0.0, "periods > 0");

    const int n = cfg.resolution;
    const double h = 1.0 / n;
    kemmer::KemmerGrid grid(n, 8, 8, h, kemmer::Boundary::Periodic);
    kemmer::add_plane_wave(grid, 1, 0, 0, {0.0, 0.0, 1.0}, 1.0);
    const kemmer::KemmerGrid initial = grid;

    const double dt = 0.4 * h;
    const int steps = static_cast<int>(std::llround(cfg.periods / dt));
    kemmer::EvolveOptions eopt;
    eopt.threads = cfg.workers;
    int flagged = 0;
    try {
        kemmer::evolve(grid, kemmer::KemmerSource::none(), dt, steps, eopt);
    } catch (const kemmer::EvolveError&) {
        flagged = 1;
    }
    const double final_time = steps * dt;
    kemmer::KemmerGrid expected(n, 8, 8, h, kemmer::Boundary::Periodic);
    kemmer::add_plane_wave(expected, 1, 0, 0, {0.0, 0.0, 1.0}, 1.0, final_time);
    const double err = kemmer::l2_diff(grid, expected) / kemmer::l2_norm(expected);

    RunReport rep;
    io::CsvFile csv(cfg.out / "kemmer_snapshot.csv");
    std::vector<std::string> head = {"i", "j", "k"};
    static const char* comp_names[] = {"Ex", "Ey", "Ez", "Bx", "By", "Bz", "Ax", "Ay", "Az",
                                       "phi", "padEx", "padEy", "padEz", "padBx", "padBy",
                                       "padBz", "padAx", "padAy", "padAz", "padPhi"};
    for (const char* c : comp_names) head.emplace_back(c);
    csv.header(head);
    for (int i = 0; i < grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j)
            for (int k = 0; k < grid.nz(); ++k) {
                std::vector<double> v = {static_cast<double>(i), static_cast<double>(j),
                                         static_cast<double>(k)};
                for (int c = 0; c < kemmer::kComponents; ++c)
                    v.push_back(grid.at(static_cast<kemmer::Component>(c), i, j, k));
                csv.row_values(v);
            }
    csv.close();
    rep.files.push_back("kemmer_snapshot.csv");

    // Ez heat map on the k = nz/2 slice.
    io::SvgPlot heat(0, grid.nx(), 0, grid.ny(), 640, 640 * grid.ny() / grid.nx());
    double vmax = 1e-300;
    for (int i = 0; i < grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j)
            vmax = std::max(vmax, std::abs(grid.at(kemmer::Component::Ez, i, j, grid.nz() / 2)));
    for (int i = 0; i < grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j) {
            const double v = grid.at(kemmer::Component::Ez, i, j, grid.nz() / 2) / vmax;
            const int red = static_cast<int>(std::lround(127.5 * (1.0 + v)));
            const int blue = 255 - red;
            std::ostringstream color;
            color << "rgb(" << red << ",64," << blue << ")";
            heat.rect(i, j, i + 1.0, j + 1.0, color.str());
        }
    heat.save(cfg.out / "kemmer_slice.svg");
    rep.files.push_back("kemmer_slice.svg");

    std::ostringstream sum;
    sum << "resolution=" << n << " periods=" << cfg.periods << " roundtrip_l2_rel=" << err;
    rep.summary = sum.str();
    rep.flagged = flagged;
    return rep;
}

// ---------------------------------------------------------------------------
// Field map
// ---------------------------------------------------------------------------

RunReport run_field_map(const ScenarioConfig& cfg) {
    require(cfg.map_samples >= 2, "map_samples >= 2");
    require(cfg.map_extent > 0.0, "map_extent > 0");

    const ChargeKinematics source =
        make_harmonic_charge(1.0, {}, {0.0, 0.0, 1.0}, 0.05, 2.0 * kPi);

    RunReport rep;
    io::CsvFile csv(cfg.out / "field_map.csv");
    csv.header({"x", "y", "z", "t", "Eatt_x", "Eatt_y", "Eatt_z", "Batt_x", "Batt_y", "Batt_z",
                "Efree_x", "Efree_y", "Efree_z", "Bfree_x", "Bfree_y", "Bfree_z"});
    const int m = cfg.map_samples;
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < m; ++k) {
            const double x = -cfg.map_extent + 2.0 * cfg.map_extent * i / (m - 1);
            const double z = -cfg.map_extent + 2.0 * cfg.map_extent * k / (m - 1);
            const Vec3 r{x, 0.0, z};
            if (r.norm() < 0.1) continue;  // skip the near-singular core
            const fields::FieldSample fs = fields::lienard_wiechert(source, r, cfg.map_time);
            csv.row_values({x, 0.0, z, cfg.map_time, fs.E_att.x, fs.E_att.y, fs.E_att.z,
                            fs.B_att.x, fs.B_att.y, fs.B_att.z, fs.E_free.x, fs.E_free.y,
                            fs.E_free.z, fs.B_free.x, fs.B_free.y, fs.B_free.z});
        }
    }
    csv.close();
    rep.files.push_back("field_map.csv");
    rep.summary = "samples=" + std::to_string(m * m);
    return rep;
}

// ---------------------------------------------------------------------------
// Dispersion scan
// ---------------------------------------------------------------------------

RunReport run_dispersion(const ScenarioConfig& cfg) {
    require(cfg.scan_points >= 2, "scan_points >= 2");
    require(cfg.omega0 > 0.0, "omega0 > 0");

    const double q = 0.05, m = 1.0;
    const double nu0 = cfg.omega0;
    const double gamma = twolevel::radiative_gamma(q, m, nu0);
    const double lambda = 2.0 * kPi / nu0;

    RunReport rep;
    io::CsvFile csv(cfg.out / "dispersion.csv");
    csv.header({"nu", "phase", "cross_section", "x_re", "x_im"});
    for (int i = 0; i < cfg.scan_points; ++i) {
        const double nu = nu0 * (0.7 + 0.6 * i / (cfg.scan_points - 1));
        const auto resp = twolevel::dispersion_response(1.0, nu, nu0, gamma, q, m);
        csv.row_values({nu, resp.phase, resp.cross_section, resp.x.real(), resp.x.imag()});
    }
    csv.close();
    rep.files.push_back("dispersion.csv");

    const auto res = twolevel::dispersion_response(1.0, nu0, nu0, gamma, q, m);
    std::ostringstream sum;
    sum << "sigma_res_over_lambda2=" << res.cross_section / (lambda * lambda)
        << " expected=" << 3.0 / (2.0 * kPi);
    rep.summary = sum.str();
    return rep;
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& config) {
    RunReport rep;
    try {
        std::filesystem::create_directories(config.out);
        require(config.workers >= 1, "workers >= 1");
        if (config.scenario == "figure1") rep = run_figures(config, kPi / 4.0);
        else if (config.scenario == "figure2") rep = run_figures(config, -kPi / 4.0);
        else if (config.scenario == "phase-sweep") rep = run_phase_sweep(config);
        else if (config.scenario == "spectrum") rep = run_spectrum(config);
        else if (config.scenario == "kemmer-evolve") rep = run_kemmer(config);
        else if (config.scenario == "field-map") rep = run_field_map(config);
        else if (config.scenario == "jump-demo") rep = run_jump_demo_scenario(config);
        else if (config.scenario == "dispersion-scan") rep = run_dispersion(config);
        else {
            rep.exit_code = 2;
            rep.summary = "unknown scenario: " + config.scenario;
            return rep;
        }
    } catch (const ParameterError& e) {
        rep.exit_code = 2;
        rep.summary = e.what();
        return rep;
    } catch (const std::exception& e) {
        rep.exit_code = 3;
        rep.summary = std::string("error: ") + e.what();
        return rep;
    }

    io::write_manifest(config.out, rep.files, rep.summary);
    rep.files.push_back("manifest.txt");
    if (rep.flagged > 0 && !config.allow_flags) rep.exit_code = 1;
    return rep;
}

// ---------------------------------------------------------------------------
// Verification report
// ---------------------------------------------------------------------------

namespace {

VerifyCheck check_maxwell_residuals() {
    VerifyCheck c{"maxwell-residuals", false, 0.0, ""};
    const ChargeKinematics src = make_harmonic_charge(1.0, {}, {0, 0, 1}, 0.04, 2.0 * kPi);
    const Vec3 pts[] = {{5.3, 0.4, 0.8}, {-6.1, 1.0, -5.2}, {0.3, 7.9, 2.2}};
    const double t0 = 0.37;

    double worst_fine = 0.0, worst_ratio_inv = 0.0;
    for (const Vec3& p : pts) {
        for (double delta : {0.02, 0.01}) {
            // 4th-order centered first derivatives on a 4-point stencil.
            const auto d1 = [&](auto&& f, int axis_or_time) {
                Vec3 e{};
                double dtv = 0.0;
                if (axis_or_time == 3) dtv = 1.0;
                else if (axis_or_time == 0) e = {1, 0, 0};
                else if (axis_or_time == 1) e = {0, 1, 0};
                else e = {0, 0, 1};
                const auto at = [&](double s) {
                    return f(p + e * (s * delta), t0 + dtv * s * delta);
                };
                return (8.0 * (at(1) - at(-1)) - (at(2) - at(-2))) / (12.0 * delta);
            };
            const auto Ec = [&](const Vec3& r, double t) {
                return fields::lienard_wiechert(src, r, t).E_total();
            };
            const auto Bc = [&](const Vec3& r, double t) {
                return fields::lienard_wiechert(src, r, t).B_total();
            };
            const double divE = d1([&](const Vec3& r, double t) { return Ec(r, t).x; }, 0) +
                                d1([&](const Vec3& r, double t) { return Ec(r, t).y; }, 1) +
                                d1([&](const Vec3& r, double t) { return Ec(r, t).z; }, 2);
            const double divB = d1([&](const Vec3& r, double t) { return Bc(r, t).x; }, 0) +
                                d1([&](const Vec3& r, double t) { return Bc(r, t).y; }, 1) +
                                d1([&](const Vec3& r, double t) { return Bc(r, t).z; }, 2);
            // Faraday: dB/dt + curl E = 0, z component.
            const double far_z = d1([&](const Vec3& r, double t) { return Bc(r, t).z; }, 3) +
                                 d1([&](const Vec3& r, double t) { return Ec(r, t).y; }, 0) -
                                 d1([&](const Vec3& r, double t) { return Ec(r, t).x; }, 1);
            const double scale =
                fields::lienard_wiechert(src, p, t0).E_total().norm() * 2.0 * kPi + 1e-30;
            const double res = std::max({std::abs(divE), std::abs(divB), std::abs(far_z)}) / scale;
            if (delta == 0.01) worst_fine = std::max(worst_fine, res);
            else worst_ratio_inv = std::max(worst_ratio_inv, res);
        }
    }
    c.metric = worst_fine;
    c.passed = worst_fine < 1e-4;
    std::ostringstream d;
    d << "normalized residual at delta=0.01: " << worst_fine << " (coarse " << worst_ratio_inv
      << ")";
    c.detail = d.str();
    return c;
}

VerifyCheck check_covariant_oracle(bool flip_efree) {
    VerifyCheck c{"covariant-oracle", false, 0.0, ""};
    Rng rng(20240719);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Vec3 axis = normalized(
            {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
        const double omega = rng.uniform(1.0, 8.0);
        const double amp = rng.uniform(0.01, 0.5) / omega;  // peak speed <= 0.5
        const ChargeKinematics src =
            make_harmonic_charge(rng.uniform(0.2, 2.0), {}, axis, amp, omega, rng.uniform(0, 6));
        const Vec3 r{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
        if (r.norm() < 1.0) continue;
        const double t = rng.uniform(0, 10);

        fields::FieldSample fs = fields::lienard_wiechert(src, r, t);
        if (flip_efree) {
            fs.E_free = -fs.E_free;
        }
        const auto cov = fields::covariant_tensors(src, {t, r});
        const Vec3 Ec = fields::tensor_E(cov.F_att) + fields::tensor_E(cov.F_free);
        const Vec3 Bc = fields::tensor_B(cov.F_att) + fields::tensor_B(cov.F_free);
        const double scale = Ec.norm() + Bc.norm() + 1e-300;
        const double err =
            ((Ec - fs.E_total()).norm() + (Bc - fs.B_total()).norm()) / scale;
        worst = std::max(worst, err);
    }
    c.metric = worst;
    c.passed = worst < 1e-9;
    c.detail = "max relative E,B mismatch over 200 random cases";
    return c;
}

VerifyCheck check_speed_bound() {
    VerifyCheck c{"guidance-speed-bound", false, 0.0, ""};
    Rng rng(77);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const Vec3 E{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const Vec3 B{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (E.norm2() + B.norm2() == 0.0) continue;
        worst = std::max(worst, guidance::photon_velocity(E, B).norm());
    }
    const double plane = guidance::photon_velocity({0, 0, 1}, {0, -1, 0}).norm();
    c.metric = worst;
    c.passed = worst <= 1.0 + 1e-12 && std::abs(plane - 1.0) < 1e-15;
    std::ostringstream d;
    d << "max |v| = " << worst << ", plane wave |v| - 1 = " << plane - 1.0;
    c.detail = d.str();
    return c;
}

VerifyCheck check_hydrogen_qv() {
    VerifyCheck c{"hydrogen-qv-constancy", false, 0.0, ""};
    guidance::Hydrogen1s psi;
    double worst = 0.0;
    for (double r = 0.2; r <= 12.0; r += 0.2) {
        const Vec3 p{r / std::sqrt(3.0), r / std::sqrt(3.0), r / std::sqrt(3.0)};
        const double Q = guidance::quantum_potential_analytic(psi, p);
        const double V = -1.0 / r;
        worst = std::max(worst, std::abs(Q + V + 0.5));
    }
    const Vec3 v = guidance::electron_velocity(psi, {}, {1.3, -0.4, 0.7});
    c.metric = worst;
    c.passed = worst < 1e-8 && v.norm() == 0.0;
    std::ostringstream d;
    d << "max |Q + V - E| = " << worst << ", stationary |v| = " << v.norm();
    c.detail = d.str();
    return c;
}

// Brute-force permutation norm of the symmetrized product with orthonormal
// single-particle states: counts matching permutation pairs.
double brute_force_pair_count(const std::vector<int>& occ) {
    std::vector<int> labels;
    for (std::size_t s = 0; s < occ.size(); ++s)
        for (int k = 0; k < occ[s]; ++k) labels.push_back(static_cast<int>(s));
    std::vector<int> order(labels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    std::vector<std::vector<int>> seqs;
    std::sort(order.begin(), order.end());
    do {
        std::vector<int> seq(labels.size());
        for (std::size_t i = 0; i < order.size(); ++i) seq[i] = labels[order[i]];
        seqs.push_back(std::move(seq));
    } while (std::next_permutation(order.begin(), order.end()));

    double pairs = 0.0;
    for (const auto& a : seqs)
        for (const auto& b : seqs)
            if (a == b) pairs += 1.0;
    return pairs;
}

void enumerate_occupancies(int n_left, int max_part, std::vector<int>& cur,
                           std::vector<std::vector<int>>& out) {
    if (n_left == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = std::min(n_left, max_part); p >= 1; --p) {
        cur.push_back(p);
        enumerate_occupancies(n_left - p, p, cur, out);
        cur.pop_back();
    }
}

VerifyCheck check_symmetrization() {
    VerifyCheck c{"symmetrization-bruteforce", false, 0.0, ""};
    double worst = 0.0;
    int cases = 0;
    for (int N = 1; N <= 6; ++N) {
        std::vector<std::vector<int>> occs;
        std::vector<int> cur;
        enumerate_occupancies(N, N, cur, occs);
        for (const auto& occ : occs) {
            const double nf = twolevel::symmetrized_norm(occ);
            const double pairs = brute_force_pair_count(occ);
            worst = std::max(worst, std::abs(nf * nf * pairs - 1.0));
            ++cases;
        }
    }
    c.metric = worst;
    c.passed = worst < 1e-12;
    c.detail = "max |norm^2 * pair count - 1| over " + std::to_string(cases) + " patterns";
    return c;
}

VerifyCheck check_kemmer_leapfrog(bool quick) {
    VerifyCheck c{"kemmer-vs-leapfrog", false, 0.0, ""};
    const int n = quick ? 16 : 32;
    const double h = 1.0 / n;
    kemmer::KemmerGrid rk(n, n, 8, h, kemmer::Boundary::Periodic);
    kemmer::add_plane_wave(rk, 1, 0, 0, {0.0, 0.0, 1.0}, 1.0);
    kemmer::add_plane_wave(rk, 0, 1, 0, {0.0, 0.0, 1.0}, 0.7);
    kemmer::KemmerGrid lf = rk;

    const double dt = 0.4 * h;
    const int steps = quick ? 50 : 100;
    const int refine = quick ? 32 : 192;
    kemmer::evolve(rk, kemmer::KemmerSource::none(), dt, steps);
    reference::leapfrog_evolve(lf, dt / refine, steps * refine);

    const double err = kemmer::l2_diff(rk, lf) / kemmer::l2_norm(lf);
    c.metric = err;
    c.passed = err < (quick ? 1e-4 : 1e-6);  // the quick reference runs at a coarser dt
    c.detail = "relative L2 difference after " + std::to_string(steps) + " RK4 steps";
    return c;
}

}  // namespace

std::vector<VerifyCheck> verify(std::ostream& os, const VerifyOptions& opts) {
    std::vector<VerifyCheck> checks;
    checks.push_back(check_maxwell_residuals());
    checks.push_back(check_covariant_oracle(opts.flip_efree_sign));
    checks.push_back(check_speed_bound());
    checks.push_back(check_hydrogen_qv());
    checks.push_back(check_symmetrization());
    checks.push_back(check_kemmer_leapfrog(opts.quick));

    for (const auto& c : checks)
        os << c.name << " " << (c.passed ? "PASS" : "FAIL") << " metric=" << c.metric << " # "
           << c.detail << "\n";
    return checks;
}

}  // namespace pw::cli

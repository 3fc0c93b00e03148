#include "pilotwave/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace pw::traj {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};
}  // namespace

Vec3 ScenarioField::incident_E(const Vec3& r, double t) const {
    const double phase = omega * (dot(k_hat, r) - t);
    return polarization * (E0 * std::cos(phase));
}

void ScenarioField::total_fields(const Vec3& r, double t, Vec3& E, Vec3& B) const {
    E = Vec3{};
    B = Vec3{};
    if (include_incident) {
        E = incident_E(r, t);
        B = cross(k_hat, E);
    }
    if (dipole.p0 != 0.0) {
        const fields::FieldSample d = fields::dipole_fields(dipole, r, t);
        E += d.E_total();
        B += d.B_total();
    }
}

void ScenarioField::phasor_fields(const Vec3& r, CVec3& E, CVec3& B) const {
    E = CVec3{};
    B = CVec3{};
    if (include_incident) {
        const std::complex<double> u = E0 * std::exp(kI * (omega * dot(k_hat, r)));
        E = CVec3(polarization) * u;
        B = CVec3(cross(k_hat, polarization)) * u;
    }
    if (dipole.p0 != 0.0) {
        const Vec3 d = r - dipole.origin;
        const double dist = d.norm();
        if (dist < fields::kSingularityRadius)
            throw fields::SingularityError("phasor_fields: evaluation at the dipole");
        const Vec3 rhat = d / dist;
        const Vec3 ahat = normalized(dipole.axis);
        const double cos_t = dot(rhat, ahat);
        const Vec3 sin_theta_hat = rhat * cos_t - ahat;
        const Vec3 sin_phi_hat = cross(ahat, rhat);

        // p(t - r) = Re[p_ph e^{-i omega t}] with p_ph = p0 e^{i(omega r + delta)};
        // each time derivative multiplies the phasor by -i omega.
        const std::complex<double> p_ph =
            dipole.p0 * std::exp(kI * (omega * dist + dipole.delta));
        const std::complex<double> pd_ph = -kI * omega * p_ph;
        const std::complex<double> pdd_ph = -omega * omega * p_ph;

        E = E +
            CVec3(rhat * (3.0 * cos_t) - ahat) *
                (p_ph / (dist * dist * dist) + pd_ph / (dist * dist)) +
            CVec3(sin_theta_hat) * (pdd_ph / dist);
        B = B + CVec3(sin_phi_hat) * (pd_ph / (dist * dist) + pdd_ph / dist);
    }
}

ScenarioField make_figure_scenario(double delta, double strength, double E0) {
    ScenarioField f;
    f.E0 = E0;
    f.dipole.origin = Vec3{};
    f.dipole.axis = f.polarization;
    f.dipole.omega = f.omega;
    f.dipole.delta = delta + 0.5 * kPi;  // lag = pi/2 + delta
    // Driven-oscillator amplitude scale: |E_scat| ~ |E_inc| at r ~ lambda/4.
    f.dipole.p0 = strength * 1.5 * E0 / (f.omega * f.omega * f.omega);
    return f;
}

namespace {

Vec3 guidance_velocity(const ScenarioField& field, const Vec3& r, double t) {
    if (field.guidance == GuidanceMode::Instantaneous) {
        Vec3 E, B;
        field.total_fields(r, t, E, B);
        return guidance::photon_velocity(E, B);
    }
    CVec3 E, B;
    field.phasor_fields(r, E, B);
    return guidance::photon_velocity_phasor(E, B);
}

// One classical RK4 step; throws GuidanceError at field zeros.
Vec3 rk4_photon(const ScenarioField& field, const Vec3& r, double t, double dt) {
    const Vec3 k1 = guidance_velocity(field, r, t);
    const Vec3 k2 = guidance_velocity(field, r + k1 * (0.5 * dt), t + 0.5 * dt);
    const Vec3 k3 = guidance_velocity(field, r + k2 * (0.5 * dt), t + 0.5 * dt);
    const Vec3 k4 = guidance_velocity(field, r + k3 * dt, t + dt);
    return r + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
}

}  // namespace

PhotonTrajectory integrate_photon(const ScenarioField& field, const Vec3& r0, double t0,
                                  double dt, double t_max, const IntegratorOptions& opts) {
    const double period = 2.0 * kPi / field.omega;
    if (dt > period / 200.0)
        throw std::invalid_argument("integrate_photon: dt must be <= T/200");
    if ((r0 - field.dipole.origin).norm() < opts.r_abs)
        throw std::invalid_argument("integrate_photon: launch point inside absorption radius");

    PhotonTrajectory out;
    out.min_approach = (r0 - field.dipole.origin).norm();

    Vec3 r = r0;
    double t = t0;
    double step = dt;
    const double dt_max = dt;
    double theta_prev = std::atan2(r.z - field.dipole.origin.z, r.x - field.dipole.origin.x);

    const auto record = [&](const Vec3& v) {
        if (opts.record) out.samples.push_back({t, r, v});
    };

    {
        Vec3 v0{};
        try {
            v0 = guidance_velocity(field, r, t);
        } catch (const guidance::GuidanceError&) {
        }
        record(v0);
    }

    while (t < t_max) {
        step = std::min(step, t_max - t);
        if (step <= 0.0) break;

        Vec3 r_new;
        bool accepted = false;
        const double taken = step;
        try {
            const Vec3 full = rk4_photon(field, r, t, taken);
            const Vec3 h1 = rk4_photon(field, r, t, 0.5 * taken);
            const Vec3 h2 = rk4_photon(field, h1, t + 0.5 * taken, 0.5 * taken);
            const double err = (full - h2).norm();
            const double tol = opts.rtol * taken;
            if (err <= tol || taken <= opts.dt_min) {
                r_new = h2;
                accepted = true;
                if (err < tol / 32.0) step = std::min(2.0 * taken, dt_max);
            } else {
                step = 0.5 * taken;
            }
        } catch (const guidance::GuidanceError&) {
            // Guidance singularity: reject and halve; give up below dt_min.
            step = 0.5 * taken;
            if (step < opts.dt_min) {
                out.singular = true;
                break;
            }
            continue;
        }
        if (!accepted) continue;

        t += taken;
        r = r_new;

        const Vec3 d = r - field.dipole.origin;
        const double dist = d.norm();
        out.min_approach = std::min(out.min_approach, dist);

        const double theta = std::atan2(d.z, d.x);
        double dtheta = theta - theta_prev;
        while (dtheta > kPi) dtheta -= 2.0 * kPi;
        while (dtheta < -kPi) dtheta += 2.0 * kPi;
        out.winding += dtheta / (2.0 * kPi);
        theta_prev = theta;

        Vec3 v_now{};
        try {
            v_now = guidance_velocity(field, r, t);
        } catch (const guidance::GuidanceError&) {
        }
        record(v_now);

        if (dist < opts.r_abs) {
            out.termination = Termination::Absorbed;
            return out;
        }
        if (r.norm() > opts.r_escape && dot(v_now, r) > 0.0) {
            out.termination = Termination::Escaped;
            return out;
        }
    }
    out.termination = Termination::MaxTime;
    return out;
}

int EnsembleResult::max_orbits() const {
    int best = 0;
    for (const auto& tr : trajectories)
        best = std::max(best, static_cast<int>(std::floor(std::abs(tr.winding))));
    return best;
}

EnsembleResult run_figure_ensemble(const ScenarioField& field, int n_photons, double b_min,
                                   double b_max, double t_max, double dt,
                                   const IntegratorOptions& opts, int workers) {
    if (n_photons < 1) throw std::invalid_argument("run_figure_ensemble: need n_photons >= 1");
    EnsembleResult res;
    res.trajectories.resize(n_photons);

    const auto run_range = [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            // Grid midpoints: avoids launching exactly on the axis.
            const double b = b_min + (b_max - b_min) * (i + 0.5) / n_photons;
            const Vec3 r0{-2.0, 0.0, b};
            PhotonTrajectory tr = integrate_photon(field, r0, 0.0, dt, t_max, opts);
            tr.launch_b = b;
            res.trajectories[i] = std::move(tr);
        }
    };

    workers = std::max(1, workers);
    if (workers == 1 || n_photons < 2) {
        run_range(0, n_photons);
    } else {
        std::vector<std::thread> pool;
        const int per = (n_photons + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int lo = w * per, hi = std::min(n_photons, lo + per);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    for (const auto& tr : res.trajectories) {
        if (tr.singular) ++res.singular;
        switch (tr.termination) {
            case Termination::Absorbed: ++res.absorbed; break;
            case Termination::Escaped: ++res.escaped; break;
            case Termination::MaxTime: ++res.timed_out; break;
        }
    }
    return res;
}

ElectronTrajectory electron_trajectory(const guidance::ElectronWaveFunction& psi, const Vec3& r0,
                                       double t0, double dt, double t_max) {
    ElectronTrajectory out;
    Vec3 r = r0;
    double t = t0;
    double step = dt;
    constexpr double dt_min = 1e-9;

    const auto vel = [&](const Vec3& p, double tt) {
        return guidance::electron_velocity(psi, Vec3{}, p, tt);
    };

    try {
        out.samples.push_back({t, r, vel(r, t)});
    } catch (const guidance::GuidanceError&) {
        out.flagged = true;
        return out;
    }

    while (t < t_max - 1e-12) {
        step = std::min(step, t_max - t);
        try {
            const Vec3 k1 = vel(r, t);
            const Vec3 k2 = vel(r + k1 * (0.5 * step), t + 0.5 * step);
            const Vec3 k3 = vel(r + k2 * (0.5 * step), t + 0.5 * step);
            const Vec3 k4 = vel(r + k3 * step, t + step);
            r += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (step / 6.0);
            t += step;
            out.samples.push_back({t, r, vel(r, t)});
            step = std::min(2.0 * step, dt);
        } catch (const guidance::GuidanceError&) {
            step *= 0.5;
            if (step < dt_min) {
                out.flagged = true;
                break;
            }
        }
    }
    return out;
}

JumpDemoResult run_jump_demo(const JumpDemoConfig& cfg) {
    const double T = 2.0 * kPi / guidance::kHydrogenOmega0;
    const double tj = cfg.t_jump;

    // Ramp fraction: 0 before the switch, 1 one optical period later.
    const auto frac = [tj, T](double t) { return std::clamp((t - tj) / T, 0.0, 1.0); };
    const auto ratio = [&, cfg](double t) {
        return cfg.ratio_start * std::pow(cfg.ratio_end / cfg.ratio_start, frac(t));
    };
    const auto a_e = [&, cfg](double t) {
        return cfg.a_e_initial * std::pow(cfg.a_e_final / cfg.a_e_initial, frac(t));
    };
    const auto a_g = [&](double t) {
        const double ae = a_e(t);
        return std::sqrt(std::max(0.0, 1.0 - ae * ae));
    };

    const std::complex<double> I(0.0, 1.0);
    guidance::WeightedTwoState mixture(
        std::make_shared<guidance::Hydrogen2pz>(), std::make_shared<guidance::Hydrogen1s>(),
        [&, I](double t) {
            return a_e(t) * std::exp(-I * guidance::kHydrogenE2p * t);  // G_att = 1
        },
        [&, I](double t) {
            return a_g(t) * (1.0 + ratio(t)) * std::exp(-I * guidance::kHydrogenE1s * t);
        });

    JumpDemoResult out;
    const double t0 = tj - cfg.periods_before * T;
    const double t1 = tj + cfg.periods_after * T;
    out.trajectory = electron_trajectory(mixture, cfg.r0, t0, cfg.dt, t1);

    out.speed.reserve(out.trajectory.samples.size());
    for (const auto& s : out.trajectory.samples) out.speed.push_back(s.v.norm());

    const auto window_peak = [&](double a, double b) {
        double peak = 0.0;
        for (const auto& s : out.trajectory.samples)
            if (s.t >= a && s.t <= b) peak = std::max(peak, s.v.norm());
        return peak;
    };
    out.pre_amplitude = window_peak(tj - T, tj);
    out.post_amplitude = window_peak(tj + T, tj + 2.0 * T);
    return out;
}

}  // namespace pw::traj

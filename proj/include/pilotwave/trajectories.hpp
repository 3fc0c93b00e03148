// trajectories.hpp - photon trajectories through superposed incident + dipole
// fields under the guidance condition, plus Bohmian electron trajectories.
//
// Scenario units: lengths in wavelengths, times in optical periods of the
// incident wave (lambda = 1, T = 1, omega = 2 pi, c = 1).

#pragma once

#include <memory>
#include <vector>

#include "pilotwave/fields.hpp"
#include "pilotwave/guidance.hpp"
#include "pilotwave/vec.hpp"

namespace pw::traj {

// Incident plane wave plus a coherently driven dipole at the origin. delta
// shifts the dipole lag around the resonance value pi/2: delta > 0 means a
// later dipole (above-resonance response, net absorber, attracts photons),
// delta < 0 an earlier one (below-resonance, repels), matching the
// dispersion-phase sign convention (positive phase = attractive).
//
// Guidance defaults to the instantaneous fields; the Phasor mode follows the
// stationary cycle-averaged flow of the monochromatic phasors instead
// (physical field = Re[phasor e^{-i omega t}]).
enum class GuidanceMode {
    Phasor,         // stationary flow of the monochromatic phasors (E*, B)
    Instantaneous,  // real fields at time t
};

struct ScenarioField {
    double E0 = 1.0;
    double omega = 2.0 * 3.14159265358979323846;
    Vec3 k_hat{1.0, 0.0, 0.0};
    Vec3 polarization{0.0, 0.0, 1.0};
    fields::DipoleSource dipole;
    bool include_incident = true;
    GuidanceMode guidance = GuidanceMode::Instantaneous;

    void total_fields(const Vec3& r, double t, Vec3& E, Vec3& B) const;
    // Phasors of the superposed incident + dipole (attached + free) fields.
    void phasor_fields(const Vec3& r, CVec3& E, CVec3& B) const;
    Vec3 incident_E(const Vec3& r, double t) const;
};

// Scenario with the dipole amplitude tied to the resonant driven-oscillator
// value p0 = (3/2) E0 / omega^3 times `strength`.
ScenarioField make_figure_scenario(double delta, double strength = 0.65, double E0 = 1.0);

enum class Termination { Absorbed, Escaped, MaxTime };

struct TrajectorySample {
    double t;
    Vec3 r, v;
};

struct PhotonTrajectory {
    std::vector<TrajectorySample> samples;
    Termination termination = Termination::MaxTime;
    double min_approach = 0.0;
    double winding = 0.0;   // accumulated angle about the origin in the x-z plane / 2 pi
    bool singular = false;  // guidance singularity forced the step below dt_min
    double launch_b = 0.0;  // impact parameter at launch
};

struct IntegratorOptions {
    double rtol = 1e-8;         // step-doubling error control, per step
    double r_abs = 0.02;        // absorption radius
    double r_escape = 5.0;      // escape sphere
    double dt_min = 1e-10;
    bool record = true;         // keep samples (off for dense ensembles)
};

// Adaptive RK4 (step doubling) on dr/dt = photon_velocity(E_total, B_total).
// dt is the initial and maximum step and must satisfy dt <= T/200.
PhotonTrajectory integrate_photon(const ScenarioField& field, const Vec3& r0, double t0,
                                  double dt, double t_max, const IntegratorOptions& opts = {});

struct EnsembleResult {
    std::vector<PhotonTrajectory> trajectories;
    int absorbed = 0, escaped = 0, timed_out = 0, singular = 0;
    double absorbed_fraction() const {
        return trajectories.empty() ? 0.0
                                    : static_cast<double>(absorbed) / trajectories.size();
    }
    int max_orbits() const;
};

// Launches n photons on a uniform transverse grid at x = -2 lambda with
// impact parameters spanning b_range (grid midpoints, so b = 0 is avoided),
// moving in +x through the scenario field.
EnsembleResult run_figure_ensemble(const ScenarioField& field, int n_photons, double b_min,
                                   double b_max, double t_max = 3.0, double dt = 1.0 / 256.0,
                                   const IntegratorOptions& opts = {}, int workers = 1);

// Bohmian electron trajectory r'(t) = v(r, t) for the given wave function
// (fixed-step RK4). Node encounters reject the step, halve dt and flag the
// trajectory when dt_min is reached.
struct ElectronTrajectory {
    std::vector<TrajectorySample> samples;
    bool flagged = false;
};
ElectronTrajectory electron_trajectory(const guidance::ElectronWaveFunction& psi, const Vec3& r0,
                                       double t0, double dt, double t_max);

// Quantum-jump demonstration: the electron is guided by the field-weighted
// mixture a_e psi_e G_att + a_g psi_g (G_free + G_att) while the
// free-to-attached ratio sweeps from ratio_start to ratio_end over one
// optical period 2 pi / omega0 centered at t_jump, and the excited amplitude
// completes its decay over the same window.
struct JumpDemoConfig {
    double ratio_start = 1e-2;
    double ratio_end = 1e2;
    double t_jump = 0.0;          // switch time; simulation runs around it
    double a_e_initial = 1.0 / 1.414213562373095;
    double a_e_final = 0.05;
    double dt = 0.05;
    double periods_before = 3.0;  // optical periods simulated before t_jump
    double periods_after = 3.0;
    Vec3 r0{1.0, 0.0, 1.0};
};
struct JumpDemoResult {
    ElectronTrajectory trajectory;
    double pre_amplitude = 0.0;   // peak |v| in the window one period before the switch
    double post_amplitude = 0.0;  // peak |v| in the window starting one period after it
    std::vector<double> speed;    // |v| at the sample times
};
JumpDemoResult run_jump_demo(const JumpDemoConfig& cfg = {});

}  // namespace pw::traj

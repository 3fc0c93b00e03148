// guidance.hpp - particle guidance conditions: photon velocity from the
// energy-flux ratio, Bohmian electron velocity, and the electron quantum
// potential. Atomic-style units inside this module: hbar = m_e = 1, so the
// hydrogenic closed forms are exact test oracles.

#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>

#include "pilotwave/kemmer.hpp"
#include "pilotwave/vec.hpp"

namespace pw::guidance {

struct GuidanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// v = 2 (E x B) / (E^2 + B^2). The factor 2 relative to the bare flux/energy
// ratio makes a vacuum plane wave move at exactly c = 1; |v| <= 1 always by
// Cauchy-Schwarz. A zero field has no defined direction and is an error.
Vec3 photon_velocity(const Vec3& E, const Vec3& B);

// Complex-field form of the same condition, v = 2 Re[E* x B] / (E*.E + B*.B),
// the cross-dot over energy-dot ratio. For the phasors of a monochromatic
// field this is the stationary (cycle-averaged) energy flow.
Vec3 photon_velocity_phasor(const CVec3& E, const CVec3& B);

// Entangled generalization: numerator and denominator are the cross-dot and
// energy-dot of the combined column
//   F = a_e psi_e Psi_att + a_g psi_g (Psi_free + Psi_att)
// evaluated at the electron and photon coordinates. Reduces to
// photon_velocity of the total field when the wave function factorizes.
struct EntangledFieldSample {
    std::complex<double> a_e, a_g;
    std::complex<double> psi_e, psi_g;  // electron wave function values at r_e
    Vec3 E_att, B_att;                  // attached fields at r_ph
    Vec3 E_free, B_free;                // free fields at r_ph
};
Vec3 photon_velocity_entangled(const EntangledFieldSample& s);

// ---------------------------------------------------------------------------
// Electron wave functions
// ---------------------------------------------------------------------------

class ElectronWaveFunction {
public:
    virtual ~ElectronWaveFunction() = default;
    virtual std::complex<double> value(const Vec3& r, double t) const = 0;
    virtual CVec3 gradient(const Vec3& r, double t) const = 0;
    // Laplacian is available analytically for the built-in states.
    virtual std::complex<double> laplacian(const Vec3& r, double t) const = 0;

    double mass = 1.0;
    double charge = 1.0;
};

// Hydrogenic states with a0 = 1: psi_1s = e^{-r}/sqrt(pi),
// psi_2pz = z e^{-r/2}/(4 sqrt(2 pi)). Energies -1/2 and -1/8.
class Hydrogen1s final : public ElectronWaveFunction {
public:
    std::complex<double> value(const Vec3& r, double t) const override;
    CVec3 gradient(const Vec3& r, double t) const override;
    std::complex<double> laplacian(const Vec3& r, double t) const override;
};

class Hydrogen2pz final : public ElectronWaveFunction {
public:
    std::complex<double> value(const Vec3& r, double t) const override;
    CVec3 gradient(const Vec3& r, double t) const override;
    std::complex<double> laplacian(const Vec3& r, double t) const override;
};

// psi = e^{i k.r}
class PlaneWaveState final : public ElectronWaveFunction {
public:
    explicit PlaneWaveState(Vec3 k) : k_(k) {}
    std::complex<double> value(const Vec3& r, double t) const override;
    CVec3 gradient(const Vec3& r, double t) const override;
    std::complex<double> laplacian(const Vec3& r, double t) const override;

private:
    Vec3 k_;
};

inline constexpr double kHydrogenE1s = -0.5;
inline constexpr double kHydrogenE2p = -0.125;
inline constexpr double kHydrogenOmega0 = kHydrogenE2p - kHydrogenE1s;  // 3/8

// Phi(r, t) = w_e(t) psi_e(r) + w_g(t) psi_g(r) with caller-supplied complex
// weights. Covers stationary superpositions (w = a e^{-iEt}) and the
// field-weighted mixtures of the quantum-jump scenario.
class WeightedTwoState final : public ElectronWaveFunction {
public:
    using Weight = std::function<std::complex<double>(double)>;
    WeightedTwoState(std::shared_ptr<const ElectronWaveFunction> psi_e,
                     std::shared_ptr<const ElectronWaveFunction> psi_g, Weight w_e, Weight w_g)
        : psi_e_(std::move(psi_e)), psi_g_(std::move(psi_g)), w_e_(std::move(w_e)),
          w_g_(std::move(w_g)) {}

    std::complex<double> value(const Vec3& r, double t) const override;
    CVec3 gradient(const Vec3& r, double t) const override;
    std::complex<double> laplacian(const Vec3& r, double t) const override;

private:
    std::shared_ptr<const ElectronWaveFunction> psi_e_, psi_g_;
    Weight w_e_, w_g_;
};

// Stationary two-level superposition a_e psi_2pz e^{-i E_e t} +
// a_g psi_1s e^{-i E_g t}.
std::shared_ptr<WeightedTwoState> make_hydrogen_superposition(std::complex<double> a_e,
                                                              std::complex<double> a_g);

// Eq.-style mixture with field weights: a_e psi_e G_att + a_g psi_g
// (G_free + G_att), with the time phases of the two levels included and the
// field magnitudes supplied as functions of time.
std::shared_ptr<WeightedTwoState> make_field_weighted_superposition(
    std::complex<double> a_e, std::complex<double> a_g, std::function<double(double)> G_att,
    std::function<double(double)> G_free);

// ---------------------------------------------------------------------------
// Guidance and quantum potential
// ---------------------------------------------------------------------------

// v = (1/m) Im(grad psi / psi) - (e/m) A. A node of psi leaves the velocity
// undefined and is an error.
Vec3 electron_velocity(const ElectronWaveFunction& psi, const Vec3& A, const Vec3& r,
                       double t = 0.0);

// Q = -(1/2m) lap(sqrt(rho)) / sqrt(rho) with a 4th-order stencil on the
// density; any non-positive density on the stencil is an error.
double quantum_potential_stencil(const std::function<double(const Vec3&)>& rho, const Vec3& r,
                                 double h, double mass);

// Analytic route for real non-negative states: Q = -(1/2m) lap(psi)/psi.
double quantum_potential_analytic(const ElectronWaveFunction& psi, const Vec3& r, double t = 0.0);

// The o-product density of the entangled column at fixed photon coordinate:
//   | a_e psi_e G_att + a_g psi_g (G_free + G_att) |^2
// In the attached-dominant limit the photon coordinate factors out; in the
// free-dominant limit only the ground term survives.
double effective_electron_density(std::complex<double> a_e, std::complex<double> a_g,
                                  std::complex<double> psi_e, std::complex<double> psi_g,
                                  double G_att, double G_free);

// ---------------------------------------------------------------------------
// Spherical quadrature (Gauss-Legendre x uniform azimuth) for wave-function
// averages
// ---------------------------------------------------------------------------

struct SphericalQuadrature {
    int n_r = 64, n_theta = 32, n_phi = 16;
    double r_max = 30.0;
};

// integral of f(r) rho(r) d^3r with rho = |psi|^2 (not normalized here).
double integrate_density(const ElectronWaveFunction& psi, double t,
                         const std::function<double(const Vec3&)>& f,
                         const SphericalQuadrature& q = {});

// mean velocity <v> = integral j d^3r with j = Im[psi* grad psi]/m.
Vec3 mean_velocity(const ElectronWaveFunction& psi, double t, const SphericalQuadrature& q = {});

// density-weighted mean speed: integral |j| d^3r / integral rho d^3r.
double mean_speed(const ElectronWaveFunction& psi, double t, const SphericalQuadrature& q = {});

}  // namespace pw::guidance

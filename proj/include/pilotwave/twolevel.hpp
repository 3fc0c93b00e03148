// twolevel.hpp - two-level-atom dynamics: amplitude equations with the
// radiative self-field, classical dispersion response and cross sections,
// emission-time statistics with the resulting Lorentzian spectra, and
// symmetrization bookkeeping for N identical photons.
//
// Units: natural, c = hbar = epsilon0 = 1. The radiative decay rate is always
// computed from the classical damping formula gamma = (2/3) q^2 omega0^2 / m,
// never set freely.

#pragma once

#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pilotwave/rng.hpp"
#include "pilotwave/vec.hpp"

namespace pw::twolevel {

struct TwoLevelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double radiative_gamma(double charge, double mass, double omega0);

struct TwoLevelState {
    std::complex<double> a_e{0.0, 0.0}, a_g{1.0, 0.0};
    double omega0 = 1.0;
    CVec3 p_eg;      // transition matrix element vector
    double gamma = 0.0;

    static TwoLevelState make(std::complex<double> a_e, std::complex<double> a_g, double omega0,
                              const CVec3& p_eg, double charge, double mass);
    double norm2() const { return std::norm(a_e) + std::norm(a_g); }
};

// Transverse self-field at the atom,
//   A_self = q v omega0 / (6 pi) [ i + (2/pi) ln(m / omega0) ],
// imaginary part in quadrature with the dipole motion (damping-related), real
// part in phase (level-shift-related). Requires omega0 > 0 and m > omega0.
struct SelfFieldParams {
    double charge = 1.0;
    double mass = 1.0;
};
CVec3 self_field_amplitude(const Vec3& v, double omega0, const SelfFieldParams& p);

// Amplitude equations
//   da_e/dt = a_g (A . p_eg),   da_g/dt = a_e (A . p_ge),  p_ge = p_eg*,
// where the dot is the plain (unconjugated) contraction. |a_e|^2 + |a_g|^2 is
// conserved when A . p_eg is purely imaginary (in-quadrature self-field, the
// steady regime).
std::pair<std::complex<double>, std::complex<double>> amplitude_rhs(const TwoLevelState& s,
                                                                    const CVec3& A);

// Eigenpairs of the 2x2 coupling [[0, k_e], [k_g, 0]] with k_e = A.p_eg and
// k_g = A.p_ge: the dressed steady solutions. Returns (eigenvalue,
// (a_e, a_g)) with unit-norm amplitudes.
struct DressedState {
    std::complex<double> eigenvalue;
    std::complex<double> a_e, a_g;
};
std::vector<DressedState> dressed_states(const TwoLevelState& s, const CVec3& A);

// Driven-oscillator response x = (q E0 / m) / (nu0^2 - nu^2 - i nu gamma).
// The phase is the dipole advance relative to the drive, reduced mod pi to
// (-pi/2, pi/2]: negative below resonance, +pi/2 at resonance (velocity in
// phase with the field), positive above. The cross section is the scattered
// dipole power over the incident intensity,
//   sigma(nu) = (8 pi / 3) (q^2/m)^2 nu^4 / ((nu0^2 - nu^2)^2 + gamma^2 nu^2),
// equal to (3/2pi) lambda^2 at resonance.
struct DispersionResponse {
    std::complex<double> x;
    double phase = 0.0;
    double cross_section = 0.0;
};
DispersionResponse dispersion_response(double E0, double nu, double nu0, double gamma,
                                       double charge = 1.0, double mass = 1.0);

// Exponential waiting time with mean 1/gamma.
double sample_emission_time(double gamma, Rng& rng);

// Ensemble power spectrum of truncated sinusoidal wave trains. Durations are
// exponential with rate gamma/2 (the field coherence time of a line of width
// gamma), which makes the ensemble-mean spectrum an exact Lorentzian of FWHM
// gamma centered at omega0.
struct Spectrum {
    std::vector<double> omega;
    std::vector<double> power;
};
struct SpectrumOptions {
    int bins = 801;
    double half_width_in_gamma = 8.0;
};
Spectrum spectrum_from_wavetrains(double gamma, double omega0, int n_trains, Rng& rng,
                                  const SpectrumOptions& opts = {});

// Accumulate one train of duration tau into `power` (used for sharded
// ensembles; spectrum_from_wavetrains sums these in train order).
void accumulate_train(Spectrum& s, double omega0, double tau);

struct LorentzianFit {
    double center = 0.0;
    double fwhm = 0.0;
};
LorentzianFit fit_lorentzian(const Spectrum& s);

// Kolmogorov-Smirnov distance between the normalized spectrum and the
// analytic Lorentzian of width gamma at omega0, both restricted to the
// spectrum band.
double ks_distance_lorentzian(const Spectrum& s, double omega0, double gamma);

// ---------------------------------------------------------------------------
// Symmetrization bookkeeping
// ---------------------------------------------------------------------------

// Normalization factor 1/sqrt(N! n_1! n_2! ...) of the symmetrized product of
// N = sum n_i bosons.
double symmetrized_norm(const std::vector<int>& occupancies);

// Uniform single-photon-removal combination Psi_{n-1} = sum_i Psi_{n-i} / n,
// rescaled to unit norm under the component Gram matrix
// gram[i][j] = <Psi_{n-i}|Psi_{n-j}>. An empty Gram means identical
// components (all-ones matrix), for which the uniform 1/n weights already
// have unit norm.
std::vector<double> photon_removal_average(int n,
                                           const std::vector<std::vector<double>>& gram = {});

// Norm of a weighted combination of removal components with the given Gram
// matrix.
double combination_norm(const std::vector<double>& weights,
                        const std::vector<std::vector<double>>& gram);

// Total absorption probability of the n-channel removal structure: the
// channels add incoherently, so n identical per-photon amplitudes give
// n x the single-photon probability.
double total_absorption_probability(const std::vector<std::complex<double>>& channel_amplitudes);

}  // namespace pw::twolevel

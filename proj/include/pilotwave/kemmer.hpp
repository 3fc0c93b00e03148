// kemmer.hpp - block-spinor form of Maxwell's equations on a uniform grid.
//
// A state column holds eight blocks per node, 20 components total:
//   (E, B, A, phi, 1, 1, 1, 1)
// The last four blocks are fixed all-ones pads; the evolution operator has
// zero rows there, so they never change. The component equations evolved are
//   dE/dt   =  curl B - j
//   dB/dt   = -curl E
//   dA/dt   = -E - grad phi
//   dphi/dt =  div A
// with 4th-order centered differences and RK4 time stepping.

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pilotwave/vec.hpp"

namespace pw::kemmer {

struct GridError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EvolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NormError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Point-wise state column and operator algebra
// ---------------------------------------------------------------------------

// One 20-component column at a point. Complex entries so bra/ket sandwiches
// with conjugation are expressible; grid states are real-valued views.
struct KemmerNode {
    CVec3 E, B, A;
    std::complex<double> phi{0.0, 0.0};
    CVec3 pad_E, pad_B, pad_A;
    std::complex<double> pad_phi{0.0, 0.0};
    bool vacuum = false;  // tagged with the null photon coordinate

    static KemmerNode standard(const CVec3& E, const CVec3& B, const CVec3& A = {},
                               std::complex<double> phi = 0.0);
    // Vacuum column: standard pads, null-coordinate tag; no real photon is
    // associated with it.
    static KemmerNode vacuum_state();
};

// bra^dag (neutral-dot) ket: picks the pad_phi . pad_phi entry; equals 1 for
// two standard columns.
std::complex<double> neutral_dot(const KemmerNode& bra, const KemmerNode& ket);

// bra^dag (energy-dot) ket = E*.E + B*.B, the "o" product that keeps E^2 and
// B^2 terms and drops E.B cross terms. For bra = ket real this is the
// electromagnetic energy density E^2 + B^2.
std::complex<double> energy_dot(const KemmerNode& bra, const KemmerNode& ket);

// bra^dag (cross-dot) ket = E* x B, proportional to the Poynting vector.
CVec3 cross_dot(const KemmerNode& bra, const KemmerNode& ket);

// Vector-potential ladder action: moves the A block into the pad_A slot,
// zeroing everything else. Applied to a vacuum column it gives the zero
// column (the null coordinate carries no photon).
KemmerNode apply_A(const KemmerNode& ket);

// Sandwiches: vac^dag A ket = A(r), bra^dag A^dag vac = A*(r). A vacuum ket
// (first form) or vacuum bra (second form) yields zero.
CVec3 extract_A(const KemmerNode& vacuum_bra, const KemmerNode& ket);
CVec3 extract_A_conj(const KemmerNode& bra, const KemmerNode& vacuum_ket);

// 20x20 matrix of the neutral-dot operator, for exact checks of
// hermiticity and idempotency.
using Mat20 = std::array<std::array<double, 20>, 20>;
Mat20 neutral_dot_matrix();

// ---------------------------------------------------------------------------
// Positive-definite density split for mixed-frequency modes
// ---------------------------------------------------------------------------

// With phi(x,t) = phi_plus e^{-iEt} + phi_minus e^{+iEt}, the naive density
//   j0 = |phi+|^2 - |phi-|^2 + phi+* phi- e^{2iEt} + cc
// is not positive definite; assigning the two modes to distinct particles
// gives the two positive densities |phi+|^2 and |phi-|^2.
struct DensitySplit {
    double j0_plus = 0.0;
    double j0_minus = 0.0;
    double naive = 0.0;
};
DensitySplit density_split_check(std::complex<double> phi_plus, std::complex<double> phi_minus,
                                 double energy, double t);

// ---------------------------------------------------------------------------
// Grid state and evolution
// ---------------------------------------------------------------------------

enum class Boundary { Periodic, Absorbing };

enum class Component : int {
    Ex = 0, Ey, Ez, Bx, By, Bz, Ax, Ay, Az, Phi,
    PadEx, PadEy, PadEz, PadBx, PadBy, PadBz, PadAx, PadAy, PadAz, PadPhi,
};
inline constexpr int kComponents = 20;

class KemmerGrid {
public:
    // Uniform grid of nx*ny*nz nodes with spacing h; node (i,j,k) sits at
    // origin + h*(i,j,k). Each dimension needs >= 5 nodes for the 4th-order
    // stencil (two ghost layers each side).
    KemmerGrid(int nx, int ny, int nz, double h, Boundary bc, Vec3 origin = {});

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int nz() const { return nz_; }
    double h() const { return h_; }
    Boundary boundary() const { return bc_; }
    const Vec3& origin() const { return origin_; }
    std::size_t nodes() const { return n_; }

    std::size_t flat(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * ny_ + j) * nz_ + k;
    }
    Vec3 node_position(int i, int j, int k) const {
        return origin_ + Vec3{i * h_, j * h_, k * h_};
    }

    double& at(Component c, int i, int j, int k) {
        return f_[static_cast<std::size_t>(c) * n_ + flat(i, j, k)];
    }
    double at(Component c, int i, int j, int k) const {
        return f_[static_cast<std::size_t>(c) * n_ + flat(i, j, k)];
    }
    double* component(Component c) { return f_.data() + static_cast<std::size_t>(c) * n_; }
    const double* component(Component c) const {
        return f_.data() + static_cast<std::size_t>(c) * n_;
    }

    Vec3 E_at(int i, int j, int k) const;
    Vec3 B_at(int i, int j, int k) const;
    Vec3 A_at(int i, int j, int k) const;
    double phi_at(int i, int j, int k) const;
    void set_E(int i, int j, int k, const Vec3& v);
    void set_B(int i, int j, int k, const Vec3& v);
    void set_A(int i, int j, int k, const Vec3& v);
    void set_phi(int i, int j, int k, double v);

    // Real-valued column view of one node (pads included).
    KemmerNode node(int i, int j, int k) const;

    const std::vector<double>& data() const { return f_; }
    std::vector<double>& data() { return f_; }

private:
    int nx_, ny_, nz_;
    std::size_t n_;
    double h_;
    Boundary bc_;
    Vec3 origin_;
    std::vector<double> f_;  // component-major: [c * n + node]
};

enum class SourceSplit { Attached, Free, Coherent, Incoherent };

// Current column (j_E, j_B, j_A, 0, ...). For point charges j_B = j_A = 0;
// only a sparse j_E profile with a separable time amplitude is supported:
// j_E(r, t) = amplitude(t) * profile(r).
struct KemmerSource {
    std::vector<std::pair<std::size_t, Vec3>> profile_E;  // (flat node, weight)
    std::function<double(double)> amplitude;              // time factor
    SourceSplit split = SourceSplit::Free;

    static KemmerSource none() { return {}; }
    bool empty() const { return profile_E.empty() || !amplitude; }
};

// Oscillating point dipole p(t) = p0 cos(omega t - delta) along `axis`,
// injected as j_E = 4 pi pdot(t) * G(r - center) * axis. The profile is a
// 3-cell Gaussian of width h, normalized on the grid, with the Gaussian form
// factor exp(+(omega sigma)^2/2) compensated so the radiated amplitude at the
// drive frequency matches the point dipole. turn_on_periods > 0 ramps the
// current up with a sin^2 envelope (a hard start radiates a dispersive
// transient wake on coarse grids).
KemmerSource make_smoothed_dipole_source(const KemmerGrid& grid, const Vec3& center,
                                         const Vec3& axis, double p0, double omega,
                                         double delta = 0.0, double turn_on_periods = 0.0);

// Time-derivative state of the component equations (source-free part); pad
// rates are exactly zero.
KemmerGrid apply_hamiltonian(const KemmerGrid& state);

struct EvolveOptions {
    int threads = 1;
    double start_time = 0.0;
};

// RK4 stepping of apply_hamiltonian plus source injection. Requires the CFL
// condition dt <= 0.5 h; detects non-finite values and reports the step.
void evolve(KemmerGrid& state, const KemmerSource& source, double dt, int steps,
            const EvolveOptions& opts = {});

// Grid quadrature h^3 sum of E^2 + B^2. Intended for free-field states: a
// steeply diverging near-source profile (attached part passed by mistake) is
// detected from the radial decay of shell-averaged energy density and raises
// NormError.
double free_norm(const KemmerGrid& state);

// Scales the physical blocks (E, B, A, phi) so that free_norm == 1. Pads are
// bookkeeping and stay at one.
void normalize_free(KemmerGrid& state);

double l2_norm(const KemmerGrid& g);
double l2_diff(const KemmerGrid& a, const KemmerGrid& b);

// Superposes the exact vacuum plane wave with integer mode counts (mx,my,mz)
// over the periodic box: k_i = 2 pi m_i / (n_i h), omega = |k|,
//   E = pol E0 cos(k.r - omega t), B = khat x E,
//   A = pol (E0/omega) sin(k.r - omega t), phi = 0.
// The polarization must be orthogonal to k.
void add_plane_wave(KemmerGrid& g, int mx, int my, int mz, const Vec3& pol, double E0,
                    double t = 0.0);

}  // namespace pw::kemmer

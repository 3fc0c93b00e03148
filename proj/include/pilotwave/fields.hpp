// fields.hpp - exact and dipole-approximation electromagnetic fields of point
// sources, split into attached (velocity) and free (acceleration) parts.
//
// Conventions: natural units c = 1, fields in the Gaussian-style normalization
// where a charge q at rest produces E = q rhat / r^2. Energy density and flux
// are rescaled as u = (E^2+B^2)/2 and S = E x B so that a vacuum plane wave
// has |S|/u = 1.

#pragma once

#include <stdexcept>
#include <utility>

#include "pilotwave/vec.hpp"
#include "pilotwave/worldline.hpp"

namespace pw::fields {

// Evaluation closer to the source than this is treated as on-worldline.
inline constexpr double kSingularityRadius = 1e-9;

struct RetardationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Electric and magnetic 3-vectors at a spacetime point, split into attached
// (velocity) and free (acceleration) parts.
struct FieldSample {
    Vec3 E_att, B_att, E_free, B_free;
    Vec3 position;
    double time = 0.0;

    Vec3 E_total() const { return E_att + E_free; }
    Vec3 B_total() const { return B_att + B_free; }
};

// Oscillating point dipole p(t) = p0 cos(omega t - delta) along `axis`,
// located at `origin`. omega = 0 gives a static dipole of moment p0.
struct DipoleSource {
    Vec3 origin;
    Vec3 axis{0.0, 0.0, 1.0};
    double p0 = 1.0;
    double omega = 0.0;
    double delta = 0.0;

    double p(double t) const { return p0 * std::cos(omega * t - delta); }
    double pdot(double t) const { return -p0 * omega * std::sin(omega * t - delta); }
    double pddot(double t) const { return -p0 * omega * omega * std::cos(omega * t - delta); }
};

// Solves t' = t - |r - z(t')| for the emission time on the past light cone.
// Damped Newton with a fixed-point fallback; the subluminal worldline makes
// the root unique. Absolute tolerance 1e-12, iteration cap 100.
double retarded_time(const ChargeKinematics& source, const Vec3& r, double t);

// Retarded quantities shared by the 3-vector and covariant evaluations.
struct RetardedFrame {
    double t_ret = 0.0;
    Vec3 n_hat;       // unit vector from retarded source position to field point
    double distance = 0.0;
    Vec3 vel, acc;    // source velocity and acceleration at t_ret
};
RetardedFrame retarded_frame(const ChargeKinematics& source, const Vec3& r, double t);

// Attached field per E_att = q (n - v) / (gamma^2 (1 - n.v)^3 r^2); free field
// per E_free = q n x {(n - v) x vdot} / ((1 - n.v)^3 r); B = n x E for each
// part, everything at the retarded time.
FieldSample lienard_wiechert(const ChargeKinematics& source, const Vec3& r, double t);

// Dipole-approximation fields:
//   E_att = (p/r^3 + pdot/r^2) (2 cos(theta) rhat + sin(theta) thetahat)
//   B_att = (pdot/r^2) sin(theta) phihat
//   E_free = (pddot/r) sin(theta) thetahat
//   B_free = (pddot/r) sin(theta) phihat
// with arguments retarded by t - r and theta measured from the dipole axis.
FieldSample dipole_fields(const DipoleSource& source, const Vec3& r, double t);

struct EnergyFlux {
    double u = 0.0;  // energy density
    Vec3 S;          // flux (Poynting) vector
};
inline EnergyFlux energy_and_flux(const Vec3& E, const Vec3& B) {
    return {0.5 * (E.norm2() + B.norm2()), cross(E, B)};
}

// Transverse-in-r projector: v - (v . rhat) rhat. Idempotent; output
// orthogonal to r. r = 0 is an error.
Vec3 project_transverse_r(const Vec3& v, const Vec3& r);

// Covariant field-strength tensors of the split, evaluated at the event
// x = (t, r). With u = x - z(s) on the past light cone, R = u.zdot and
// Q = u.zddot (four-velocity/-acceleration in the proper-time
// parametrization):
//   F_att^{mu nu}  = q/R^3 (u^mu zdot^nu - u^nu zdot^mu)
//   F_free^{mu nu} = q/R^3 [R (u^mu zddot^nu - u^nu zddot^mu)
//                           - Q (u^mu zdot^nu - u^nu zdot^mu)]
struct CovariantSplit {
    Mat4 F_free;
    Mat4 F_att;
};
CovariantSplit covariant_tensors(const ChargeKinematics& source, const FourVec& x);

// E and B extracted from a field-strength tensor: E_i = F^{i0},
// B = (F^{32}, F^{13}, F^{21}).
Vec3 tensor_E(const Mat4& F);
Vec3 tensor_B(const Mat4& F);

}  // namespace pw::fields

// reference.hpp - independent reference implementations used as oracles by
// the verification report and the test suites. Nothing here shares code with
// the primary evaluation paths: the retarded time is found by bisection
// instead of Newton, the total field uses the expanded unsplit formula, and
// the grid integrator is a staggered leapfrog instead of RK4.

#pragma once

#include "pilotwave/kemmer.hpp"
#include "pilotwave/vec.hpp"
#include "pilotwave/worldline.hpp"

namespace pw::reference {

// Total (unsplit) Lienard-Wiechert field via the triple-product expansion
//   E = q (n - v)/(gamma^2 k^3 r^2) + q [(n - v)(n.a) - a k]/(k^3 r),
//   B = n x E,  k = 1 - n.v,
// with the light-cone root bracketed and bisected to 1e-13.
void unsplit_lienard_wiechert(const ChargeKinematics& source, const Vec3& r, double t, Vec3& E,
                              Vec3& B);

// Staggered (leapfrog) integrator for the same component equations evolved by
// kemmer::evolve: E, phi live at integer steps, B, A at half steps. Second
// order in time; run it with a small dt as a converged reference.
void leapfrog_evolve(kemmer::KemmerGrid& state, double dt, int steps);

}  // namespace pw::reference

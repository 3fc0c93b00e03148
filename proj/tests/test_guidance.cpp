// Guidance conditions and the quantum potential. Closed-form oracles:
//   hydrogen 1s (a0 = 1): Q(r) = -(1/2)(1 - 2/r), Q + V = -1/2 everywhere;
//   hydrogen 2p: lap(psi)/psi = 1/4 - 2/r, so Q + V = -1/8;
//   gaussian density rho = e^{-r^2/sigma^2}: Q = (3/sigma^2 - r^2/sigma^4)/(2m);
//   1s <-> 2pz gradient matrix element: integral psi_1s d_z psi_2pz d^3r
//     = 16 sqrt(2)/81 (elementary integrals; evaluated below and cross-checked
//     by quadrature).

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pilotwave/fields.hpp"
#include "pilotwave/guidance.hpp"
#include "pilotwave/rng.hpp"

using namespace pw;
namespace G = pw::guidance;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};
}  // namespace

TEST_CASE("photon velocity: vacuum plane wave moves at c = 1") {
    const Vec3 v = G::photon_velocity({0, 0, 1}, {0, -1, 0});
    CHECK(v.x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v.y == doctest::Approx(0.0));
    CHECK(v.z == doctest::Approx(0.0));
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("photon velocity: zero field is an error") {
    CHECK_THROWS_AS(G::photon_velocity({0, 0, 0}, {0, 0, 0}), G::GuidanceError);
}

TEST_CASE("photon velocity: standing-wave structure keeps |v| < 1") {
    // E = 2 E0 cos(kx) zhat, B = 2 E0 sin(kx) yhat (superposed +-x waves,
    // captured at a time where both are nonzero away from nodes).
    for (double x : {0.1, 0.2, 0.4}) {
        const double k = 2.0 * kPi;
        const Vec3 E{0, 0, 2.0 * std::cos(k * x)};
        const Vec3 B{0, 2.0 * std::sin(k * x), 0};
        const Vec3 v = G::photon_velocity(E, B);
        CHECK(v.norm() < 1.0);
    }
}

TEST_CASE("photon velocity: near-zone dipole sample is subluminal") {
    fields::DipoleSource d;
    d.p0 = 1.0;
    d.omega = 2.0 * kPi;
    const fields::FieldSample fs = fields::dipole_fields(d, {0.1, 0.0, 0.03}, 0.2);
    const Vec3 v = G::photon_velocity(fs.E_total(), fs.B_total());
    CHECK(v.norm() < 1.0);
    CHECK(v.norm() < 0.9);  // attached fields dominate well inside lambda
}

TEST_CASE("photon velocity: |v| <= 1 on random fields") {
    Rng rng(123);
    double worst = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const Vec3 E{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const Vec3 B{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
        worst = std::max(worst, G::photon_velocity(E, B).norm());
    }
    CHECK(worst <= 1.0 + 1e-12);
}

TEST_CASE("entangled photon velocity: factorized limits") {
    fields::DipoleSource d;
    d.p0 = 1.0;
    d.omega = 2.0 * kPi;
    const Vec3 r_ph{0.6, 0.2, 0.4};
    const fields::FieldSample fs = fields::dipole_fields(d, r_ph, 0.3);

    G::EntangledFieldSample s;
    s.psi_e = {0.21, 0.0};
    s.psi_g = {0.35, 0.0};
    s.E_att = fs.E_att;
    s.B_att = fs.B_att;
    s.E_free = fs.E_free;
    s.B_free = fs.B_free;

    // a_e = 0: ground x field product state -> velocity of the total field.
    s.a_e = 0.0;
    s.a_g = 1.0;
    const Vec3 v_fact = G::photon_velocity_entangled(s);
    const Vec3 v_total = G::photon_velocity(fs.E_total(), fs.B_total());
    CHECK((v_fact - v_total).norm() < 1e-14);

    // a_g = 0: excited state, vacuum free field -> attached fields alone.
    s.a_e = 1.0;
    s.a_g = 0.0;
    const Vec3 v_att = G::photon_velocity_entangled(s);
    const Vec3 v_att_direct = G::photon_velocity(fs.E_att, fs.B_att);
    CHECK((v_att - v_att_direct).norm() < 1e-14);
}

TEST_CASE("entangled photon velocity: free fields dominate at 3 lambda") {
    fields::DipoleSource d;
    d.p0 = 1.0;
    d.omega = 2.0 * kPi;
    const Vec3 r_ph{3.0, 0.0, 0.0};
    // Sample at the phase where |pddot| is maximal at the retarded point, so
    // the attached contribution (pdot-weighted) is in quadrature and minimal.
    const double t = 3.0;  // omega (t - r) = 0: pddot extremal, pdot = 0
    const fields::FieldSample fs = fields::dipole_fields(d, r_ph, t);

    G::EntangledFieldSample s;
    s.a_e = 1.0 / std::sqrt(2.0);
    s.a_g = 1.0 / std::sqrt(2.0);
    s.psi_e = {0.21, 0.0};
    s.psi_g = {0.35, 0.0};
    s.E_att = fs.E_att;
    s.B_att = fs.B_att;
    s.E_free = fs.E_free;
    s.B_free = fs.B_free;

    const Vec3 v_ent = G::photon_velocity_entangled(s);
    const Vec3 v_free = G::photon_velocity(fs.E_free, fs.B_free);
    CHECK((v_ent - v_free).norm() / v_free.norm() < 0.01);
}

TEST_CASE("photon velocity is continuous along paths that avoid field zeros") {
    // Superposed incident plane wave + dipole fields; step-doubling check:
    // the largest jump of v between consecutive path samples halves with the
    // sampling step.
    fields::DipoleSource d;
    d.p0 = 0.005;
    d.omega = 2.0 * kPi;
    const auto v_at = [&](double s) {
        const Vec3 p{-1.0 + 1.3 * s, 0.0, 0.4 - 0.1 * s};  // stays off the origin
        const double t = 0.3 + 0.2 * s;
        const fields::FieldSample fs = fields::dipole_fields(d, p, t);
        const Vec3 E = fs.E_total() + Vec3{0, 0, std::cos(2.0 * kPi * (p.x - t))};
        const Vec3 B = fs.B_total() + Vec3{0, -std::cos(2.0 * kPi * (p.x - t)), 0};
        return G::photon_velocity(E, B);
    };
    const auto max_jump = [&](int n) {
        double m = 0.0;
        for (int i = 1; i <= n; ++i)
            m = std::max(m, (v_at(static_cast<double>(i) / n) -
                             v_at(static_cast<double>(i - 1) / n)).norm());
        return m;
    };
    const double j1 = max_jump(400);
    const double j2 = max_jump(800);
    const double j3 = max_jump(1600);
    CHECK(j2 < 0.75 * j1);  // ~0.5 each halving for a continuous field
    CHECK(j3 < 0.75 * j2);
}

TEST_CASE("entangled photon velocity: zero denominator is an error") {
    G::EntangledFieldSample s;
    s.a_e = 1.0;
    s.a_g = 0.0;
    s.psi_e = {1.0, 0.0};
    s.psi_g = {1.0, 0.0};
    CHECK_THROWS_AS(G::photon_velocity_entangled(s), G::GuidanceError);
}

TEST_CASE("hydrogen states are normalized") {
    G::Hydrogen1s s1;
    G::Hydrogen2pz p2;
    CHECK(G::integrate_density(s1, 0.0, nullptr) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(G::integrate_density(p2, 0.0, nullptr) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("electron velocity: real stationary state does not move") {
    G::Hydrogen1s psi;
    const Vec3 v = G::electron_velocity(psi, {}, {0.7, -0.3, 1.1});
    CHECK(v.x == 0.0);
    CHECK(v.y == 0.0);
    CHECK(v.z == 0.0);
}

TEST_CASE("electron velocity: plane wave moves at k/m") {
    G::PlaneWaveState psi({0.3, 0.0, 0.0});
    const Vec3 v = G::electron_velocity(psi, {}, {1.0, 2.0, 3.0});
    CHECK(v.x == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(v.y == doctest::Approx(0.0));

    psi.mass = 2.0;
    const Vec3 v2 = G::electron_velocity(psi, {}, {1.0, 2.0, 3.0});
    CHECK(v2.x == doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("electron velocity: vector potential term") {
    G::Hydrogen1s psi;  // real -> gradient term contributes nothing
    psi.charge = 1.0;
    psi.mass = 1.0;
    const Vec3 v = G::electron_velocity(psi, {0.2, 0.0, -0.1}, {1.0, 0.0, 0.0});
    CHECK(v.x == doctest::Approx(-0.2));
    CHECK(v.z == doctest::Approx(0.1));
}

TEST_CASE("electron velocity: node is an error") {
    G::Hydrogen2pz psi;  // node plane z = 0
    CHECK_THROWS_AS(G::electron_velocity(psi, {}, {1.0, 0.5, 0.0}), G::GuidanceError);
}

TEST_CASE("superposition: mean velocity oscillates at omega0 with the analytic amplitude") {
    const std::complex<double> a_e = 1.0 / std::sqrt(2.0), a_g = 1.0 / std::sqrt(2.0);
    const auto psi = G::make_hydrogen_superposition(a_e, a_g);

    // <v>(t) = 2 Im[a_g* a_e e^{-i w0 t}] * d,  d = integral psi_1s grad_z
    // psi_2pz = 16 sqrt(2)/81.
    const double d_z = 16.0 * std::sqrt(2.0) / 81.0;
    for (double t : {0.0, 1.3, 4.1, 7.9}) {
        const Vec3 mv = G::mean_velocity(*psi, t);
        const double expected =
            2.0 * (std::conj(a_g) * a_e * std::exp(-kI * G::kHydrogenOmega0 * t)).imag() * d_z;
        CHECK(mv.z == doctest::Approx(expected).epsilon(0.01));
        CHECK(std::abs(mv.x) < 1e-10);
        CHECK(std::abs(mv.y) < 1e-10);
    }

    // Period of the oscillation: <v>(t + 2 pi / w0) = <v>(t).
    const double T = 2.0 * kPi / G::kHydrogenOmega0;
    const Vec3 v0 = G::mean_velocity(*psi, 0.6);
    const Vec3 v1 = G::mean_velocity(*psi, 0.6 + T);
    CHECK((v0 - v1).norm() < 1e-9);
}

TEST_CASE("quantum potential: hydrogen 1s closed form and energy constancy") {
    G::Hydrogen1s psi;
    for (double r : {0.3, 0.8, 1.7, 4.2, 9.0}) {
        const Vec3 p = normalized({0.2, -0.5, 0.84}) * r;
        const double Q = G::quantum_potential_analytic(psi, p);
        CHECK(Q == doctest::Approx(-0.5 * (1.0 - 2.0 / r)).epsilon(1e-12));
        CHECK(Q - 1.0 / r == doctest::Approx(-0.5).epsilon(1e-10));  // Q + V = E_1s
    }
}

TEST_CASE("quantum potential: 2p energy constancy (stationary eigenstate)") {
    G::Hydrogen2pz psi;
    for (double r : {0.5, 1.0, 3.0, 7.0}) {
        const Vec3 p = normalized({0.1, 0.2, 0.97}) * r;
        const double Q = G::quantum_potential_analytic(psi, p);
        CHECK(Q - 1.0 / r == doctest::Approx(-0.125).epsilon(1e-10));
    }
}

TEST_CASE("quantum potential stencil: uniform density gives zero") {
    const auto rho = [](const Vec3&) { return 0.7; };
    CHECK(G::quantum_potential_stencil(rho, {1, 2, 3}, 0.05, 1.0) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("quantum potential stencil: gaussian density matches the symbolic result") {
    const double sigma = 1.3, m = 1.0;
    const auto rho = [&](const Vec3& p) { return std::exp(-p.norm2() / (sigma * sigma)); };
    for (double r : {0.0, 0.6, 1.4}) {
        const Vec3 p{r, 0.0, 0.0};
        const double expected = (3.0 / (sigma * sigma) - r * r / std::pow(sigma, 4)) / (2.0 * m);
        const double got = G::quantum_potential_stencil(rho, p, 0.01, m);
        CHECK(got == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("quantum potential stencil: node in the stencil is an error") {
    const auto rho = [](const Vec3& p) { return p.x; };  // nonpositive for x <= 0
    CHECK_THROWS_AS(G::quantum_potential_stencil(rho, {0.01, 0, 0}, 0.05, 1.0),
                    G::GuidanceError);
}

TEST_CASE("quantum potential stencil agrees with the analytic route on 1s") {
    G::Hydrogen1s psi;
    const auto rho = [&](const Vec3& p) { return std::norm(psi.value(p, 0.0)); };
    const Vec3 p{1.2, 0.4, -0.6};
    const double stencil = G::quantum_potential_stencil(rho, p, 0.01, 1.0);
    const double analytic = G::quantum_potential_analytic(psi, p);
    CHECK(stencil == doctest::Approx(analytic).epsilon(1e-6));
}

TEST_CASE("effective electron density: limits in the field-dominance ratio") {
    const std::complex<double> a_e{0.6, 0.1}, a_g{0.7, -0.2};
    const std::complex<double> pe{0.33, 0.0}, pg{0.21, 0.05};

    // G_free = 0: the photon coordinate factors out as G_att^2.
    const double d0 = G::effective_electron_density(a_e, a_g, pe, pg, 2.0, 0.0);
    CHECK(d0 == doctest::Approx(4.0 * std::norm(a_e * pe + a_g * pg)).epsilon(1e-12));

    // G_att = 0: only the ground term survives.
    const double d1 = G::effective_electron_density(a_e, a_g, pe, pg, 0.0, 3.0);
    CHECK(d1 == doctest::Approx(9.0 * std::norm(a_g * pg)).epsilon(1e-12));

    CHECK_THROWS_AS(G::effective_electron_density(a_e, a_g, pe, pg, -1.0, 0.0),
                    G::GuidanceError);
}

TEST_CASE("effective density: free-dominant quantum potential reduces to ground state") {
    // G_free/G_att = 1e3: the quantum potential of the weighted density is
    // within 0.1% of the ground-state-only potential.
    const std::complex<double> a_e = 1.0 / std::sqrt(2.0), a_g = 1.0 / std::sqrt(2.0);
    G::Hydrogen1s psi_g;
    G::Hydrogen2pz psi_e;
    const double G_att = 1.0, G_free = 1000.0;

    const auto rho_eff = [&](const Vec3& p) {
        return G::effective_electron_density(a_e, a_g, psi_e.value(p, 0), psi_g.value(p, 0),
                                             G_att, G_free);
    };
    const auto rho_g = [&](const Vec3& p) { return std::norm(psi_g.value(p, 0)); };

    // Inside the atom (where the 1s density lives) the excited admixture is
    // suppressed by G_att/G_free = 1e-3 and Q matches the ground-state
    // potential to 0.1%.
    for (const Vec3& p : {Vec3{1.0, 0.2, 0.5}, Vec3{0.4, -0.3, 0.8}, Vec3{0.3, 0.5, -0.9}}) {
        const double q_eff = G::quantum_potential_stencil(rho_eff, p, 0.01, 1.0);
        const double q_g = G::quantum_potential_stencil(rho_g, p, 0.01, 1.0);
        CHECK(std::abs(q_eff - q_g) / std::abs(q_g) < 1e-3);
    }

    // The residual scales like G_att/G_free: tenfold ratio, tenfold closer.
    const Vec3 p{1.0, 0.2, 0.5};
    const auto rho_ratio = [&](double ratio) {
        return [&, ratio](const Vec3& q) {
            return G::effective_electron_density(a_e, a_g, psi_e.value(q, 0),
                                                 psi_g.value(q, 0), 1.0, ratio);
        };
    };
    const double q_g = G::quantum_potential_stencil(rho_g, p, 0.01, 1.0);
    const double dev2 =
        std::abs(G::quantum_potential_stencil(rho_ratio(100.0), p, 0.01, 1.0) - q_g);
    const double dev3 =
        std::abs(G::quantum_potential_stencil(rho_ratio(1000.0), p, 0.01, 1.0) - q_g);
    CHECK(dev3 < dev2 / 5.0);
}

TEST_CASE("jump property: mean speed collapses when free fields take over") {
    // Attached-dominant regime: full superposition, G_free/G_att = 1e-2.
    // Free-dominant regime: ratio 1e2 with the decay completed (a_e -> 0.05),
    // which is the regime the jump leaves behind. The density-weighted mean
    // speed drops below 1% of its attached-regime value.
    const auto mixture = [](double a_e, double ratio) {
        const double a_g = std::sqrt(1.0 - a_e * a_e);
        return G::make_field_weighted_superposition(
            a_e, a_g, [](double) { return 1.0; }, [ratio](double) { return ratio; });
    };

    const auto peak_speed = [](const G::ElectronWaveFunction& psi) {
        double peak = 0.0;
        const double T = 2.0 * kPi / G::kHydrogenOmega0;
        for (int i = 0; i < 8; ++i) peak = std::max(peak, G::mean_speed(psi, T * i / 8.0));
        return peak;
    };

    const double v_att = peak_speed(*mixture(1.0 / std::sqrt(2.0), 1e-2));
    const double v_free = peak_speed(*mixture(0.05, 1e2));
    CHECK(v_free / v_att < 0.01);
    CHECK(v_att > 1e-3);  // the attached regime genuinely oscillates
}

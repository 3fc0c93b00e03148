#include "pilotwave/guidance.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace pw::guidance {

namespace {
constexpr double kNodeThreshold = 1e-280;  // |psi|^2 below this counts as a node
}

Vec3 photon_velocity(const Vec3& E, const Vec3& B) {
    const double energy = E.norm2() + B.norm2();
    if (energy <= 0.0) throw GuidanceError("photon_velocity: zero field, direction undefined");
    return cross(E, B) * (2.0 / energy);
}

Vec3 photon_velocity_phasor(const CVec3& E, const CVec3& B) {
    const double energy = E.norm2() + B.norm2();
    if (energy <= 0.0) throw GuidanceError("photon_velocity: zero field, direction undefined");
    return ccross(E, B).real() * (2.0 / energy);
}

Vec3 photon_velocity_entangled(const EntangledFieldSample& s) {
    const std::complex<double> we = s.a_e * s.psi_e;
    const std::complex<double> wg = s.a_g * s.psi_g;
    kemmer::KemmerNode F;
    F.E = we * CVec3(s.E_att) + wg * (CVec3(s.E_free) + CVec3(s.E_att));
    F.B = we * CVec3(s.B_att) + wg * (CVec3(s.B_free) + CVec3(s.B_att));
    const double denom = kemmer::energy_dot(F, F).real();
    if (denom <= 0.0) throw GuidanceError("photon_velocity_entangled: zero energy denominator");
    return kemmer::cross_dot(F, F).real() * (2.0 / denom);
}

// ---------------------------------------------------------------------------
// Hydrogenic states
// ---------------------------------------------------------------------------

std::complex<double> Hydrogen1s::value(const Vec3& r, double) const {
    return std::exp(-r.norm()) / std::sqrt(std::numbers::pi);
}

CVec3 Hydrogen1s::gradient(const Vec3& r, double) const {
    const double rn = r.norm();
    if (rn == 0.0) return {};
    const double f = -std::exp(-rn) / (std::sqrt(std::numbers::pi) * rn);
    return CVec3(r * f);
}

std::complex<double> Hydrogen1s::laplacian(const Vec3& r, double) const {
    const double rn = r.norm();
    // lap e^{-r} = (1 - 2/r) e^{-r}
    return (1.0 - 2.0 / rn) * std::exp(-rn) / std::sqrt(std::numbers::pi);
}

namespace {
const double k2pNorm = 1.0 / (4.0 * std::sqrt(2.0 * std::numbers::pi));
}

std::complex<double> Hydrogen2pz::value(const Vec3& r, double) const {
    return k2pNorm * r.z * std::exp(-0.5 * r.norm());
}

CVec3 Hydrogen2pz::gradient(const Vec3& r, double) const {
    const double rn = r.norm();
    const double e = std::exp(-0.5 * rn);
    if (rn == 0.0) return CVec3(Vec3{0.0, 0.0, k2pNorm});
    // grad (z e^{-r/2}) = e^{-r/2} (zhat - z rhat / (2 r) * r ... )
    const Vec3 g = Vec3{0.0, 0.0, 1.0} * e - r * (r.z * e / (2.0 * rn));
    return CVec3(g * k2pNorm);
}

std::complex<double> Hydrogen2pz::laplacian(const Vec3& r, double) const {
    const double rn = r.norm();
    const double e = std::exp(-0.5 * rn);
    // lap (z e^{-r/2}) = z e^{-r/2} (1/4 - 2/r)
    return k2pNorm * r.z * e * (0.25 - 2.0 / rn);
}

std::complex<double> PlaneWaveState::value(const Vec3& r, double) const {
    return std::exp(std::complex<double>(0.0, dot(k_, r)));
}

CVec3 PlaneWaveState::gradient(const Vec3& r, double t) const {
    const std::complex<double> v = value(r, t);
    return CVec3(k_) * (std::complex<double>(0.0, 1.0) * v);
}

std::complex<double> PlaneWaveState::laplacian(const Vec3& r, double t) const {
    return -k_.norm2() * value(r, t);
}

std::complex<double> WeightedTwoState::value(const Vec3& r, double t) const {
    return w_e_(t) * psi_e_->value(r, t) + w_g_(t) * psi_g_->value(r, t);
}

CVec3 WeightedTwoState::gradient(const Vec3& r, double t) const {
    return w_e_(t) * psi_e_->gradient(r, t) + w_g_(t) * psi_g_->gradient(r, t);
}

std::complex<double> WeightedTwoState::laplacian(const Vec3& r, double t) const {
    return w_e_(t) * psi_e_->laplacian(r, t) + w_g_(t) * psi_g_->laplacian(r, t);
}

std::shared_ptr<WeightedTwoState> make_hydrogen_superposition(std::complex<double> a_e,
                                                              std::complex<double> a_g) {
    const std::complex<double> I(0.0, 1.0);
    return std::make_shared<WeightedTwoState>(
        std::make_shared<Hydrogen2pz>(), std::make_shared<Hydrogen1s>(),
        [a_e, I](double t) { return a_e * std::exp(-I * kHydrogenE2p * t); },
        [a_g, I](double t) { return a_g * std::exp(-I * kHydrogenE1s * t); });
}

std::shared_ptr<WeightedTwoState> make_field_weighted_superposition(
    std::complex<double> a_e, std::complex<double> a_g, std::function<double(double)> G_att,
    std::function<double(double)> G_free) {
    const std::complex<double> I(0.0, 1.0);
    return std::make_shared<WeightedTwoState>(
        std::make_shared<Hydrogen2pz>(), std::make_shared<Hydrogen1s>(),
        [a_e, G_att, I](double t) { return a_e * G_att(t) * std::exp(-I * kHydrogenE2p * t); },
        [a_g, G_att, G_free, I](double t) {
            return a_g * (G_free(t) + G_att(t)) * std::exp(-I * kHydrogenE1s * t);
        });
}

// ---------------------------------------------------------------------------
// Guidance and quantum potential
// ---------------------------------------------------------------------------

Vec3 electron_velocity(const ElectronWaveFunction& psi, const Vec3& A, const Vec3& r, double t) {
    const std::complex<double> v = psi.value(r, t);
    if (std::norm(v) < kNodeThreshold)
        throw GuidanceError("electron_velocity: node of psi, velocity undefined");
    const CVec3 g = psi.gradient(r, t);
    const std::complex<double> gx = g.x / v, gy = g.y / v, gz = g.z / v;
    return Vec3{gx.imag(), gy.imag(), gz.imag()} / psi.mass - A * (psi.charge / psi.mass);
}

double quantum_potential_stencil(const std::function<double(const Vec3&)>& rho, const Vec3& r,
                                 double h, double mass) {
    // 4th-order Laplacian of sqrt(rho): per axis
    // (-f2 + 16 f1 - 30 f0 + 16 fm1 - fm2) / (12 h^2)
    const auto s = [&](const Vec3& p) {
        const double d = rho(p);
        if (d <= 0.0)
            throw GuidanceError("quantum_potential: non-positive density on stencil");
        return std::sqrt(d);
    };
    const double f0 = s(r);
    double lap = 0.0;
    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (const auto& a : axes) {
        lap += (-s(r + a * (2 * h)) + 16.0 * s(r + a * h) - 30.0 * f0 + 16.0 * s(r - a * h) -
                s(r - a * (2 * h))) /
               (12.0 * h * h);
    }
    return -lap / (2.0 * mass * f0);
}

double quantum_potential_analytic(const ElectronWaveFunction& psi, const Vec3& r, double t) {
    const std::complex<double> v = psi.value(r, t);
    if (std::norm(v) < kNodeThreshold)
        throw GuidanceError("quantum_potential: node of psi");
    const std::complex<double> q = psi.laplacian(r, t) / v;
    return -q.real() / (2.0 * psi.mass);
}

double effective_electron_density(std::complex<double> a_e, std::complex<double> a_g,
                                  std::complex<double> psi_e, std::complex<double> psi_g,
                                  double G_att, double G_free) {
    if (G_att < 0.0 || G_free < 0.0)
        throw GuidanceError("effective_electron_density: field magnitudes must be >= 0");
    return std::norm(a_e * psi_e * G_att + a_g * psi_g * (G_free + G_att));
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double xi = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = xi;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
            const double dx = -p1 / dp;
            xi += dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = xi;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
        x[i] = xi;
        w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
}

template <typename F>
void spherical_sum(const SphericalQuadrature& q, F&& body) {
    std::vector<double> xr, wr, xt, wt;
    gauss_legendre(q.n_r, xr, wr);
    gauss_legendre(q.n_theta, xt, wt);
    const double dphi = 2.0 * std::numbers::pi / q.n_phi;
    for (int ir = 0; ir < q.n_r; ++ir) {
        const double r = 0.5 * q.r_max * (xr[ir] + 1.0);
        const double wR = 0.5 * q.r_max * wr[ir] * r * r;
        for (int it = 0; it < q.n_theta; ++it) {
            const double ct = xt[it];
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            const double wT = wt[it];
            for (int ip = 0; ip < q.n_phi; ++ip) {
                const double phi = dphi * (ip + 0.5);
                const Vec3 p{r * st * std::cos(phi), r * st * std::sin(phi), r * ct};
                body(p, wR * wT * dphi);
            }
        }
    }
}

}  // namespace

double integrate_density(const ElectronWaveFunction& psi, double t,
                         const std::function<double(const Vec3&)>& f,
                         const SphericalQuadrature& q) {
    double acc = 0.0;
    spherical_sum(q, [&](const Vec3& p, double w) {
        acc += w * std::norm(psi.value(p, t)) * (f ? f(p) : 1.0);
    });
    return acc;
}

Vec3 mean_velocity(const ElectronWaveFunction& psi, double t, const SphericalQuadrature& q) {
    Vec3 acc;
    spherical_sum(q, [&](const Vec3& p, double w) {
        const std::complex<double> v = psi.value(p, t);
        const CVec3 g = psi.gradient(p, t);
        // j = Im[psi* grad psi] / m
        acc += Vec3{(std::conj(v) * g.x).imag(), (std::conj(v) * g.y).imag(),
                    (std::conj(v) * g.z).imag()} *
               (w / psi.mass);
    });
    return acc;
}

double mean_speed(const ElectronWaveFunction& psi, double t, const SphericalQuadrature& q) {
    double num = 0.0, den = 0.0;
    spherical_sum(q, [&](const Vec3& p, double w) {
        const std::complex<double> v = psi.value(p, t);
        const CVec3 g = psi.gradient(p, t);
        const Vec3 j{(std::conj(v) * g.x).imag(), (std::conj(v) * g.y).imag(),
                     (std::conj(v) * g.z).imag()};
        num += w * j.norm() / psi.mass;
        den += w * std::norm(v);
    });
    if (den <= 0.0) throw GuidanceError("mean_speed: zero density");
    return num / den;
}

}  // namespace pw::guidance

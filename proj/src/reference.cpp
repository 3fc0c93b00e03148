#include "pilotwave/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace pw::reference {

namespace {

double cone(const ChargeKinematics& src, const Vec3& r, double t, double s) {
    return s + (r - src.position(s)).norm() - t;
}

double bisect_retarded(const ChargeKinematics& src, const Vec3& r, double t) {
    // cone(s) is strictly increasing for subluminal motion. Bracket downward
    // from s = t.
    double hi = t;
    double span = std::max(1.0, (r - src.position(t)).norm());
    double lo = t - 2.0 * span;
    int guard = 0;
    while (cone(src, r, t, lo) > 0.0) {
        span *= 2.0;
        lo = t - 2.0 * span;
        if (++guard > 80) throw std::runtime_error("reference: cannot bracket retarded time");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;  // interval at the rounding floor
        if (cone(src, r, t, mid) > 0.0) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

void unsplit_lienard_wiechert(const ChargeKinematics& source, const Vec3& r, double t, Vec3& E,
                              Vec3& B) {
    const double s = bisect_retarded(source, r, t);
    const Vec3 d = r - source.position(s);
    const double dist = d.norm();
    const Vec3 n = d / dist;
    const Vec3 v = source.velocity(s);
    const Vec3 a = source.acceleration(s);
    const double k = 1.0 - dot(n, v);
    const double g2 = 1.0 / (1.0 - v.norm2());
    const double q = source.charge;
    const double k3 = k * k * k;

    E = (n - v) * (q / (g2 * k3 * dist * dist)) +
        ((n - v) * dot(n, a) - a * k) * (q / (k3 * dist));
    B = cross(n, E);
}

namespace {

using kemmer::Component;

// 4th-order first derivative with periodic wrap, written against raw strides.
struct Der {
    int nx, ny, nz;
    double inv12h;
    std::size_t sx, sy;

    double dx(const double* f, int i, int j, int k) const {
        const auto at = [&](int ii) {
            return f[static_cast<std::size_t>((ii + 2 * nx) % nx) * sx +
                     static_cast<std::size_t>(j) * sy + k];
        };
        return (8.0 * (at(i + 1) - at(i - 1)) - (at(i + 2) - at(i - 2))) * inv12h;
    }
    double dy(const double* f, int i, int j, int k) const {
        const auto at = [&](int jj) {
            return f[static_cast<std::size_t>(i) * sx +
                     static_cast<std::size_t>((jj + 2 * ny) % ny) * sy + k];
        };
        return (8.0 * (at(j + 1) - at(j - 1)) - (at(j + 2) - at(j - 2))) * inv12h;
    }
    double dz(const double* f, int i, int j, int k) const {
        const auto at = [&](int kk) {
            return f[static_cast<std::size_t>(i) * sx + static_cast<std::size_t>(j) * sy +
                     (kk + 2 * nz) % nz];
        };
        return (8.0 * (at(k + 1) - at(k - 1)) - (at(k + 2) - at(k - 2))) * inv12h;
    }
};

}  // namespace

void leapfrog_evolve(kemmer::KemmerGrid& g, double dt, int steps) {
    if (g.boundary() != kemmer::Boundary::Periodic)
        throw std::runtime_error("reference leapfrog: periodic boundaries only");
    const std::size_t n = g.nodes();
    const Der der{g.nx(), g.ny(), g.nz(), 1.0 / (12.0 * g.h()),
                  static_cast<std::size_t>(g.ny()) * g.nz(), static_cast<std::size_t>(g.nz())};

    double* Ex = g.component(Component::Ex);
    double* Ey = g.component(Component::Ey);
    double* Ez = g.component(Component::Ez);
    double* Bx = g.component(Component::Bx);
    double* By = g.component(Component::By);
    double* Bz = g.component(Component::Bz);
    double* Ax = g.component(Component::Ax);
    double* Ay = g.component(Component::Ay);
    double* Az = g.component(Component::Az);
    double* Ph = g.component(Component::Phi);

    std::vector<double> tmp(6 * n);
    double* cEx = tmp.data();
    double* cEy = tmp.data() + n;
    double* cEz = tmp.data() + 2 * n;
    double* gx = tmp.data() + 3 * n;
    double* gy = tmp.data() + 4 * n;
    double* gz = tmp.data() + 5 * n;

    const auto for_nodes = [&](auto&& fn) {
        for (int i = 0; i < g.nx(); ++i)
            for (int j = 0; j < g.ny(); ++j)
                for (int k = 0; k < g.nz(); ++k) fn(i, j, k, g.flat(i, j, k));
    };

    // Half-step kick for the staggered variables: B, A move to t = dt/2.
    const auto stagger = [&](double h) {
        for_nodes([&](int i, int j, int k, std::size_t id) {
            cEx[id] = der.dy(Ez, i, j, k) - der.dz(Ey, i, j, k);
            cEy[id] = der.dz(Ex, i, j, k) - der.dx(Ez, i, j, k);
            cEz[id] = der.dx(Ey, i, j, k) - der.dy(Ex, i, j, k);
            gx[id] = der.dx(Ph, i, j, k);
            gy[id] = der.dy(Ph, i, j, k);
            gz[id] = der.dz(Ph, i, j, k);
        });
        for (std::size_t id = 0; id < n; ++id) {
            Bx[id] -= h * cEx[id];
            By[id] -= h * cEy[id];
            Bz[id] -= h * cEz[id];
            Ax[id] += h * (-Ex[id] - gx[id]);
            Ay[id] += h * (-Ey[id] - gy[id]);
            Az[id] += h * (-Ez[id] - gz[id]);
        }
    };

    stagger(0.5 * dt);
    for (int s = 0; s < steps; ++s) {
        // E, phi: full step using half-time B, A.
        for_nodes([&](int i, int j, int k, std::size_t id) {
            cEx[id] = der.dy(Bz, i, j, k) - der.dz(By, i, j, k);
            cEy[id] = der.dz(Bx, i, j, k) - der.dx(Bz, i, j, k);
            cEz[id] = der.dx(By, i, j, k) - der.dy(Bx, i, j, k);
            gx[id] = der.dx(Ax, i, j, k) + der.dy(Ay, i, j, k) + der.dz(Az, i, j, k);
        });
        for (std::size_t id = 0; id < n; ++id) {
            Ex[id] += dt * cEx[id];
            Ey[id] += dt * cEy[id];
            Ez[id] += dt * cEz[id];
            Ph[id] += dt * gx[id];
        }
        // B, A: full step (to the next half time), except the last one.
        if (s + 1 < steps) stagger(dt);
    }
    // Align B, A back to the final integer time.
    stagger(0.5 * dt);
}

}  // namespace pw::reference

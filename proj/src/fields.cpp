#include "pilotwave/fields.hpp"

#include <cmath>

namespace pw::fields {

namespace {

double light_cone_residual(const ChargeKinematics& source, const Vec3& r, double t, double s) {
    return s + (r - source.position(s)).norm() - t;
}

}  // namespace

double retarded_time(const ChargeKinematics& source, const Vec3& r, double t) {
    // Guaranteed absolute tolerance 1e-12; the damped Newton iteration keeps
    // polishing to the rounding floor while it still makes progress.
    constexpr double tol = 1e-12;
    constexpr int max_iter = 100;

    // Start from the straight-light-travel guess relative to the current
    // source position.
    double s = t - (r - source.position(t)).norm();
    double g = light_cone_residual(source, r, t, s);
    const double floor_g = 4e-16 * std::max({1.0, std::abs(t), r.norm()});

    for (int it = 0; it < max_iter; ++it) {
        const Vec3 d = r - source.position(s);
        const double dist = d.norm();
        if (std::abs(g) <= floor_g) break;
        double step;
        if (dist > kSingularityRadius) {
            const Vec3 n_hat = d / dist;
            const double gp = 1.0 - dot(n_hat, source.velocity(s));  // > 0, subluminal
            step = -g / gp;
        } else {
            step = -g;  // fixed-point fallback at (near-)coincidence
        }
        // Damping: back off until the residual magnitude decreases.
        double scale = 1.0;
        double s_next = s + step;
        double g_next = light_cone_residual(source, r, t, s_next);
        int backoff = 0;
        while (std::abs(g_next) > std::abs(g) && backoff < 60) {
            scale *= 0.5;
            s_next = s + step * scale;
            g_next = light_cone_residual(source, r, t, s_next);
            ++backoff;
        }
        if (s_next == s) break;  // rounding floor reached
        s = s_next;
        g = g_next;
    }
    if (std::abs(g) > tol)
        throw RetardationError("retarded_time: no convergence after iteration cap");
    if ((r - source.position(s)).norm() < kSingularityRadius)
        throw SingularityError("retarded_time: field point on the worldline");
    return s;
}

RetardedFrame retarded_frame(const ChargeKinematics& source, const Vec3& r, double t) {
    RetardedFrame f;
    f.t_ret = retarded_time(source, r, t);
    const Vec3 d = r - source.position(f.t_ret);
    f.distance = d.norm();
    if (f.distance < kSingularityRadius)
        throw SingularityError("field evaluation on the worldline");
    f.n_hat = d / f.distance;
    f.vel = source.velocity(f.t_ret);
    f.acc = source.acceleration(f.t_ret);
    return f;
}

FieldSample lienard_wiechert(const ChargeKinematics& source, const Vec3& r, double t) {
    const RetardedFrame f = retarded_frame(source, r, t);
    const double q = source.charge;
    const double kappa = 1.0 - dot(f.n_hat, f.vel);        // 1 - n.v
    const double gamma2 = 1.0 / (1.0 - f.vel.norm2());     // gamma^2
    const double kappa3 = kappa * kappa * kappa;

    FieldSample out;
    out.position = r;
    out.time = t;
    out.E_att = (f.n_hat - f.vel) * (q / (gamma2 * kappa3 * f.distance * f.distance));
    out.E_free = cross(f.n_hat, cross(f.n_hat - f.vel, f.acc)) * (q / (kappa3 * f.distance));
    out.B_att = cross(f.n_hat, out.E_att);
    out.B_free = cross(f.n_hat, out.E_free);
    return out;
}

FieldSample dipole_fields(const DipoleSource& source, const Vec3& r, double t) {
    const Vec3 d = r - source.origin;
    const double dist = d.norm();
    if (dist < kSingularityRadius) throw SingularityError("dipole_fields: evaluation at origin");

    const Vec3 rhat = d / dist;
    const Vec3 ahat = normalized(source.axis);
    const double cos_t = dot(rhat, ahat);
    // sin(theta) thetahat = cos(theta) rhat - ahat ; sin(theta) phihat = ahat x rhat
    const Vec3 sin_theta_hat = rhat * cos_t - ahat;
    const Vec3 sin_phi_hat = cross(ahat, rhat);

    const double tr = t - dist;  // retarded argument
    const double p = source.p(tr);
    const double pd = source.pdot(tr);
    const double pdd = source.pddot(tr);

    FieldSample out;
    out.position = r;
    out.time = t;
    // 2 cos rhat + sin thetahat = 3 cos rhat - ahat
    out.E_att = (rhat * (3.0 * cos_t) - ahat) * (p / (dist * dist * dist) + pd / (dist * dist));
    out.B_att = sin_phi_hat * (pd / (dist * dist));
    out.E_free = sin_theta_hat * (pdd / dist);
    out.B_free = sin_phi_hat * (pdd / dist);
    return out;
}

Vec3 project_transverse_r(const Vec3& v, const Vec3& r) {
    const double r2 = r.norm2();
    if (r2 == 0.0) throw std::invalid_argument("project_transverse_r: r = 0");
    return v - r * (dot(v, r) / r2);
}

CovariantSplit covariant_tensors(const ChargeKinematics& source, const FourVec& x) {
    const RetardedFrame f = retarded_frame(source, x.r, x.t);
    const double q = source.charge;

    const double gamma = 1.0 / std::sqrt(1.0 - f.vel.norm2());
    const double gamma_dot = gamma * gamma * gamma * dot(f.vel, f.acc);

    // Proper-time derivatives of the worldline at the retarded point:
    // zdot = gamma (1, v), zddot = gamma (gamma_dot, gamma_dot v + gamma a).
    const FourVec zdot{gamma, f.vel * gamma};
    const FourVec zddot{gamma * gamma_dot, f.vel * (gamma * gamma_dot) + f.acc * (gamma * gamma)};
    const FourVec u{x.t - f.t_ret, x.r - source.position(f.t_ret)};  // null

    const double R = mdot(u, zdot);
    const double Q = mdot(u, zddot);
    const double invR3 = 1.0 / (R * R * R);

    const auto comp = [](const FourVec& v, int mu) {
        switch (mu) {
            case 0: return v.t;
            case 1: return v.r.x;
            case 2: return v.r.y;
            default: return v.r.z;
        }
    };

    CovariantSplit out;
    out.F_att = zero_mat4();
    out.F_free = zero_mat4();
    for (int mu = 0; mu < 4; ++mu) {
        for (int nu = mu + 1; nu < 4; ++nu) {
            const double uv = comp(u, mu) * comp(zdot, nu) - comp(u, nu) * comp(zdot, mu);
            const double ua = comp(u, mu) * comp(zddot, nu) - comp(u, nu) * comp(zddot, mu);
            const double att = q * invR3 * uv;
            const double fre = q * invR3 * (R * ua - Q * uv);
            out.F_att[mu][nu] = att;
            out.F_att[nu][mu] = -att;
            out.F_free[mu][nu] = fre;
            out.F_free[nu][mu] = -fre;
        }
    }
    return out;
}

Vec3 tensor_E(const Mat4& F) { return {F[1][0], F[2][0], F[3][0]}; }

Vec3 tensor_B(const Mat4& F) { return {F[3][2], F[1][3], F[2][1]}; }

}  // namespace pw::fields

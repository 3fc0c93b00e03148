#include "pilotwave/worldline.hpp"

#include <cmath>

namespace pw {

SampledWorldline::Spline SampledWorldline::build(double t0, double dt,
                                                 const std::vector<double>& y) {
    const std::size_t n = y.size();
    Spline s;
    s.t0 = t0;
    s.dt = dt;
    s.y = y;
    s.m.assign(n, 0.0);
    if (n < 3) return s;

    // Natural cubic spline on a uniform grid: tridiagonal solve for the
    // second derivatives m_i.
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double rhs = 6.0 * (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (dt * dt);
        const double denom = 4.0 - (i > 1 ? c[i - 1] : 0.0);
        c[i] = 1.0 / denom;
        d[i] = (rhs - (i > 1 ? d[i - 1] : 0.0)) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        s.m[i] = d[i] - c[i] * s.m[i + 1];
        if (i == 1) break;
    }
    return s;
}

double SampledWorldline::Spline::eval(double t, int deriv) const {
    const std::size_t n = y.size();
    double u = (t - t0) / dt;
    auto seg = static_cast<long>(std::floor(u));
    if (seg < 0) seg = 0;
    if (seg > static_cast<long>(n) - 2) seg = static_cast<long>(n) - 2;
    const auto i = static_cast<std::size_t>(seg);
    const double a = u - static_cast<double>(seg);  // in [0,1] on the segment
    const double b = 1.0 - a;
    switch (deriv) {
        case 0:
            return b * y[i] + a * y[i + 1] +
                   ((b * b * b - b) * m[i] + (a * a * a - a) * m[i + 1]) * dt * dt / 6.0;
        case 1:
            return (y[i + 1] - y[i]) / dt +
                   ((3.0 * a * a - 1.0) * m[i + 1] - (3.0 * b * b - 1.0) * m[i]) * dt / 6.0;
        default:
            return b * m[i] + a * m[i + 1];
    }
}

SampledWorldline::SampledWorldline(double t0, double dt, std::vector<Vec3> samples) {
    if (samples.size() < 4) throw std::invalid_argument("sampled worldline: need >= 4 samples");
    if (dt <= 0.0) throw std::invalid_argument("sampled worldline: dt must be > 0");
    std::vector<double> xs, ys, zs;
    xs.reserve(samples.size());
    ys.reserve(samples.size());
    zs.reserve(samples.size());
    for (const auto& p : samples) {
        xs.push_back(p.x);
        ys.push_back(p.y);
        zs.push_back(p.z);
    }
    sx_ = build(t0, dt, xs);
    sy_ = build(t0, dt, ys);
    sz_ = build(t0, dt, zs);
    tmin_ = t0;
    tmax_ = t0 + dt * static_cast<double>(samples.size() - 1);
}

Vec3 SampledWorldline::position(double t) const {
    if (t < tmin_ || t > tmax_)
        throw std::out_of_range("sampled worldline: query outside sampled window");
    return {sx_.eval(t, 0), sy_.eval(t, 0), sz_.eval(t, 0)};
}

Vec3 SampledWorldline::velocity(double t) const {
    if (t < tmin_ || t > tmax_)
        throw std::out_of_range("sampled worldline: query outside sampled window");
    return {sx_.eval(t, 1), sy_.eval(t, 1), sz_.eval(t, 1)};
}

Vec3 SampledWorldline::acceleration(double t) const {
    if (t < tmin_ || t > tmax_)
        throw std::out_of_range("sampled worldline: query outside sampled window");
    return {sx_.eval(t, 2), sy_.eval(t, 2), sz_.eval(t, 2)};
}

}  // namespace pw

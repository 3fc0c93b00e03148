// worldline.hpp - prescribed source worldlines (position/velocity/acceleration
// vs. coordinate time) used as field sources. All built-in prescriptions are
// analytic; sampled worldlines interpolate with a cubic spline and take their
// derivatives from the interpolant.

#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "pilotwave/vec.hpp"

namespace pw {

class Worldline {
public:
    virtual ~Worldline() = default;
    virtual Vec3 position(double t) const = 0;
    virtual Vec3 velocity(double t) const = 0;
    virtual Vec3 acceleration(double t) const = 0;
};

class RestWorldline final : public Worldline {
public:
    explicit RestWorldline(Vec3 pos = {}) : pos_(pos) {}
    Vec3 position(double) const override { return pos_; }
    Vec3 velocity(double) const override { return {}; }
    Vec3 acceleration(double) const override { return {}; }

private:
    Vec3 pos_;
};

class UniformWorldline final : public Worldline {
public:
    UniformWorldline(Vec3 pos0, Vec3 vel) : pos0_(pos0), vel_(vel) {
        if (vel_.norm() >= 1.0) throw std::invalid_argument("worldline: |v| must be < 1");
    }
    Vec3 position(double t) const override { return pos0_ + vel_ * t; }
    Vec3 velocity(double) const override { return vel_; }
    Vec3 acceleration(double) const override { return {}; }

private:
    Vec3 pos0_, vel_;
};

// x(t) = center + axis * amplitude * sin(omega t + phase)
class HarmonicWorldline final : public Worldline {
public:
    HarmonicWorldline(Vec3 center, Vec3 axis, double amplitude, double omega, double phase = 0.0)
        : center_(center), axis_(normalized(axis)), amp_(amplitude), omega_(omega), phase_(phase) {
        if (std::abs(amp_ * omega_) >= 1.0)
            throw std::invalid_argument("worldline: peak speed amplitude*omega must be < 1");
    }
    Vec3 position(double t) const override {
        return center_ + axis_ * (amp_ * std::sin(omega_ * t + phase_));
    }
    Vec3 velocity(double t) const override {
        return axis_ * (amp_ * omega_ * std::cos(omega_ * t + phase_));
    }
    Vec3 acceleration(double t) const override {
        return axis_ * (-amp_ * omega_ * omega_ * std::sin(omega_ * t + phase_));
    }

private:
    Vec3 center_, axis_;
    double amp_, omega_, phase_;
};

// Uniformly sampled positions interpolated by a natural cubic spline; velocity
// and acceleration are the spline's first and second derivatives. Queries
// outside the sampled window are an error.
class SampledWorldline final : public Worldline {
public:
    SampledWorldline(double t0, double dt, std::vector<Vec3> samples);
    Vec3 position(double t) const override;
    Vec3 velocity(double t) const override;
    Vec3 acceleration(double t) const override;

private:
    struct Spline {
        double t0 = 0.0, dt = 1.0;
        std::vector<double> y, m;  // values and second derivatives at the knots
        double eval(double t, int deriv) const;
    };
    static Spline build(double t0, double dt, const std::vector<double>& y);
    Spline sx_, sy_, sz_;
    double tmin_, tmax_;
};

// A point charge on a prescribed worldline.
struct ChargeKinematics {
    double charge = 1.0;
    std::shared_ptr<const Worldline> path;

    Vec3 position(double t) const { return path->position(t); }
    Vec3 velocity(double t) const { return path->velocity(t); }
    Vec3 acceleration(double t) const { return path->acceleration(t); }
};

inline ChargeKinematics make_rest_charge(double q, Vec3 pos = {}) {
    return {q, std::make_shared<RestWorldline>(pos)};
}
inline ChargeKinematics make_uniform_charge(double q, Vec3 pos0, Vec3 vel) {
    return {q, std::make_shared<UniformWorldline>(pos0, vel)};
}
inline ChargeKinematics make_harmonic_charge(double q, Vec3 center, Vec3 axis, double amplitude,
                                             double omega, double phase = 0.0) {
    return {q, std::make_shared<HarmonicWorldline>(center, axis, amplitude, omega, phase)};
}

}  // namespace pw

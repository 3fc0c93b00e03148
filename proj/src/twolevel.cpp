#include "pilotwave/twolevel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pw::twolevel {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};

std::complex<double> contract(const CVec3& a, const CVec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;  // plain bilinear contraction
}
}  // namespace

double radiative_gamma(double charge, double mass, double omega0) {
    return (2.0 / 3.0) * charge * charge * omega0 * omega0 / mass;
}

TwoLevelState TwoLevelState::make(std::complex<double> a_e, std::complex<double> a_g,
                                  double omega0, const CVec3& p_eg, double charge, double mass) {
    if (omega0 <= 0.0) throw TwoLevelError("two-level state: omega0 must be > 0");
    TwoLevelState s;
    s.a_e = a_e;
    s.a_g = a_g;
    s.omega0 = omega0;
    s.p_eg = p_eg;
    s.gamma = radiative_gamma(charge, mass, omega0);
    return s;
}

CVec3 self_field_amplitude(const Vec3& v, double omega0, const SelfFieldParams& p) {
    if (omega0 <= 0.0) throw TwoLevelError("self_field_amplitude: omega0 must be > 0");
    if (p.mass <= omega0)
        throw TwoLevelError("self_field_amplitude: requires m c^2 > hbar omega0");
    const std::complex<double> bracket =
        kI + (2.0 / std::numbers::pi) * std::log(p.mass / omega0);
    const double scale = p.charge * omega0 / (6.0 * std::numbers::pi);
    return CVec3(v) * (scale * bracket);
}

std::pair<std::complex<double>, std::complex<double>> amplitude_rhs(const TwoLevelState& s,
                                                                    const CVec3& A) {
    const std::complex<double> k_e = contract(A, s.p_eg);
    const std::complex<double> k_g = contract(A, s.p_eg.conj());  // p_ge = p_eg*
    return {s.a_g * k_e, s.a_e * k_g};
}

std::vector<DressedState> dressed_states(const TwoLevelState& s, const CVec3& A) {
    const std::complex<double> k_e = contract(A, s.p_eg);
    const std::complex<double> k_g = contract(A, s.p_eg.conj());
    const std::complex<double> mu = std::sqrt(k_e * k_g);
    std::vector<DressedState> out;
    for (int sign : {+1, -1}) {
        DressedState d;
        d.eigenvalue = static_cast<double>(sign) * mu;
        // Eigenvector of [[0, k_e], [k_g, 0]]: (k_e, sign*mu) up to scale.
        std::complex<double> ve = k_e, vg = static_cast<double>(sign) * mu;
        if (std::abs(ve) + std::abs(vg) == 0.0) {
            ve = 1.0;
            vg = 0.0;
        }
        const double nrm = std::sqrt(std::norm(ve) + std::norm(vg));
        d.a_e = ve / nrm;
        d.a_g = vg / nrm;
        out.push_back(d);
    }
    return out;
}

DispersionResponse dispersion_response(double E0, double nu, double nu0, double gamma,
                                       double charge, double mass) {
    if (nu <= 0.0 || nu0 <= 0.0 || gamma <= 0.0)
        throw TwoLevelError("dispersion_response: nu, nu0, gamma must be > 0");
    DispersionResponse out;
    const std::complex<double> denom(nu0 * nu0 - nu * nu, -nu * gamma);
    out.x = (E0 * charge / mass) / denom;

    const double d = nu * nu - nu0 * nu0;
    out.phase = (d == 0.0) ? 0.5 * std::numbers::pi : std::atan(gamma * nu / d);

    const double q2m = charge * charge / mass;
    const double nu2 = nu * nu;
    out.cross_section = (8.0 * std::numbers::pi / 3.0) * q2m * q2m * nu2 * nu2 /
                        (d * d + gamma * gamma * nu2);
    return out;
}

double sample_emission_time(double gamma, Rng& rng) {
    if (gamma <= 0.0) throw TwoLevelError("sample_emission_time: gamma must be > 0");
    return -std::log(rng.uniform()) / gamma;
}

void accumulate_train(Spectrum& s, double omega0, double tau) {
    for (std::size_t i = 0; i < s.omega.size(); ++i) {
        const double d = s.omega[i] - omega0;
        // |FT of a unit train of duration tau|^2 = (2 sin(d tau / 2) / d)^2
        double p;
        if (std::abs(d * tau) < 1e-8) {
            p = tau * tau;
        } else {
            const double sn = 2.0 * std::sin(0.5 * d * tau) / d;
            p = sn * sn;
        }
        s.power[i] += p;
    }
}

Spectrum spectrum_from_wavetrains(double gamma, double omega0, int n_trains, Rng& rng,
                                  const SpectrumOptions& opts) {
    if (n_trains < 1) throw TwoLevelError("spectrum_from_wavetrains: need n_trains >= 1");
    if (gamma <= 0.0 || omega0 <= 0.0)
        throw TwoLevelError("spectrum_from_wavetrains: gamma, omega0 must be > 0");
    Spectrum s;
    s.omega.resize(opts.bins);
    s.power.assign(opts.bins, 0.0);
    const double w = opts.half_width_in_gamma * gamma;
    for (int i = 0; i < opts.bins; ++i)
        s.omega[i] = omega0 - w + 2.0 * w * i / (opts.bins - 1);

    // Coherence-time train lengths: rate gamma/2 so the ensemble mean is the
    // Lorentzian of FWHM gamma.
    for (int i = 0; i < n_trains; ++i) {
        const double tau = -std::log(rng.uniform()) / (0.5 * gamma);
        accumulate_train(s, omega0, tau);
    }
    for (double& p : s.power) p /= n_trains;
    return s;
}

LorentzianFit fit_lorentzian(const Spectrum& s) {
    if (s.omega.size() < 8) throw TwoLevelError("fit_lorentzian: too few bins");

    // Center: power-weighted mean.
    double psum = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < s.omega.size(); ++i) {
        psum += s.power[i];
        wsum += s.power[i] * s.omega[i];
    }
    if (psum <= 0.0) throw TwoLevelError("fit_lorentzian: empty spectrum");
    const double center = wsum / psum;

    // Least squares in the amplitude for model a / (d^2 + (G/2)^2); scan the
    // width by golden section.
    const auto sse = [&](double G) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < s.omega.size(); ++i) {
            const double d = s.omega[i] - center;
            const double g = 1.0 / (d * d + 0.25 * G * G);
            num += s.power[i] * g;
            den += g * g;
        }
        const double a = num / den;
        double e = 0.0;
        for (std::size_t i = 0; i < s.omega.size(); ++i) {
            const double d = s.omega[i] - center;
            const double m = a / (d * d + 0.25 * G * G);
            e += (s.power[i] - m) * (s.power[i] - m);
        }
        return e;
    };

    const double band = s.omega.back() - s.omega.front();
    double lo = band * 1e-4, hi = band;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = sse(x1), f2 = sse(x2);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = sse(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = sse(x2);
        }
        if (hi - lo < 1e-12 * band) break;
    }
    return {center, 0.5 * (lo + hi)};
}

double ks_distance_lorentzian(const Spectrum& s, double omega0, double gamma) {
    const std::size_t n = s.omega.size();
    if (n < 2) throw TwoLevelError("ks_distance: too few bins");
    // Empirical CDF of the binned power vs. the Lorentzian CDF
    // F(d) ~ atan(2 d / gamma), both normalized over the band.
    double total = 0.0;
    for (double p : s.power) total += p;
    const auto lor_cdf = [&](double w) { return std::atan(2.0 * (w - omega0) / gamma); };
    const double f0 = lor_cdf(s.omega.front());
    const double f1 = lor_cdf(s.omega.back());

    double acc = 0.0, dmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += s.power[i];
        const double fe = acc / total;
        const double fa = (lor_cdf(s.omega[i]) - f0) / (f1 - f0);
        dmax = std::max(dmax, std::abs(fe - fa));
    }
    return dmax;
}

// ---------------------------------------------------------------------------
// Symmetrization
// ---------------------------------------------------------------------------

double symmetrized_norm(const std::vector<int>& occupancies) {
    long long N = 0;
    for (int n : occupancies) {
        if (n < 0) throw TwoLevelError("symmetrized_norm: negative occupancy");
        N += n;
    }
    if (N < 1) throw TwoLevelError("symmetrized_norm: need at least one particle");
    double prod = 1.0;
    for (long long k = 2; k <= N; ++k) prod *= static_cast<double>(k);  // N!
    for (int n : occupancies)
        for (int k = 2; k <= n; ++k) prod *= static_cast<double>(k);    // n_i!
    return 1.0 / std::sqrt(prod);
}

std::vector<double> photon_removal_average(int n,
                                           const std::vector<std::vector<double>>& gram) {
    if (n < 1) throw TwoLevelError("photon_removal_average: need n >= 1");
    std::vector<double> w(n, 1.0 / n);
    std::vector<std::vector<double>> g = gram;
    if (g.empty()) g.assign(n, std::vector<double>(n, 1.0));  // identical components
    const double nrm = combination_norm(w, g);
    if (nrm <= 0.0) throw TwoLevelError("photon_removal_average: degenerate Gram");
    for (double& wi : w) wi /= nrm;
    return w;
}

double combination_norm(const std::vector<double>& weights,
                        const std::vector<std::vector<double>>& gram) {
    const std::size_t n = weights.size();
    if (gram.size() != n) throw TwoLevelError("combination_norm: Gram size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (gram[i].size() != n) throw TwoLevelError("combination_norm: Gram size mismatch");
        for (std::size_t j = 0; j < n; ++j) s += weights[i] * gram[i][j] * weights[j];
    }
    return std::sqrt(s);
}

double total_absorption_probability(
    const std::vector<std::complex<double>>& channel_amplitudes) {
    if (channel_amplitudes.empty())
        throw TwoLevelError("total_absorption_probability: need n >= 1 channels");
    double p = 0.0;
    for (const auto& a : channel_amplitudes) p += std::norm(a);
    return p;
}

}  // namespace pw::twolevel

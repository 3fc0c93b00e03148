#include "pilotwave/kemmer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace pw::kemmer {

// ---------------------------------------------------------------------------
// Point-wise algebra
// ---------------------------------------------------------------------------

KemmerNode KemmerNode::standard(const CVec3& E, const CVec3& B, const CVec3& A,
                                std::complex<double> phi) {
    KemmerNode n;
    n.E = E;
    n.B = B;
    n.A = A;
    n.phi = phi;
    const CVec3 ones{1.0, 1.0, 1.0};
    n.pad_E = ones;
    n.pad_B = ones;
    n.pad_A = ones;
    n.pad_phi = 1.0;
    return n;
}

KemmerNode KemmerNode::vacuum_state() {
    KemmerNode n = standard({}, {}, {}, 0.0);
    n.vacuum = true;
    return n;
}

std::complex<double> neutral_dot(const KemmerNode& bra, const KemmerNode& ket) {
    return std::conj(bra.pad_phi) * ket.pad_phi;
}

std::complex<double> energy_dot(const KemmerNode& bra, const KemmerNode& ket) {
    return cdot(bra.E, ket.E) + cdot(bra.B, ket.B);
}

CVec3 cross_dot(const KemmerNode& bra, const KemmerNode& ket) { return ccross(bra.E, ket.B); }

KemmerNode apply_A(const KemmerNode& ket) {
    KemmerNode out;  // all-zero column
    if (ket.vacuum) return out;
    out.pad_A = ket.A;
    return out;
}

CVec3 extract_A(const KemmerNode& vacuum_bra, const KemmerNode& ket) {
    const KemmerNode a_ket = apply_A(ket);
    const CVec3 b = vacuum_bra.pad_A.conj();
    return {b.x * a_ket.pad_A.x, b.y * a_ket.pad_A.y, b.z * a_ket.pad_A.z};
}

CVec3 extract_A_conj(const KemmerNode& bra, const KemmerNode& vacuum_ket) {
    if (bra.vacuum) return {};  // vac^dag A^dag = 0
    const CVec3 b = bra.A.conj();
    return {b.x * vacuum_ket.pad_A.x, b.y * vacuum_ket.pad_A.y, b.z * vacuum_ket.pad_A.z};
}

Mat20 neutral_dot_matrix() {
    Mat20 m{};
    for (auto& row : m) row.fill(0.0);
    m[19][19] = 1.0;
    return m;
}

DensitySplit density_split_check(std::complex<double> phi_plus, std::complex<double> phi_minus,
                                 double energy, double t) {
    DensitySplit out;
    out.j0_plus = std::norm(phi_plus);
    out.j0_minus = std::norm(phi_minus);
    const std::complex<double> cross =
        std::conj(phi_plus) * phi_minus * std::exp(std::complex<double>(0.0, 2.0 * energy * t));
    out.naive = out.j0_plus - out.j0_minus + 2.0 * cross.real();
    return out;
}

// ---------------------------------------------------------------------------
// Grid state
// ---------------------------------------------------------------------------

KemmerGrid::KemmerGrid(int nx, int ny, int nz, double h, Boundary bc, Vec3 origin)
    : nx_(nx), ny_(ny), nz_(nz), h_(h), bc_(bc), origin_(origin) {
    if (nx < 5 || ny < 5 || nz < 5)
        throw GridError("kemmer grid: each dimension needs >= 5 nodes (2 ghost layers)");
    if (h <= 0.0) throw GridError("kemmer grid: spacing must be positive");
    n_ = static_cast<std::size_t>(nx) * ny * nz;
    f_.assign(static_cast<std::size_t>(kComponents) * n_, 0.0);
    // Pads are fixed at the all-ones column values.
    for (int c = static_cast<int>(Component::PadEx); c < kComponents; ++c)
        std::fill_n(f_.begin() + static_cast<std::size_t>(c) * n_, n_, 1.0);
}

Vec3 KemmerGrid::E_at(int i, int j, int k) const {
    return {at(Component::Ex, i, j, k), at(Component::Ey, i, j, k), at(Component::Ez, i, j, k)};
}
Vec3 KemmerGrid::B_at(int i, int j, int k) const {
    return {at(Component::Bx, i, j, k), at(Component::By, i, j, k), at(Component::Bz, i, j, k)};
}
Vec3 KemmerGrid::A_at(int i, int j, int k) const {
    return {at(Component::Ax, i, j, k), at(Component::Ay, i, j, k), at(Component::Az, i, j, k)};
}
double KemmerGrid::phi_at(int i, int j, int k) const { return at(Component::Phi, i, j, k); }

void KemmerGrid::set_E(int i, int j, int k, const Vec3& v) {
    at(Component::Ex, i, j, k) = v.x;
    at(Component::Ey, i, j, k) = v.y;
    at(Component::Ez, i, j, k) = v.z;
}
void KemmerGrid::set_B(int i, int j, int k, const Vec3& v) {
    at(Component::Bx, i, j, k) = v.x;
    at(Component::By, i, j, k) = v.y;
    at(Component::Bz, i, j, k) = v.z;
}
void KemmerGrid::set_A(int i, int j, int k, const Vec3& v) {
    at(Component::Ax, i, j, k) = v.x;
    at(Component::Ay, i, j, k) = v.y;
    at(Component::Az, i, j, k) = v.z;
}
void KemmerGrid::set_phi(int i, int j, int k, double v) { at(Component::Phi, i, j, k) = v; }

KemmerNode KemmerGrid::node(int i, int j, int k) const {
    KemmerNode n;
    n.E = CVec3(E_at(i, j, k));
    n.B = CVec3(B_at(i, j, k));
    n.A = CVec3(A_at(i, j, k));
    n.phi = phi_at(i, j, k);
    n.pad_E = CVec3(Vec3{at(Component::PadEx, i, j, k), at(Component::PadEy, i, j, k),
                         at(Component::PadEz, i, j, k)});
    n.pad_B = CVec3(Vec3{at(Component::PadBx, i, j, k), at(Component::PadBy, i, j, k),
                         at(Component::PadBz, i, j, k)});
    n.pad_A = CVec3(Vec3{at(Component::PadAx, i, j, k), at(Component::PadAy, i, j, k),
                         at(Component::PadAz, i, j, k)});
    n.pad_phi = at(Component::PadPhi, i, j, k);
    return n;
}

// ---------------------------------------------------------------------------
// Spatial derivatives
// ---------------------------------------------------------------------------

namespace {

enum class StencilMode : std::uint8_t { Fourth, Second, Frozen };

// Per-axis neighbor bookkeeping. Periodic axes wrap; absorbing axes fall back
// to 2nd order one layer in and freeze the outermost layer (updated by the
// Mur condition after the step).
struct AxisStencil {
    std::vector<int> m2, m1, p1, p2;
    std::vector<StencilMode> mode;

    static AxisStencil build(int n, Boundary bc) {
        AxisStencil s;
        s.m2.resize(n);
        s.m1.resize(n);
        s.p1.resize(n);
        s.p2.resize(n);
        s.mode.resize(n);
        for (int i = 0; i < n; ++i) {
            if (bc == Boundary::Periodic) {
                s.mode[i] = StencilMode::Fourth;
                s.m2[i] = (i - 2 + 2 * n) % n;
                s.m1[i] = (i - 1 + n) % n;
                s.p1[i] = (i + 1) % n;
                s.p2[i] = (i + 2) % n;
            } else {
                if (i >= 2 && i <= n - 3) {
                    s.mode[i] = StencilMode::Fourth;
                    s.m2[i] = i - 2;
                    s.m1[i] = i - 1;
                    s.p1[i] = i + 1;
                    s.p2[i] = i + 2;
                } else if (i >= 1 && i <= n - 2) {
                    s.mode[i] = StencilMode::Second;
                    s.m2[i] = i - 1;
                    s.m1[i] = i - 1;
                    s.p1[i] = i + 1;
                    s.p2[i] = i + 1;
                } else {
                    s.mode[i] = StencilMode::Frozen;
                    s.m2[i] = s.m1[i] = s.p1[i] = s.p2[i] = i;
                }
            }
        }
        return s;
    }
};

struct StencilSet {
    AxisStencil x, y, z;
    double inv12h, inv2h;
    std::size_t sx, sy, sz;  // flat strides

    StencilSet(const KemmerGrid& g)
        : x(AxisStencil::build(g.nx(), g.boundary())),
          y(AxisStencil::build(g.ny(), g.boundary())),
          z(AxisStencil::build(g.nz(), g.boundary())),
          inv12h(1.0 / (12.0 * g.h())),
          inv2h(1.0 / (2.0 * g.h())),
          sx(static_cast<std::size_t>(g.ny()) * g.nz()),
          sy(static_cast<std::size_t>(g.nz())),
          sz(1) {}

    double dx(const double* f, int i, int j, int k) const {
        const std::size_t base = static_cast<std::size_t>(j) * sy + k;
        switch (x.mode[i]) {
            case StencilMode::Fourth:
                return (8.0 * (f[x.p1[i] * sx + base] - f[x.m1[i] * sx + base]) -
                        (f[x.p2[i] * sx + base] - f[x.m2[i] * sx + base])) * inv12h;
            case StencilMode::Second:
                return (f[x.p1[i] * sx + base] - f[x.m1[i] * sx + base]) * inv2h;
            default:
                return 0.0;
        }
    }
    double dy(const double* f, int i, int j, int k) const {
        const std::size_t base = static_cast<std::size_t>(i) * sx + k;
        switch (y.mode[j]) {
            case StencilMode::Fourth:
                return (8.0 * (f[base + y.p1[j] * sy] - f[base + y.m1[j] * sy]) -
                        (f[base + y.p2[j] * sy] - f[base + y.m2[j] * sy])) * inv12h;
            case StencilMode::Second:
                return (f[base + y.p1[j] * sy] - f[base + y.m1[j] * sy]) * inv2h;
            default:
                return 0.0;
        }
    }
    double dz(const double* f, int i, int j, int k) const {
        const std::size_t base = static_cast<std::size_t>(i) * sx + static_cast<std::size_t>(j) * sy;
        switch (z.mode[k]) {
            case StencilMode::Fourth:
                return (8.0 * (f[base + z.p1[k]] - f[base + z.m1[k]]) -
                        (f[base + z.p2[k]] - f[base + z.m2[k]])) * inv12h;
            case StencilMode::Second:
                return (f[base + z.p1[k]] - f[base + z.m1[k]]) * inv2h;
            default:
                return 0.0;
        }
    }
};

// Writes the source-free rate of the physical blocks into `rate` (full-size
// component-major buffer); pad components are zeroed once by the caller.
void hamiltonian_rate(const KemmerGrid& g, const StencilSet& st, const double* y, double* rate,
                      int threads) {
    const std::size_t n = g.nodes();
    const double* Ex = y + static_cast<std::size_t>(Component::Ex) * n;
    const double* Ey = y + static_cast<std::size_t>(Component::Ey) * n;
    const double* Ez = y + static_cast<std::size_t>(Component::Ez) * n;
    const double* Bx = y + static_cast<std::size_t>(Component::Bx) * n;
    const double* By = y + static_cast<std::size_t>(Component::By) * n;
    const double* Bz = y + static_cast<std::size_t>(Component::Bz) * n;
    const double* Ax = y + static_cast<std::size_t>(Component::Ax) * n;
    const double* Ay = y + static_cast<std::size_t>(Component::Ay) * n;
    const double* Az = y + static_cast<std::size_t>(Component::Az) * n;
    const double* Ph = y + static_cast<std::size_t>(Component::Phi) * n;

    double* rEx = rate + static_cast<std::size_t>(Component::Ex) * n;
    double* rEy = rate + static_cast<std::size_t>(Component::Ey) * n;
    double* rEz = rate + static_cast<std::size_t>(Component::Ez) * n;
    double* rBx = rate + static_cast<std::size_t>(Component::Bx) * n;
    double* rBy = rate + static_cast<std::size_t>(Component::By) * n;
    double* rBz = rate + static_cast<std::size_t>(Component::Bz) * n;
    double* rAx = rate + static_cast<std::size_t>(Component::Ax) * n;
    double* rAy = rate + static_cast<std::size_t>(Component::Ay) * n;
    double* rAz = rate + static_cast<std::size_t>(Component::Az) * n;
    double* rPh = rate + static_cast<std::size_t>(Component::Phi) * n;

    const auto slab = [&](int i0, int i1) {
        for (int i = i0; i < i1; ++i) {
            for (int j = 0; j < g.ny(); ++j) {
                for (int k = 0; k < g.nz(); ++k) {
                    const std::size_t id = g.flat(i, j, k);
                    // dE/dt = curl B
                    rEx[id] = st.dy(Bz, i, j, k) - st.dz(By, i, j, k);
                    rEy[id] = st.dz(Bx, i, j, k) - st.dx(Bz, i, j, k);
                    rEz[id] = st.dx(By, i, j, k) - st.dy(Bx, i, j, k);
                    // dB/dt = -curl E
                    rBx[id] = st.dz(Ey, i, j, k) - st.dy(Ez, i, j, k);
                    rBy[id] = st.dx(Ez, i, j, k) - st.dz(Ex, i, j, k);
                    rBz[id] = st.dy(Ex, i, j, k) - st.dx(Ey, i, j, k);
                    // dA/dt = -E - grad phi
                    rAx[id] = -Ex[id] - st.dx(Ph, i, j, k);
                    rAy[id] = -Ey[id] - st.dy(Ph, i, j, k);
                    rAz[id] = -Ez[id] - st.dz(Ph, i, j, k);
                    // dphi/dt = div A
                    rPh[id] = st.dx(Ax, i, j, k) + st.dy(Ay, i, j, k) + st.dz(Az, i, j, k);
                }
            }
        }
    };

    if (threads <= 1 || g.nx() < 2 * threads) {
        slab(0, g.nx());
    } else {
        std::vector<std::thread> pool;
        const int per = (g.nx() + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            const int i0 = w * per;
            const int i1 = std::min(g.nx(), i0 + per);
            if (i0 >= i1) break;
            pool.emplace_back(slab, i0, i1);
        }
        for (auto& t : pool) t.join();
    }
}

void add_source(const KemmerGrid& g, const KemmerSource& src, double t, double* rate) {
    if (src.empty()) return;
    const double amp = src.amplitude(t);
    const std::size_t n = g.nodes();
    double* rEx = rate + static_cast<std::size_t>(Component::Ex) * n;
    double* rEy = rate + static_cast<std::size_t>(Component::Ey) * n;
    double* rEz = rate + static_cast<std::size_t>(Component::Ez) * n;
    for (const auto& [id, w] : src.profile_E) {
        rEx[id] -= amp * w.x;  // dE/dt = curl B - j
        rEy[id] -= amp * w.y;
        rEz[id] -= amp * w.z;
    }
}

}  // namespace

KemmerSource make_smoothed_dipole_source(const KemmerGrid& grid, const Vec3& center,
                                         const Vec3& axis, double p0, double omega,
                                         double delta, double turn_on_periods) {
    const double sigma = grid.h();
    const double r_support = 3.0 * sigma;  // 3-cell Gaussian
    const Vec3 ahat = normalized(axis);

    KemmerSource src;
    src.split = SourceSplit::Free;

    std::vector<std::pair<std::size_t, double>> raw;
    double sum = 0.0;
    for (int i = 0; i < grid.nx(); ++i) {
        for (int j = 0; j < grid.ny(); ++j) {
            for (int k = 0; k < grid.nz(); ++k) {
                const Vec3 d = grid.node_position(i, j, k) - center;
                const double r2 = d.norm2();
                if (r2 > r_support * r_support) continue;
                const double w = std::exp(-0.5 * r2 / (sigma * sigma));
                raw.emplace_back(grid.flat(i, j, k), w);
                sum += w;
            }
        }
    }
    if (raw.empty() || sum <= 0.0) throw GridError("dipole source: center outside the grid");

    // Normalize the discrete kernel to unit integral and compensate the
    // Gaussian form factor exp(-(omega sigma)^2/2) at the drive frequency.
    const double h3 = grid.h() * grid.h() * grid.h();
    const double form = std::exp(0.5 * omega * omega * sigma * sigma);
    const double scale = form / (sum * h3);
    src.profile_E.reserve(raw.size());
    for (const auto& [id, w] : raw) src.profile_E.emplace_back(id, ahat * (w * scale));

    // j = 4 pi pdot(t) for the Gaussian-normalized fields of this library.
    const double ramp = turn_on_periods * 2.0 * std::numbers::pi / (omega > 0 ? omega : 1.0);
    src.amplitude = [p0, omega, delta, ramp](double t) {
        double env = 1.0;
        if (ramp > 0.0 && t < ramp) {
            const double s = std::sin(0.5 * std::numbers::pi * t / ramp);
            env = (t <= 0.0) ? 0.0 : s * s;
        }
        return -4.0 * std::numbers::pi * env * p0 * omega * std::sin(omega * t - delta);
    };
    return src;
}

KemmerGrid apply_hamiltonian(const KemmerGrid& state) {
    KemmerGrid rate = state;  // copy geometry; values overwritten below
    std::fill(rate.data().begin(), rate.data().end(), 0.0);
    const StencilSet st(state);
    hamiltonian_rate(state, st, state.data().data(), rate.data().data(), 1);
    return rate;
}

namespace {

// First-order Mur outgoing-wave update for the outermost layer of every face;
// applied to the physical blocks after each full step.
struct MurBuffers {
    // Pre-step copies of layer 0 and layer 1 for each of the 6 faces, for the
    // 10 physical components.
    std::vector<double> xm0, xm1, xp0, xp1, ym0, ym1, yp0, yp1, zm0, zm1, zp0, zp1;

    void resize(const KemmerGrid& g) {
        const std::size_t fx = static_cast<std::size_t>(g.ny()) * g.nz() * 10;
        const std::size_t fy = static_cast<std::size_t>(g.nx()) * g.nz() * 10;
        const std::size_t fz = static_cast<std::size_t>(g.nx()) * g.ny() * 10;
        xm0.resize(fx); xm1.resize(fx); xp0.resize(fx); xp1.resize(fx);
        ym0.resize(fy); ym1.resize(fy); yp0.resize(fy); yp1.resize(fy);
        zm0.resize(fz); zm1.resize(fz); zp0.resize(fz); zp1.resize(fz);
    }
};

void save_faces(const KemmerGrid& g, MurBuffers& m) {
    std::size_t q = 0;
    for (int c = 0; c < 10; ++c) {
        const auto cc = static_cast<Component>(c);
        for (int j = 0; j < g.ny(); ++j)
            for (int k = 0; k < g.nz(); ++k, ++q) {
                m.xm0[q] = g.at(cc, 0, j, k);
                m.xm1[q] = g.at(cc, 1, j, k);
                m.xp0[q] = g.at(cc, g.nx() - 1, j, k);
                m.xp1[q] = g.at(cc, g.nx() - 2, j, k);
            }
    }
    q = 0;
    for (int c = 0; c < 10; ++c) {
        const auto cc = static_cast<Component>(c);
        for (int i = 0; i < g.nx(); ++i)
            for (int k = 0; k < g.nz(); ++k, ++q) {
                m.ym0[q] = g.at(cc, i, 0, k);
                m.ym1[q] = g.at(cc, i, 1, k);
                m.yp0[q] = g.at(cc, i, g.ny() - 1, k);
                m.yp1[q] = g.at(cc, i, g.ny() - 2, k);
            }
    }
    q = 0;
    for (int c = 0; c < 10; ++c) {
        const auto cc = static_cast<Component>(c);
        for (int i = 0; i < g.nx(); ++i)
            for (int j = 0; j < g.ny(); ++j, ++q) {
                m.zm0[q] = g.at(cc, i, j, 0);
                m.zm1[q] = g.at(cc, i, j, 1);
                m.zp0[q] = g.at(cc, i, j, g.nz() - 1);
                m.zp1[q] = g.at(cc, i, j, g.nz() - 2);
            }
    }
}

void apply_mur(KemmerGrid& g, const MurBuffers& m, double dt) {
    const double coef = (dt - g.h()) / (dt + g.h());  // c = 1
    std::size_t q = 0;
    for (int c = 0; c < 10; ++c) {
        const auto cc = static_cast<Component>(c);
        for (int j = 0; j < g.ny(); ++j)
            for (int k = 0; k < g.nz(); ++k, ++q) {
                g.at(cc, 0, j, k) = m.xm1[q] + coef * (g.at(cc, 1, j, k) - m.xm0[q]);
                g.at(cc, g.nx() - 1, j, k) =
                    m.xp1[q] + coef * (g.at(cc, g.nx() - 2, j, k) - m.xp0[q]);
            }
    }
    q = 0;
    for (int c = 0; c < 10; ++c) {
        const auto cc = static_cast<Component>(c);
        for (int i = 0; i < g.nx(); ++i)
            for (int k = 0; k < g.nz(); ++k, ++q) {
                g.at(cc, i, 0, k) = m.ym1[q] + coef * (g.at(cc, i, 1, k) - m.ym0[q]);
                g.at(cc, i, g.ny() - 1, k) =
                    m.yp1[q] + coef * (g.at(cc, i, g.ny() - 2, k) - m.yp0[q]);
            }
    }
    q = 0;
    for (int c = 0; c < 10; ++c) {
        const auto cc = static_cast<Component>(c);
        for (int i = 0; i < g.nx(); ++i)
            for (int j = 0; j < g.ny(); ++j, ++q) {
                g.at(cc, i, j, 0) = m.zm1[q] + coef * (g.at(cc, i, j, 1) - m.zm0[q]);
                g.at(cc, i, j, g.nz() - 1) =
                    m.zp1[q] + coef * (g.at(cc, i, j, g.nz() - 2) - m.zp0[q]);
            }
    }
}

bool finite_state(const std::vector<double>& f) {
    for (double v : f)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace

void evolve(KemmerGrid& state, const KemmerSource& source, double dt, int steps,
            const EvolveOptions& opts) {
    if (dt <= 0.0 || steps < 0) throw EvolveError("evolve: dt must be > 0 and steps >= 0");
    if (dt > 0.5 * state.h() + 1e-15)
        throw EvolveError("evolve: CFL violation, require dt <= 0.5 h");

    const StencilSet st(state);
    const std::size_t total = state.data().size();
    const std::size_t phys = static_cast<std::size_t>(10) * state.nodes();

    std::vector<double> k(total, 0.0), stage(total, 0.0), acc(total, 0.0);
    // Pads carry ones in stage/acc so node views stay consistent; their rates
    // are zero so they are never modified.
    std::copy(state.data().begin(), state.data().end(), stage.begin());
    std::copy(state.data().begin(), state.data().end(), acc.begin());

    MurBuffers mur;
    const bool absorbing = state.boundary() == Boundary::Absorbing;
    if (absorbing) mur.resize(state);

    double t = opts.start_time;
    const int threads = std::max(1, opts.threads);

    for (int s = 0; s < steps; ++s) {
        double* y = state.data().data();
        if (absorbing) save_faces(state, mur);

        // k1
        hamiltonian_rate(state, st, y, k.data(), threads);
        add_source(state, source, t, k.data());
        for (std::size_t q = 0; q < phys; ++q) {
            acc[q] = y[q] + (dt / 6.0) * k[q];
            stage[q] = y[q] + 0.5 * dt * k[q];
        }
        // k2
        hamiltonian_rate(state, st, stage.data(), k.data(), threads);
        add_source(state, source, t + 0.5 * dt, k.data());
        for (std::size_t q = 0; q < phys; ++q) {
            acc[q] += (dt / 3.0) * k[q];
            stage[q] = y[q] + 0.5 * dt * k[q];
        }
        // k3
        hamiltonian_rate(state, st, stage.data(), k.data(), threads);
        add_source(state, source, t + 0.5 * dt, k.data());
        for (std::size_t q = 0; q < phys; ++q) {
            acc[q] += (dt / 3.0) * k[q];
            stage[q] = y[q] + dt * k[q];
        }
        // k4
        hamiltonian_rate(state, st, stage.data(), k.data(), threads);
        add_source(state, source, t + dt, k.data());
        for (std::size_t q = 0; q < phys; ++q) y[q] = acc[q] + (dt / 6.0) * k[q];

        if (absorbing) apply_mur(state, mur, dt);
        t += dt;

        if (!finite_state(state.data()))
            throw EvolveError("evolve: non-finite value detected at step " + std::to_string(s));
    }
}

double free_norm(const KemmerGrid& state) {
    const double h3 = state.h() * state.h() * state.h();
    const std::size_t n = state.nodes();
    const double* Ex = state.component(Component::Ex);
    const double* Ey = state.component(Component::Ey);
    const double* Ez = state.component(Component::Ez);
    const double* Bx = state.component(Component::Bx);
    const double* By = state.component(Component::By);
    const double* Bz = state.component(Component::Bz);

    double norm = 0.0;
    double umax = 0.0;
    std::size_t imax = 0;
    for (std::size_t q = 0; q < n; ++q) {
        const double u = Ex[q] * Ex[q] + Ey[q] * Ey[q] + Ez[q] * Ez[q] + Bx[q] * Bx[q] +
                         By[q] * By[q] + Bz[q] * Bz[q];
        norm += u;
        if (u > umax) {
            umax = u;
            imax = q;
        }
    }
    norm *= h3;
    if (norm == 0.0) return 0.0;

    // Divergence guard: shell-averaged energy density around the peak node.
    // A free field decays like 1/r^2 (slope -2 in log-log); an attached
    // profile decays at least like 1/r^4 and is rejected.
    const int kz = static_cast<int>(imax % state.nz());
    const int kj = static_cast<int>((imax / state.nz()) % state.ny());
    const int ki = static_cast<int>(imax / (static_cast<std::size_t>(state.ny()) * state.nz()));
    constexpr int kShells = 8;
    double shell_sum[kShells] = {};
    int shell_cnt[kShells] = {};
    const int reach = kShells + 1;
    for (int di = -reach; di <= reach; ++di) {
        const int i = ki + di;
        if (i < 0 || i >= state.nx()) continue;
        for (int dj = -reach; dj <= reach; ++dj) {
            const int j = kj + dj;
            if (j < 0 || j >= state.ny()) continue;
            for (int dk = -reach; dk <= reach; ++dk) {
                const int k = kz + dk;
                if (k < 0 || k >= state.nz()) continue;
                const double rr = std::sqrt(double(di * di + dj * dj + dk * dk));
                const int shell = static_cast<int>(std::floor(rr - 1.5));
                if (shell < 0 || shell >= kShells) continue;
                const Vec3 E = state.E_at(i, j, k);
                const Vec3 B = state.B_at(i, j, k);
                shell_sum[shell] += E.norm2() + B.norm2();
                shell_cnt[shell] += 1;
            }
        }
    }
    // Least-squares slope of log(u_shell) vs log(r_shell).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int s = 0; s < kShells; ++s) {
        if (shell_cnt[s] == 0) continue;
        const double u = shell_sum[s] / shell_cnt[s];
        if (u <= 0.0) continue;
        const double lx = std::log(static_cast<double>(s) + 2.0);
        const double ly = std::log(u);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m >= 4) {
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        if (slope < -3.0)
            throw NormError("free_norm: integrand diverges like an attached field near r = 0");
    }
    return norm;
}

void normalize_free(KemmerGrid& state) {
    const double nrm = free_norm(state);
    if (nrm <= 0.0) throw NormError("normalize_free: zero norm");
    const double s = 1.0 / std::sqrt(nrm);
    const std::size_t phys = static_cast<std::size_t>(10) * state.nodes();
    double* f = state.data().data();
    for (std::size_t q = 0; q < phys; ++q) f[q] *= s;
}

double l2_norm(const KemmerGrid& g) {
    double s = 0.0;
    for (double v : g.data()) s += v * v;
    return std::sqrt(s);
}

double l2_diff(const KemmerGrid& a, const KemmerGrid& b) {
    if (a.data().size() != b.data().size()) throw GridError("l2_diff: size mismatch");
    double s = 0.0;
    for (std::size_t q = 0; q < a.data().size(); ++q) {
        const double d = a.data()[q] - b.data()[q];
        s += d * d;
    }
    return std::sqrt(s);
}

void add_plane_wave(KemmerGrid& g, int mx, int my, int mz, const Vec3& pol, double E0,
                    double t) {
    const Vec3 k{2.0 * std::numbers::pi * mx / (g.nx() * g.h()),
                 2.0 * std::numbers::pi * my / (g.ny() * g.h()),
                 2.0 * std::numbers::pi * mz / (g.nz() * g.h())};
    const double omega = k.norm();
    if (omega == 0.0) throw GridError("add_plane_wave: zero wave vector");
    if (std::abs(dot(k, pol)) > 1e-12 * k.norm() * pol.norm())
        throw GridError("add_plane_wave: polarization must be transverse to k");
    const Vec3 khat = k / omega;
    const Vec3 ehat = normalized(pol);

    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j)
            for (int kk = 0; kk < g.nz(); ++kk) {
                const Vec3 r{i * g.h(), j * g.h(), kk * g.h()};
                const double ph = dot(k, r) - omega * t;
                const Vec3 E = ehat * (E0 * std::cos(ph));
                g.set_E(i, j, kk, g.E_at(i, j, kk) + E);
                g.set_B(i, j, kk, g.B_at(i, j, kk) + cross(khat, E));
                g.set_A(i, j, kk, g.A_at(i, j, kk) + ehat * (E0 / omega * std::sin(ph)));
            }
}

}  // namespace pw::kemmer

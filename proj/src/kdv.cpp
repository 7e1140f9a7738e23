#include "oplearn/kdv.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oplearn {

namespace {
using cplx = std::complex<double>;

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

// iterative radix-2 FFT; inverse applies conjugation and 1/n scaling
void fft_inplace(std::vector<cplx>& a, bool inverse) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (cplx& x : a) x *= inv;
    }
}

// phi-function weights via a unit-circle contour mean around each h*L value;
// valid for the purely imaginary spectrum of the dispersion operator
struct EtdrkCoeffs {
    std::vector<cplx> e_full, e_half, q, f1, f2, f3;
};

EtdrkCoeffs make_coeffs(const std::vector<cplx>& lin, double h) {
    const int m_pts = 32;
    const size_t n = lin.size();
    EtdrkCoeffs c;
    c.e_full.resize(n);
    c.e_half.resize(n);
    c.q.assign(n, 0.0);
    c.f1.assign(n, 0.0);
    c.f2.assign(n, 0.0);
    c.f3.assign(n, 0.0);
    for (size_t k = 0; k < n; ++k) {
        const cplx z = h * lin[k];
        c.e_full[k] = std::exp(z);
        c.e_half[k] = std::exp(0.5 * z);
        cplx q = 0, f1 = 0, f2 = 0, f3 = 0;
        for (int r = 0; r < m_pts; ++r) {
            const double th = 2.0 * std::numbers::pi * (r + 0.5) / m_pts;
            const cplx zr = z + cplx(std::cos(th), std::sin(th));
            const cplx ez = std::exp(zr);
            const cplx zr2 = zr * zr, zr3 = zr2 * zr;
            q += (std::exp(0.5 * zr) - 1.0) / zr;
            f1 += (-4.0 - zr + ez * (4.0 - 3.0 * zr + zr2)) / zr3;
            f2 += (2.0 + zr + ez * (-2.0 + zr)) / zr3;
            f3 += (-4.0 - 3.0 * zr - zr2 + ez * (4.0 - zr)) / zr3;
        }
        const double inv = h / m_pts;
        c.q[k] = q * inv;
        c.f1[k] = f1 * inv;
        c.f2[k] = f2 * inv;
        c.f3[k] = f3 * inv;
    }
    return c;
}
} // namespace

double kdv_soliton(double x, double t, double speed, double center) {
    const double arg = 0.5 * std::sqrt(speed) * (x - speed * t - center);
    const double s = 1.0 / std::cosh(arg);
    return -0.5 * speed * s * s;
}

FieldSolution kdv_solve(const Tensor& u0, const Grid1D& grid, double dt, double horizon,
                        long n_out) {
    const long m = grid.points;
    if (!is_power_of_two(m) || m < 8)
        throw std::invalid_argument("kdv: grid points must be a power of two (>= 8)");
    if (u0.rank() != 1 || u0.numel() != m)
        throw std::invalid_argument("kdv: initial condition does not match the grid");
    if (dt <= 0 || horizon <= 0 || n_out < 2)
        throw std::invalid_argument("kdv: invalid time parameters");

    const long total_steps = std::llround(horizon / dt);
    if (total_steps < n_out - 1 || std::fabs(total_steps * dt - horizon) > 1e-9 * horizon ||
        total_steps % (n_out - 1) != 0)
        throw std::invalid_argument("kdv: horizon must be a multiple of (n_out-1) steps");
    const long stride = total_steps / (n_out - 1);

    // wavenumbers and the linear symbol of -d^3/dx^3
    const double k0 = 2.0 * std::numbers::pi / grid.length;
    std::vector<double> wave(static_cast<size_t>(m));
    std::vector<cplx> lin(static_cast<size_t>(m));
    for (long j = 0; j < m; ++j) {
        const long idx = j <= m / 2 ? j : j - m;
        wave[static_cast<size_t>(j)] = k0 * static_cast<double>(idx);
        const double k = wave[static_cast<size_t>(j)];
        lin[static_cast<size_t>(j)] = cplx(0.0, k * k * k);
    }
    // Nyquist derivative mode is ill-defined on a real grid
    wave[static_cast<size_t>(m / 2)] = 0.0;
    lin[static_cast<size_t>(m / 2)] = 0.0;

    const long cutoff = m / 3;
    const EtdrkCoeffs co = make_coeffs(lin, dt);

    std::vector<cplx> v(static_cast<size_t>(m)), scratch(static_cast<size_t>(m));
    for (long j = 0; j < m; ++j) v[static_cast<size_t>(j)] = u0[j];
    fft_inplace(v, false);

    // N(v) = 3 i k fft(u^2) with modes beyond the 2/3 cutoff removed
    auto nonlinear = [&](const std::vector<cplx>& vin, std::vector<cplx>& out) {
        out = vin;
        fft_inplace(out, true);
        for (long j = 0; j < m; ++j) {
            const double ur = out[static_cast<size_t>(j)].real();
            out[static_cast<size_t>(j)] = ur * ur;
        }
        fft_inplace(out, false);
        for (long j = 0; j < m; ++j) {
            const long idx = j <= m / 2 ? j : j - m;
            if (std::labs(idx) > cutoff) {
                out[static_cast<size_t>(j)] = 0.0;
            } else {
                out[static_cast<size_t>(j)] *= cplx(0.0, 3.0 * wave[static_cast<size_t>(j)]);
            }
        }
    };

    FieldSolution sol;
    sol.grid = grid;
    sol.bc = BoundaryKind::Periodic;
    sol.dt_out = horizon / static_cast<double>(n_out - 1);
    sol.u = Tensor({n_out, m});

    auto record = [&](long row, long step) {
        scratch = v;
        fft_inplace(scratch, true);
        double active = 0.0, tail = 0.0;
        for (long j = 0; j < m; ++j) {
            const double val = scratch[static_cast<size_t>(j)].real();
            if (!std::isfinite(val))
                throw std::runtime_error("kdv: non-finite field at step " + std::to_string(step));
            sol.u.at(row, j) = val;
            const long idx = j <= m / 2 ? j : j - m;
            const long aidx = std::labs(idx);
            if (aidx > 0 && aidx <= cutoff) {
                const double e = std::norm(v[static_cast<size_t>(j)]);
                active += e;
                if (2 * aidx > cutoff) tail += e;
            }
        }
        if (active > 1e-12 && tail > 0.25 * active)
            throw std::runtime_error("kdv: spectral tail energy indicates aliasing blow-up at step " +
                                     std::to_string(step));
    };
    record(0, 0);

    std::vector<cplx> nv(static_cast<size_t>(m)), na(static_cast<size_t>(m)),
        nb(static_cast<size_t>(m)), nc(static_cast<size_t>(m)), a(static_cast<size_t>(m)),
        b(static_cast<size_t>(m)), cst(static_cast<size_t>(m));

    long written = 1;
    for (long step = 1; step <= total_steps; ++step) {
        nonlinear(v, nv);
        for (long j = 0; j < m; ++j) {
            const size_t s = static_cast<size_t>(j);
            a[s] = co.e_half[s] * v[s] + co.q[s] * nv[s];
        }
        nonlinear(a, na);
        for (long j = 0; j < m; ++j) {
            const size_t s = static_cast<size_t>(j);
            b[s] = co.e_half[s] * v[s] + co.q[s] * na[s];
        }
        nonlinear(b, nb);
        for (long j = 0; j < m; ++j) {
            const size_t s = static_cast<size_t>(j);
            cst[s] = co.e_half[s] * a[s] + co.q[s] * (2.0 * nb[s] - nv[s]);
        }
        nonlinear(cst, nc);
        for (long j = 0; j < m; ++j) {
            const size_t s = static_cast<size_t>(j);
            v[s] = co.e_full[s] * v[s] + co.f1[s] * nv[s] + co.f2[s] * (na[s] + nb[s]) +
                   co.f3[s] * nc[s];
        }
        if (step % stride == 0) record(written++, step);
    }
    return sol;
}

} // namespace oplearn

#include "nriwg/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace nriwg {

Mat3 Mat3::pure_state(const std::array<cplx, 3>& psi)
{
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m.a[i][j] = psi[i] * std::conj(psi[j]);
    return m;
}

Mat3 Mat3::operator+(const Mat3& o) const
{
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m.a[i][j] = a[i][j] + o.a[i][j];
    return m;
}

Mat3 Mat3::operator-(const Mat3& o) const
{
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m.a[i][j] = a[i][j] - o.a[i][j];
    return m;
}

Mat3 Mat3::operator*(const Mat3& o) const
{
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            cplx s = 0;
            for (int l = 0; l < 3; ++l)
                s += a[i][l] * o.a[l][j];
            m.a[i][j] = s;
        }
    return m;
}

Mat3 Mat3::scaled(cplx f) const
{
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m.a[i][j] = f * a[i][j];
    return m;
}

Mat3 Mat3::dagger() const
{
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m.a[i][j] = std::conj(a[j][i]);
    return m;
}

cplx Mat3::trace() const { return a[0][0] + a[1][1] + a[2][2]; }

double Mat3::hermiticity_defect() const
{
    double d = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            d = std::max(d, std::abs(a[i][j] - std::conj(a[j][i])));
    return d;
}

std::array<double, 3> hermitian_eigenvalues(const Mat3& m)
{
    const double p1 = std::norm(m.a[0][1]) + std::norm(m.a[0][2]) + std::norm(m.a[1][2]);
    const double q = m.trace().real() / 3.0;
    if (p1 < 1e-300) {
        std::array<double, 3> e{m.a[0][0].real(), m.a[1][1].real(), m.a[2][2].real()};
        std::sort(e.begin(), e.end());
        return e;
    }
    const double d0 = m.a[0][0].real() - q;
    const double d1 = m.a[1][1].real() - q;
    const double d2 = m.a[2][2].real() - q;
    const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Mat3 b;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            b.a[i][j] = (m.a[i][j] - (i == j ? cplx(q, 0) : cplx(0, 0))) / p;
    // det(B)/2, real for Hermitian B
    const cplx det = b.a[0][0] * (b.a[1][1] * b.a[2][2] - b.a[1][2] * b.a[2][1]) -
                     b.a[0][1] * (b.a[1][0] * b.a[2][2] - b.a[1][2] * b.a[2][0]) +
                     b.a[0][2] * (b.a[1][0] * b.a[2][1] - b.a[1][1] * b.a[2][0]);
    const double r = std::clamp(det.real() / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    std::array<double, 3> e;
    e[2] = q + 2.0 * p * std::cos(phi);
    e[0] = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    e[1] = 3.0 * q - e[0] - e[2];
    std::sort(e.begin(), e.end());
    return e;
}

Mat3 master_rhs(const Mat3& rho, const SGCParams& p)
{
    static const Mat3 a33 = Mat3::projector(2);
    static const Mat3 a11 = Mat3::projector(0);
    static const Mat3 a22 = Mat3::projector(1);
    static const Mat3 a12 = Mat3::transition(0, 1);
    static const Mat3 a21 = Mat3::transition(1, 0);

    const double root = std::sqrt(p.gamma1 * p.gamma2);

    Mat3 half = (a33.scaled(rho(0, 0)) - a11 * rho).scaled(p.gamma1) +
                (a33.scaled(rho(1, 1)) - a22 * rho).scaled(p.gamma2);
    // n = 1, m = 2 carries kappa1; n = 2, m = 1 carries kappa2
    half = half + (a21 * rho - a33.scaled(rho(0, 1))).scaled(root * p.kappa1);
    half = half + (a12 * rho - a33.scaled(rho(1, 0))).scaled(root * p.kappa2);
    return half + half.dagger();
}

Trajectory evolve(const Mat3& rho0, const SGCParams& p, double t_end, double dt,
                  const EvolveOptions& opt)
{
    if (!(dt > 0) || !(t_end > 0))
        throw std::invalid_argument("evolve: t_end and dt must be positive");
    const double scale = std::max({p.gamma1, p.gamma2, 1.0});
    if (dt > 0.01 / scale + 1e-15)
        throw std::invalid_argument("evolve: dt too large; require dt <= 0.01/max(Gamma_n, 1)");
    if (std::abs(p.kappa1) > 1.0 || std::abs(p.kappa2) > 1.0)
        throw std::invalid_argument("evolve: |kappa_n| must not exceed 1");
    if (std::abs(rho0.trace() - 1.0) > 1e-9 || rho0.hermiticity_defect() > 1e-12)
        throw std::invalid_argument("evolve: rho0 must be Hermitian with unit trace");

    const int stride = std::max(opt.sample_stride, 1);
    Trajectory traj;
    {
        Mat3 rho = rho0;
        const long steps = (long)std::llround(t_end / dt);
        traj.t.push_back(0.0);
        traj.rho.push_back(rho);
        traj.min_eigenvalue = hermitian_eigenvalues(rho)[0];
        for (long n = 1; n <= steps; ++n) {
            const Mat3 k1 = master_rhs(rho, p);
            const Mat3 k2 = master_rhs(rho + k1.scaled(0.5 * dt), p);
            const Mat3 k3 = master_rhs(rho + k2.scaled(0.5 * dt), p);
            const Mat3 k4 = master_rhs(rho + k3.scaled(dt), p);
            rho = rho + (k1 + (k2 + k3).scaled(2.0) + k4).scaled(dt / 6.0);
            // re-symmetrize; trace is only monitored
            rho = (rho + rho.dagger()).scaled(0.5);
            const double drift = std::abs(rho.trace().real() - 1.0) +
                                 std::abs(rho.trace().imag());
            traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
            if (drift > opt.trace_tol)
                throw std::runtime_error("evolve: trace drift " + std::to_string(drift) +
                                         " exceeded tolerance at t = " +
                                         std::to_string(n * dt));
            if (n % stride == 0 || n == steps) {
                traj.t.push_back(n * dt);
                traj.rho.push_back(rho);
                traj.min_eigenvalue =
                    std::min(traj.min_eigenvalue, hermitian_eigenvalues(rho)[0]);
            }
        }
    }

    if (opt.check_halving) {
        const double dt_half = dt / 2.0;
        Mat3 rho = rho0;
        const long steps = 2 * (long)std::llround(t_end / dt);
        for (long n = 1; n <= steps; ++n) {
            const Mat3 k1 = master_rhs(rho, p);
            const Mat3 k2 = master_rhs(rho + k1.scaled(0.5 * dt_half), p);
            const Mat3 k3 = master_rhs(rho + k2.scaled(0.5 * dt_half), p);
            const Mat3 k4 = master_rhs(rho + k3.scaled(dt_half), p);
            rho = rho + (k1 + (k2 + k3).scaled(2.0) + k4).scaled(dt_half / 6.0);
            rho = (rho + rho.dagger()).scaled(0.5);
        }
        const Mat3& last = traj.rho.back();
        double diff = 0;
        for (int i = 0; i < 3; ++i)
            diff = std::max(diff, std::abs(last(i, i).real() - rho(i, i).real()));
        traj.halving_diff = diff;
        traj.halving_converged = diff < opt.halving_tol;
    }
    return traj;
}

DarkStateResult dark_state(const SGCParams& p)
{
    if (!(p.gamma1 > 0) || !(p.gamma2 > 0))
        throw std::invalid_argument("dark_state: Gamma1, Gamma2 must be positive");
    const double kappa = 0.5 * (p.kappa1 + p.kappa2);
    const double off = -2.0 * std::sqrt(p.gamma1 * p.gamma2) * kappa;
    const double a = 2.0 * p.gamma1, c = 2.0 * p.gamma2;

    DarkStateResult out;
    const double tr = a + c;
    const double disc = std::sqrt((a - c) * (a - c) + 4.0 * off * off);
    out.eigenvalues = {0.5 * (tr - disc), 0.5 * (tr + disc)};
    for (int i = 0; i < 2; ++i) {
        const double lam = out.eigenvalues[i];
        double v0, v1;
        if (std::abs(off) > 1e-300) {
            v0 = off;
            v1 = lam - a;
        } else {
            v0 = (i == 0) == (a <= c) ? 1.0 : 0.0;
            v1 = 1.0 - v0;
        }
        const double n = std::hypot(v0, v1);
        out.states[i] = {v0 / n, v1 / n};
    }
    return out;
}

} // namespace nriwg

#pragma once

#include "nriwg/materials.hpp"

#include <array>
#include <vector>

namespace nriwg {

// Minimal dense complex 3x3 matrix for the atomic density operator over
// {|1>, |2>, |3>} (two excited levels, one ground).
struct Mat3 {
    std::array<std::array<cplx, 3>, 3> a{};

    static Mat3 zero() { return {}; }
    static Mat3 projector(int i)
    {
        Mat3 m;
        m.a[i][i] = 1.0;
        return m;
    }
    /// |i><j|
    static Mat3 transition(int i, int j)
    {
        Mat3 m;
        m.a[i][j] = 1.0;
        return m;
    }
    static Mat3 pure_state(const std::array<cplx, 3>& psi);

    cplx operator()(int i, int j) const { return a[i][j]; }
    cplx& operator()(int i, int j) { return a[i][j]; }

    Mat3 operator+(const Mat3& o) const;
    Mat3 operator-(const Mat3& o) const;
    Mat3 operator*(const Mat3& o) const;
    Mat3 scaled(cplx f) const;
    Mat3 dagger() const;
    cplx trace() const;
    double hermiticity_defect() const;
};

/// Eigenvalues of a Hermitian 3x3, ascending (closed-form trigonometric).
std::array<double, 3> hermitian_eigenvalues(const Mat3& m);

// Decay rates and interference parameters of the two SE channels, gamma0
// units. Populations decay at 2*Gamma_n under the master equation used here.
struct SGCParams {
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
};

/// Right-hand side of the master equation
///   drho/dt = sum_n Gamma_n (rho_nn A33 - A_nn rho)
///           + sqrt(Gamma1 Gamma2) sum_{n != m} kappa_n (A_mn rho - rho_nm A33)
///           + H.c.
/// Traceless and Hermiticity-preserving by construction.
Mat3 master_rhs(const Mat3& rho, const SGCParams& p);

struct EvolveOptions {
    bool check_halving = true;       // rerun at dt/2, compare populations
    double halving_tol = 1e-8;
    double trace_tol = 1e-6;         // abort threshold on |Tr rho - 1|
    int sample_stride = 1;           // store every Nth step
};

struct Trajectory {
    std::vector<double> t;
    std::vector<Mat3> rho;
    double max_trace_drift = 0;
    double min_eigenvalue = 0;
    bool halving_converged = true;
    double halving_diff = 0;
};

/// Classical fixed-step 4th-order integration. The state is re-symmetrized
/// each step; trace drift is monitored and aborts the run, never silently
/// renormalized. Requires dt <= 0.01 / max(Gamma1, Gamma2, 1).
Trajectory evolve(const Mat3& rho0, const SGCParams& p, double t_end, double dt,
                  const EvolveOptions& opt = {});

// Eigensystem of the excited-manifold decay matrix implied by the master
// equation in the degenerate convention kappa1 = kappa2 = kappa:
//   [[2 Gamma1, -2 sqrt(Gamma1 Gamma2) kappa],
//    [-2 sqrt(Gamma1 Gamma2) kappa, 2 Gamma2]].
// For |kappa| = 1, Gamma1 = Gamma2 one eigenvalue vanishes: the dark state.
struct DarkStateResult {
    std::array<double, 2> eigenvalues;          // ascending; population decay rates
    std::array<std::array<double, 2>, 2> states; // rows: amplitudes on {|1>, |2>}
};

DarkStateResult dark_state(const SGCParams& p);

} // namespace nriwg

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qauction/rng.hpp"
#include "qauction/tolerances.hpp"

namespace qa {

using cplx = std::complex<double>;

// Dense complex square matrix, row-major. Dimensions here are tiny (2..4096,
// powers of two), so everything is plain O(n^3) dense algebra.
struct CMat {
    int dim = 0;
    std::vector<cplx> a;

    CMat() = default;
    explicit CMat(int d) : dim(d), a(static_cast<size_t>(d) * d, cplx(0.0, 0.0)) {}

    cplx& at(int i, int j) { return a[static_cast<size_t>(i) * dim + j]; }
    const cplx& at(int i, int j) const { return a[static_cast<size_t>(i) * dim + j]; }

    static CMat zero(int d) { return CMat(d); }
    static CMat identity(int d);
    // row-major initializer, real entries
    static CMat from_real(int d, const std::vector<double>& entries);
};

CMat operator+(const CMat& x, const CMat& y);
CMat operator-(const CMat& x, const CMat& y);
CMat operator*(const CMat& x, const CMat& y);
CMat operator*(double s, const CMat& x);
CMat adjoint(const CMat& x);

cplx trace(const CMat& x);
// Tr(x * y) without forming the product
cplx trace_product(const CMat& x, const CMat& y);
double hermiticity_residual(const CMat& x);
bool is_power_of_two_dim(int d);

struct PureState {
    int dim = 0;
    std::vector<cplx> amp;

    double norm_residual() const;  // | <psi|psi> - 1 |
    CMat outer() const;            // |psi><psi|
};

PureState basis_state(int dim, int index);

struct DensityMatrix {
    CMat mat;
};

// Throws std::invalid_argument when Hermiticity, PSD, or unit-trace checks
// fail at the given tolerances.
DensityMatrix make_density(CMat m, const Tolerances& tol = Tolerances{});
DensityMatrix pure_density(const PureState& psi);

struct EigPair {
    double value = 0.0;
    PureState vector;
};

// Largest eigenvalue and a unit eigenvector. Rejects non-Hermitian input.
EigPair eig_max(const CMat& h, const Tolerances& tol = Tolerances{});
double min_eigenvalue(const CMat& h, const Tolerances& tol = Tolerances{});
std::vector<double> eigenvalues(const CMat& h, const Tolerances& tol = Tolerances{});

// Reduced state of the first qubit of a two-qubit system.
DensityMatrix partial_trace_second(const DensityMatrix& rho, const Tolerances& tol = Tolerances{});

// Nearest PSD matrix in Frobenius norm: eigenvalues clipped at zero.
CMat psd_projection(const CMat& h, const Tolerances& tol = Tolerances{});

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

struct Povm {
    std::vector<CMat> elements;
};

struct PovmReport {
    std::vector<double> psd_residuals;   // max(0, -lambda_min) per element
    double completeness_residual = 0.0;  // max entrywise |sum - I|
    bool valid(const Tolerances& tol = Tolerances{}) const;
};

PovmReport validate_povm(const Povm& p);

// Outcome probabilities Tr(F_l rho); renormalized when the sum is within
// tol.prob_sum of 1, rejected otherwise.
std::vector<double> outcome_probabilities(const DensityMatrix& rho, const Povm& p,
                                          const Tolerances& tol = Tolerances{});
int measure(const DensityMatrix& rho, const Povm& p, RngStream& rng,
            const Tolerances& tol = Tolerances{});

// Seeded random states for property tests and report sweeps.
PureState random_pure(RngStream& rng, int dim);
DensityMatrix random_density(RngStream& rng, int dim);

}  // namespace qa

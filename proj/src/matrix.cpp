#include "qauction/matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qa {

namespace {

using EigenCMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenCMat> map_of(const CMat& m) {
    return Eigen::Map<const EigenCMat>(m.a.data(), m.dim, m.dim);
}

void require_same_dim(const CMat& x, const CMat& y, const char* what) {
    if (x.dim != y.dim) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

void require_hermitian(const CMat& h, const Tolerances& tol, const char* what) {
    double res = hermiticity_residual(h);
    if (res > tol.hermiticity)
        throw std::invalid_argument(std::string(what) + ": not Hermitian (residual " +
                                    std::to_string(res) + ")");
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solve_hermitian(const CMat& h) {
    Eigen::MatrixXcd m = map_of(h);
    // symmetrize so the solver sees an exactly self-adjoint matrix
    m = 0.5 * (m + m.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigensolver failed to converge");
    return solver;
}

}  // namespace

CMat CMat::identity(int d) {
    CMat m(d);
    for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
    return m;
}

CMat CMat::from_real(int d, const std::vector<double>& entries) {
    if (entries.size() != static_cast<size_t>(d) * d)
        throw std::invalid_argument("from_real: wrong entry count");
    CMat m(d);
    for (size_t k = 0; k < entries.size(); ++k) m.a[k] = cplx(entries[k], 0.0);
    return m;
}

CMat operator+(const CMat& x, const CMat& y) {
    require_same_dim(x, y, "add");
    CMat r = x;
    for (size_t k = 0; k < r.a.size(); ++k) r.a[k] += y.a[k];
    return r;
}

CMat operator-(const CMat& x, const CMat& y) {
    require_same_dim(x, y, "sub");
    CMat r = x;
    for (size_t k = 0; k < r.a.size(); ++k) r.a[k] -= y.a[k];
    return r;
}

CMat operator*(const CMat& x, const CMat& y) {
    require_same_dim(x, y, "mul");
    CMat r(x.dim);
    for (int i = 0; i < x.dim; ++i)
        for (int k = 0; k < x.dim; ++k) {
            cplx xik = x.at(i, k);
            if (xik == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < x.dim; ++j) r.at(i, j) += xik * y.at(k, j);
        }
    return r;
}

CMat operator*(double s, const CMat& x) {
    CMat r = x;
    for (auto& v : r.a) v *= s;
    return r;
}

CMat adjoint(const CMat& x) {
    CMat r(x.dim);
    for (int i = 0; i < x.dim; ++i)
        for (int j = 0; j < x.dim; ++j) r.at(i, j) = std::conj(x.at(j, i));
    return r;
}

cplx trace(const CMat& x) {
    cplx t(0.0, 0.0);
    for (int i = 0; i < x.dim; ++i) t += x.at(i, i);
    return t;
}

cplx trace_product(const CMat& x, const CMat& y) {
    require_same_dim(x, y, "trace_product");
    cplx t(0.0, 0.0);
    for (int i = 0; i < x.dim; ++i)
        for (int k = 0; k < x.dim; ++k) t += x.at(i, k) * y.at(k, i);
    return t;
}

double hermiticity_residual(const CMat& x) {
    double res = 0.0;
    for (int i = 0; i < x.dim; ++i)
        for (int j = i; j < x.dim; ++j)
            res = std::max(res, std::abs(x.at(i, j) - std::conj(x.at(j, i))));
    return res;
}

bool is_power_of_two_dim(int d) { return d >= 2 && d <= 4096 && (d & (d - 1)) == 0; }

double PureState::norm_residual() const {
    double s = 0.0;
    for (const cplx& v : amp) s += std::norm(v);
    return std::abs(s - 1.0);
}

CMat PureState::outer() const {
    CMat m(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m.at(i, j) = amp[i] * std::conj(amp[j]);
    return m;
}

PureState basis_state(int dim, int index) {
    if (index < 0 || index >= dim) throw std::invalid_argument("basis_state: index out of range");
    PureState psi;
    psi.dim = dim;
    psi.amp.assign(dim, cplx(0.0, 0.0));
    psi.amp[index] = 1.0;
    return psi;
}

DensityMatrix make_density(CMat m, const Tolerances& tol) {
    require_hermitian(m, tol, "density");
    double lo = min_eigenvalue(m, tol);
    if (lo < -tol.psd)
        throw std::invalid_argument("density: not PSD (min eigenvalue " + std::to_string(lo) + ")");
    double tr = std::abs(trace(m) - cplx(1.0, 0.0));
    if (tr > tol.trace_one)
        throw std::invalid_argument("density: trace residual " + std::to_string(tr));
    return DensityMatrix{std::move(m)};
}

DensityMatrix pure_density(const PureState& psi) {
    if (psi.norm_residual() > 1e-12) throw std::invalid_argument("pure_density: not unit norm");
    return DensityMatrix{psi.outer()};
}

EigPair eig_max(const CMat& h, const Tolerances& tol) {
    require_hermitian(h, tol, "eig_max");
    auto solver = solve_hermitian(h);
    int top = h.dim - 1;  // ascending order
    EigPair out;
    out.value = solver.eigenvalues()(top);
    out.vector.dim = h.dim;
    out.vector.amp.resize(h.dim);
    for (int i = 0; i < h.dim; ++i) out.vector.amp[i] = solver.eigenvectors()(i, top);
    return out;
}

double min_eigenvalue(const CMat& h, const Tolerances& tol) {
    require_hermitian(h, tol, "min_eigenvalue");
    return solve_hermitian(h).eigenvalues()(0);
}

std::vector<double> eigenvalues(const CMat& h, const Tolerances& tol) {
    require_hermitian(h, tol, "eigenvalues");
    auto ev = solve_hermitian(h).eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + h.dim);
}

DensityMatrix partial_trace_second(const DensityMatrix& rho, const Tolerances& tol) {
    const CMat& m = rho.mat;
    if (m.dim != 4) throw std::invalid_argument("partial_trace_second: expected dim 4");
    CMat r(2);
    // (i,j) entry sums rho over the second-qubit index k: rho[2i+k][2j+k]
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.at(i, j) = m.at(2 * i, 2 * j) + m.at(2 * i + 1, 2 * j + 1);
    return make_density(std::move(r), tol);
}

CMat psd_projection(const CMat& h, const Tolerances& tol) {
    require_hermitian(h, tol, "psd_projection");
    auto solver = solve_hermitian(h);
    CMat out(h.dim);
    for (int k = 0; k < h.dim; ++k) {
        double lambda = solver.eigenvalues()(k);
        if (lambda <= 0.0) continue;
        for (int i = 0; i < h.dim; ++i)
            for (int j = 0; j < h.dim; ++j)
                out.at(i, j) += lambda * solver.eigenvectors()(i, k) *
                                std::conj(solver.eigenvectors()(j, k));
    }
    return out;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho.mat, sigma.mat, "trace_distance");
    CMat diff = rho.mat - sigma.mat;
    double sum = 0.0;
    for (double lambda : eigenvalues(diff)) sum += std::abs(lambda);
    return std::clamp(0.5 * sum, 0.0, 1.0);
}

bool PovmReport::valid(const Tolerances& tol) const {
    if (completeness_residual > tol.psd) return false;
    for (double r : psd_residuals)
        if (r > tol.psd) return false;
    return true;
}

PovmReport validate_povm(const Povm& p) {
    PovmReport report;
    if (p.elements.empty()) {
        report.completeness_residual = 1.0;
        return report;
    }
    int dim = p.elements.front().dim;
    CMat sum = CMat::zero(dim);
    for (const CMat& f : p.elements) {
        if (f.dim != dim) throw std::invalid_argument("validate_povm: mixed dimensions");
        double herm = hermiticity_residual(f);
        double lo = herm > 1e-9 ? -1.0 : min_eigenvalue(f);
        report.psd_residuals.push_back(std::max({0.0, -lo, herm}));
        sum = sum + f;
    }
    CMat delta = sum - CMat::identity(dim);
    double res = 0.0;
    for (const cplx& v : delta.a) res = std::max(res, std::abs(v));
    report.completeness_residual = res;
    return report;
}

std::vector<double> outcome_probabilities(const DensityMatrix& rho, const Povm& p,
                                          const Tolerances& tol) {
    if (p.elements.empty() || p.elements.front().dim != rho.mat.dim)
        throw std::invalid_argument("outcome_probabilities: dimension mismatch");
    std::vector<double> probs;
    probs.reserve(p.elements.size());
    double sum = 0.0;
    for (const CMat& f : p.elements) {
        double pr = trace_product(f, rho.mat).real();
        pr = std::max(pr, 0.0);
        probs.push_back(pr);
        sum += pr;
    }
    if (std::abs(sum - 1.0) > tol.prob_sum)
        throw std::invalid_argument("outcome_probabilities: sum deviates by " +
                                    std::to_string(std::abs(sum - 1.0)));
    for (double& pr : probs) pr /= sum;
    return probs;
}

int measure(const DensityMatrix& rho, const Povm& p, RngStream& rng, const Tolerances& tol) {
    std::vector<double> probs = outcome_probabilities(rho, p, tol);
    double u = rng.next_double();
    double acc = 0.0;
    for (size_t l = 0; l < probs.size(); ++l) {
        acc += probs[l];
        if (u < acc) return static_cast<int>(l);
    }
    return static_cast<int>(probs.size()) - 1;
}

PureState random_pure(RngStream& rng, int dim) {
    PureState psi;
    psi.dim = dim;
    psi.amp.resize(dim);
    double norm2 = 0.0;
    for (int i = 0; i < dim; ++i) {
        psi.amp[i] = cplx(rng.next_gaussian(), rng.next_gaussian());
        norm2 += std::norm(psi.amp[i]);
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : psi.amp) v *= inv;
    return psi;
}

DensityMatrix random_density(RngStream& rng, int dim) {
    // Gaussian A, then A A† / Tr keeps PSD and unit trace exactly up to
    // rounding, which sits comfortably inside the 1e-12 gates.
    CMat a(dim);
    for (auto& v : a.a) v = cplx(rng.next_gaussian(), rng.next_gaussian());
    CMat g = a * adjoint(a);
    double tr = trace(g).real();
    CMat m = (1.0 / tr) * g;
    // round tiny asymmetry away so make_density's Hermiticity gate is exact
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            cplx avg = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
            m.at(i, j) = avg;
            m.at(j, i) = std::conj(avg);
        }
    for (int i = 0; i < dim; ++i) m.at(i, i) = cplx(m.at(i, i).real(), 0.0);
    return make_density(std::move(m));
}

}  // namespace qa

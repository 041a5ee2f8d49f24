#pragma once

#include <string>
#include <vector>

#include "fha/space.hpp"
#include "fha/symbols.hpp"

namespace fha {

using Matrix = std::vector<std::vector<double>>;
using ComplexSignal = std::vector<Complex>;

/// Row-major flat n*n -> nested rows (the named Laplacian builders emit flat).
Matrix reshape_matrix(const std::vector<double>& flat, int n);

/// Kernel of an operator built by functional calculus. Operators act as
/// (Kf)(x) = sum_y K(x,y) f(y) mu(y).
struct KernelMatrix {
    std::vector<ComplexSignal> values; // values[x][y]
    std::string generator;

    int size() const { return static_cast<int>(values.size()); }
    const Complex& operator()(int x, int y) const { return values[x][y]; }
};

ComplexSignal apply_kernel(const KernelMatrix& k, const Space& s, const ComplexSignal& f);
Signal apply_kernel(const KernelMatrix& k, const Space& s, const Signal& f);
/// mu-weighted composition: kernel of the operator K1 after K2.
KernelMatrix compose_kernels(const KernelMatrix& k1, const KernelMatrix& k2, const Space& s);

/// Full eigendecomposition of a nonnegative operator, self-adjoint in the
/// mu-weighted inner product. Immutable once built.
class OperatorSpectrum {
public:
    OperatorSpectrum(const Space* space, Matrix L, std::vector<double> eigenvalues,
                     std::vector<Signal> eigenvectors)
        : space_(space), L_(std::move(L)), eigenvalues_(std::move(eigenvalues)),
          eigenvectors_(std::move(eigenvectors)) {}

    const Space& space() const { return *space_; }
    const Matrix& matrix() const { return L_; }
    int size() const { return static_cast<int>(eigenvalues_.size()); }
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    double eigenvalue(int i) const { return eigenvalues_[i]; }
    /// phi_i, mu-orthonormal, ascending eigenvalue order.
    const Signal& eigenvector(int i) const { return eigenvectors_[i]; }
    double lambda_max() const { return eigenvalues_.back(); }
    /// Smallest strictly positive eigenvalue (throws if the spectrum is {0}).
    double lambda_min_positive() const;

    /// <f, phi_i>_mu for all i.
    std::vector<Complex> coefficients(const ComplexSignal& f) const;
    std::vector<double> coefficients(const Signal& f) const;

private:
    const Space* space_;
    Matrix L_;
    std::vector<double> eigenvalues_;
    std::vector<Signal> eigenvectors_;
};

/// Cyclic Jacobi on D^{1/2} L D^{-1/2}, D = diag(mu). Rejects matrices whose
/// mu-weighted form is asymmetric beyond 1e-9 (error names the worst entry)
/// or with an eigenvalue below -1e-6; eigenvalues in [-1e-6, 0) clamp to 0.
OperatorSpectrum spectral_decompose(const Space& s, const Matrix& L);

/// p_t(x,y) = sum_i e^{-t lambda_i} phi_i(x) phi_i(y), t > 0.
KernelMatrix heat_kernel(const OperatorSpectrum& spec, double t);

/// K(x,y) = sum_i F(sqrt(lambda_i)) phi_i(x) phi_i(y). Rejects F that is
/// NaN/inf at any sqrt(lambda_i), naming the eigenvalue.
KernelMatrix apply_function(const OperatorSpectrum& spec, const SpectralFunction& f);

/// F(sqrt(L)) f without materializing the kernel.
ComplexSignal apply_function_to_signal(const OperatorSpectrum& spec, const SpectralFunction& f,
                                       const ComplexSignal& sig);
ComplexSignal apply_function_to_signal(const OperatorSpectrum& spec, const SpectralFunction& f,
                                       const Signal& sig);

/// Fit of |p_t(x,y)| <= C / V(x, sqrt(t)) * exp(-d(x,y)^2 / (c t)).
struct GaussianFit {
    double C = 0.0;
    double c = 0.0;
    int worst_x = 0, worst_y = 0;
    double worst_t = 0.0;
    std::vector<std::pair<double, double>> per_candidate; // (c, smallest C for that c)
};

/// Smallest C over candidate decay rates c in {1,2,4,8,16}, exhaustive over
/// all pairs and the given times. Always finite on a finite space; the size
/// of C is the diagnostic.
GaussianFit gaussian_diagnostic(const OperatorSpectrum& spec, const std::vector<double>& t_grid);

struct PropagationReport {
    double on_support_max = 0.0;  // max |K(x,y)| over d(x,y) <= t
    double off_support_max = 0.0; // max |K(x,y)| over d(x,y) > t
    double ratio = 0.0;           // off / on, 0 when the constraint is vacuous
    bool vacuous = false;         // no pair with d(x,y) > t
    double size_bound_C = 0.0;    // smallest C with |K(x,y)| <= C / V(x,t)
};

/// Support diagnostic for K_{(t^2 L)^k Phi(t sqrt(L))}; Phi must come from
/// finite_propagation_window().
PropagationReport finite_propagation_check(const OperatorSpectrum& spec,
                                           const SpectralFunction& phi, double t, int k = 0);

struct RestrictedBoundReport {
    double norm_q = 0.0;          // ||delta_R F||_{q~}
    double norm_sobolev = 0.0;    // ||delta_R F||_{W^{q~}_{s+eps}}
    double C_pointwise = 0.0;     // |K(x,y)| <= C ||delta_R F||_{q~} / sqrt(V(x,1/R)V(y,1/R))
    double C_column_l2 = 0.0;     // int |K(x,y)|^2 dmu(x) <= C ||delta_R F||_{q~}^2 / V(y,1/R)
    double C_weighted_l2 = 0.0;   // [int |K|^2 (1+Rd)^{2s} dmu(y)]^{1/2}
                                  //   <= C ||delta_R F||_{W^{q~}_{s+eps}} / V(x,1/R)^{1/2}
};

/// Fits the three restricted-support kernel constants for F with support in
/// [R/4, R] (verified on the eigenvalue grid; violation -> rejection).
/// eps defaults to 1/2 inside the Sobolev index s+eps.
RestrictedBoundReport restricted_kernel_bounds(const OperatorSpectrum& spec,
                                               const SpectralFunction& f, double R, double s,
                                               double q_tilde, double eps = 0.5);

/// ||K||_{L2(mu)->L2(mu)} by power iteration on K* K.
double operator_l2_norm(const KernelMatrix& k, const Space& s, int iters = 200,
                        unsigned seed = 1);

} // namespace fha

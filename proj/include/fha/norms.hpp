#pragma once

#include <utility>
#include <vector>

#include "fha/spectral.hpp"
#include "fha/symbols.hpp"

namespace fha {

enum class NormKind { besov, triebel_lizorkin };

/// Homogeneous smoothness-norm parameters. The scale window [j_min, j_max]
/// is exact: psi has support [1/2,2], so every piece outside it vanishes on
/// the positive spectrum.
struct NormSpec {
    double alpha = 0.0;
    double p = 2.0;
    double q = 2.0;
    NormKind kind = NormKind::besov;
};

struct NormResult {
    double value = 0.0;
    double kernel_mass_removed = 0.0; // L2(mu) mass of the lambda=0 component
};

/// Exact window of scales j with psi(2^{-j} sqrt(lambda_i)) possibly nonzero.
std::pair<int, int> default_j_range(const OperatorSpectrum& spec);

/// Removes the lambda=0 component (homogeneous-space convention); the removed
/// L2(mu) mass goes to *removed when given.
ComplexSignal project_out_kernel(const OperatorSpectrum& spec, const ComplexSignal& f,
                                 double* removed = nullptr);

double lp_norm(const Space& s, const ComplexSignal& f, double p);

NormResult besov_norm(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                      const ComplexSignal& f, const NormSpec& ns);
NormResult triebel_lizorkin_norm(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                                 const ComplexSignal& f, const NormSpec& ns);
/// Dispatch on ns.kind.
NormResult space_norm(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                      const ComplexSignal& f, const NormSpec& ns);
NormResult space_norm(const OperatorSpectrum& spec, const PartitionOfUnity& pou, const Signal& f,
                      const NormSpec& ns);

/// Same norms with an arbitrary window w in place of psi: pieces are
/// w(2^{-j} sqrt(L)) f. For non-compactly-supported windows the j window is
/// widened until the spectral weights drop below 1e-14.
NormResult window_norm(const OperatorSpectrum& spec, const SpectralFunction& w,
                       const ComplexSignal& f, const NormSpec& ns);

struct SquareFunctionSpec {
    double alpha = 0.0;
    double q = 2.0;
    double lambda_decay = 2.0; // off-diagonal weight exponent for the g-function
    double aperture = 1.0;     // cone width for the Lusin function
    std::vector<double> t_grid;
};

/// Log-uniform trapezoid grid covering every scale where psi(t sqrt(L)) is
/// nonzero on the positive spectrum; `points_per_scale` nodes per octave.
std::vector<double> default_t_quadrature(const OperatorSpectrum& spec, int points_per_scale = 17);

/// g-function: [ sum_t dlogt sum_y (t^{-alpha}|psi(t sqrt(L))f(y)|)^q
///               (1+d(x,y)/t)^{-lambda q} mu(y)/V(x,t) ]^{1/q}
Signal g_function(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                  const ComplexSignal& f, const SquareFunctionSpec& sq);

/// Lusin area function: same quadrature restricted to the cone d(x,y) < a t.
Signal lusin_function(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                      const ComplexSignal& f, const SquareFunctionSpec& sq);

struct AngleReport {
    double e_fitted = 0.0;                        // slope of log ratio vs log a
    double C_fitted = 1.0;                        // intercept
    std::vector<std::pair<double, double>> ratios; // (a, max batch ratio vs a=1)
};

/// Aperture-growth fit ||S_a||_p ~ C a^e over the batch.
AngleReport change_of_angle_report(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                                   const std::vector<ComplexSignal>& batch, double alpha, double p,
                                   double q, const std::vector<double>& a_list);

struct EquivalenceReport {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    int argmin = -1; // batch indices witnessing the band edges
    int argmax = -1;
};

/// Two-sided band of window_norm(w1)/window_norm(w2) over the batch.
EquivalenceReport equivalence_report(const OperatorSpectrum& spec, const SpectralFunction& w1,
                                     const SpectralFunction& w2,
                                     const std::vector<ComplexSignal>& batch, const NormSpec& ns);

} // namespace fha

#include "fha/interp.hpp"

#include <cmath>
#include <stdexcept>

namespace fha {

KFunctionalEstimate k_functional(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                                 const ComplexSignal& f, const NormSpec& a1, const NormSpec& a2,
                                 double t, SplitStrategy strategy) {
    if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
    KFunctionalEstimate est;
    est.t = t;
    est.strategy = strategy;

    const int n = spec.size();
    double n1_full = space_norm(spec, pou, f, a1).value;
    double n2_full = space_norm(spec, pou, f, a2).value;
    est.value = std::min(n1_full, t * n2_full);
    est.trivial_won = true;

    if (strategy == SplitStrategy::level_split && spec.lambda_max() > 0.0) {
        auto [j_min, j_max] = default_j_range(spec);
        std::vector<Complex> coeff = spec.coefficients(f);
        std::vector<double> sqlam(n);
        for (int i = 0; i < n; ++i) sqlam[i] = std::sqrt(spec.eigenvalue(i));
        for (int k = j_min; k <= j_max + 1; ++k) {
            // f1 = sum_{nu >= k} psi_nu(sqrt(L)) f, assembled spectrally
            ComplexSignal f1(n, 0.0);
            for (int i = 0; i < n; ++i) {
                if (spec.eigenvalue(i) <= 0.0) continue;
                double wsum = 0.0;
                for (int nu = k; nu <= j_max; ++nu) wsum += pou.at_scale(nu, sqlam[i]);
                if (wsum == 0.0) continue;
                Complex c = wsum * coeff[i];
                const Signal& phi = spec.eigenvector(i);
                for (int x = 0; x < n; ++x) f1[x] += c * phi[x];
            }
            ComplexSignal f2(n);
            for (int x = 0; x < n; ++x) f2[x] = f[x] - f1[x];
            double v = space_norm(spec, pou, f1, a1).value +
                       t * space_norm(spec, pou, f2, a2).value;
            if (v < est.value) {
                est.value = v;
                est.split_k = k;
                est.trivial_won = false;
            }
        }
    }
    return est;
}

double k_functional_lower(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                          const ComplexSignal& f, double p, double s1, int k) {
    const int n = spec.size();
    std::vector<Complex> coeff = spec.coefficients(f);
    ComplexSignal piece(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double wv = pou.at_scale(k, std::sqrt(spec.eigenvalue(i)));
        if (wv == 0.0) continue;
        Complex c = wv * coeff[i];
        const Signal& phi = spec.eigenvector(i);
        for (int x = 0; x < n; ++x) piece[x] += c * phi[x];
    }
    return std::exp2(k * s1) * lp_norm(spec.space(), piece, p);
}

double real_interp_norm(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                        const ComplexSignal& f, const NormSpec& a1, const NormSpec& a2,
                        double theta, double q, double h, int k_min, int k_max,
                        SplitStrategy strategy) {
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0,1)");
    if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
    if (h == 0.0) throw std::invalid_argument("dyadic step h must be nonzero");
    double acc = 0.0;
    for (int k = k_min; k <= k_max; ++k) {
        double t = std::exp2(k * h);
        double kv = k_functional(spec, pou, f, a1, a2, t, strategy).value;
        acc += std::pow(std::pow(t, -theta) * kv, q);
    }
    return std::pow(acc, 1.0 / q);
}

double equal_pair_constant(double theta, double q, double h, int k_min, int k_max) {
    double acc = 0.0;
    for (int k = k_min; k <= k_max; ++k) {
        double t = std::exp2(k * h);
        acc += std::pow(std::pow(t, -theta) * std::min(1.0, t), q);
    }
    return std::pow(acc, 1.0 / q);
}

} // namespace fha

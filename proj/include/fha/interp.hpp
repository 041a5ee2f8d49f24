#pragma once

#include <vector>

#include "fha/norms.hpp"

namespace fha {

enum class SplitStrategy { trivial_only, level_split };

struct KFunctionalEstimate {
    double t = 0.0;
    double value = 0.0; // upper estimate: min over the decomposition family
    SplitStrategy strategy = SplitStrategy::trivial_only;
    int split_k = 0;       // level attaining the minimum; meaningful for level_split
    bool trivial_won = true;
};

/// Upper estimate of K(t, f; A1, A2) = inf over f = f1 + f2 of
/// ||f1||_1 + t ||f2||_2. The level_split family takes f1 = sum_{nu >= k}
/// psi_nu(sqrt(L)) f over every cut level k, plus the two trivial splits.
KFunctionalEstimate k_functional(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                                 const ComplexSignal& f, const NormSpec& a1, const NormSpec& a2,
                                 double t, SplitStrategy strategy = SplitStrategy::level_split);

/// Certified companion lower bound 2^{k s1} ||psi_k(sqrt(L)) f||_p at
/// t = 2^{k(s1-s2)} (valid up to the equivalence constant of the pair).
double k_functional_lower(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                          const ComplexSignal& f, double p, double s1, int k);

/// Dyadic real-interpolation norm ( sum_k [t_k^{-theta} K(t_k, f)]^q )^{1/q}
/// with t_k = 2^{k h}; K replaced by the upper estimates above.
double real_interp_norm(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                        const ComplexSignal& f, const NormSpec& a1, const NormSpec& a2,
                        double theta, double q, double h, int k_min, int k_max,
                        SplitStrategy strategy = SplitStrategy::level_split);

/// Closed form of the dyadic sum for A1 = A2 (K = min(1, t) ||f||):
/// sum_k 2^{-theta q k h} min(1, 2^{k h})^q, truncated to [k_min, k_max].
double equal_pair_constant(double theta, double q, double h, int k_min, int k_max);

} // namespace fha

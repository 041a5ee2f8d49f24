#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fha/dyadic.hpp"
#include "fha/norms.hpp"

namespace fha {

/// (L, M, p) atom: a = L^M b with b supported in 3B_Q and pointwise size
/// bounds on every L^k b up to order 2M.
struct ClassicAtom {
    int cube_level = 0;
    int cube_id = 0;
    int M = 1;
    double p = 2.0;
    ComplexSignal b;
    ComplexSignal a;
};

/// New (L, M, alpha, p, q) atom: support in a ball, size clauses in the
/// F^{alpha}_{q,q} norm.
struct NewAtom {
    int center = 0;
    double radius = 0.0;
    int cube_level = 0; // maximal stopping cube, for audit
    int cube_id = 0;
    int M = 1;
    double alpha = 0.0;
    double p = 1.0;
    double q = 2.0;
    ComplexSignal b;
    ComplexSignal a;
};

struct AtomReport {
    bool ok = true;
    double worst_violation = 0.0; // largest LHS/RHS over all clauses, 0 for zero atoms
    std::string worst_clause;
    int witness_point = -1;
    /// smallest uniform factor that would make every clause hold
    double normalization = 1.0;
};

/// Checks every clause of the classic-atom definition; reports, never throws.
/// support_tol is the relative magnitude treated as exact zero.
AtomReport validate_atom(const OperatorSpectrum& spec, const DyadicTree& tree,
                         const ClassicAtom& atom, double support_tol = 1e-12);
AtomReport validate_atom(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                         const NewAtom& atom, double support_tol = 1e-12);

struct Decomposition {
    std::vector<NewAtom> atoms;
    std::vector<double> coefficients; // lambda_{k,l}, one per atom
    std::vector<int> atom_k;          // stopping level of each atom
    double residual = 0.0;            // ||f - sum lambda a||_2 / ||f||_2
    double c0 = 0.0;                  // cone aperture from the tree geometry
    double c_norm = 0.0;              // reproducing-formula constant c_{Psi,psi}
    int m = 0;                        // power in Psi(t) = t^{2m} Phi(t)
    ComplexSignal source;             // the decomposed signal
    ComplexSignal reconstruction;
    std::vector<std::pair<int, double>> stopping_sizes; // (k, mu(O_k)) audit

    nlohmann::json to_json() const;
};

struct DecomposeOptions {
    int points_per_octave = 128; // midpoint log-t quadrature density
    bool warn_small_M = true;
};

/// Stopping-time construction: Lusin area function -> level sets O_k ->
/// cube families A_k -> maximal cubes -> Carleson-box assembly via the
/// reproducing formula with Psi(t) = t^{2m} Phi(t). Requires 0 < p <= 1 < q.
/// The tree must span cube levels matching every octave of the scale band.
Decomposition atomic_decompose(const OperatorSpectrum& spec, const DyadicTree& tree,
                               const PartitionOfUnity& pou, const ComplexSignal& f, double alpha,
                               double p, double q, int M, DecomposeOptions opts = {});

/// (sum_j |lambda_j|^p)^{1/p}
double coefficient_norm(const Decomposition& dec, double p);

/// sum_j lambda_j a_j and its relative L2 distance to the source.
std::pair<ComplexSignal, double> reconstruct(const OperatorSpectrum& spec,
                                             const Decomposition& dec);

/// Cube levels the tree must cover for the band of this operator at the
/// given quadrature density (helper for callers building trees).
std::pair<int, int> required_tree_levels(const OperatorSpectrum& spec);

struct SynthesisReport {
    double lhs = 0.0;   // ||sum s_Q a_Q|| in the requested norm
    double rhs = 0.0;   // sequence-space norm of the coefficients
    double ratio = 0.0; // lhs/rhs, 0 when both vanish
};

/// Synthesis-direction check: classic atoms with coefficients against the
/// sequence norm || [ sum_nu 2^{nu alpha q} ( sum_Q V(Q)^{-1/p} |s_Q| chi_Q )^q ]^{1/q} ||_p.
SynthesisReport synthesis_bound_check(const OperatorSpectrum& spec, const DyadicTree& tree,
                                      const PartitionOfUnity& pou,
                                      const std::vector<ClassicAtom>& atoms,
                                      const std::vector<double>& s_coeff, const NormSpec& ns);

} // namespace fha

#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fha {

using Complex = std::complex<double>;

/// A bounded Borel function on [0, inf), evaluated pointwise. Closed-form
/// rules wrap a lambda; sampled tables wrap a linear interpolant.
struct SpectralFunction {
    std::function<Complex(double)> eval;
    std::optional<std::pair<double, double>> support; // hint, exact when set by builders
    std::string name;

    Complex operator()(double lambda) const { return eval(lambda); }
    bool supported_at(double lambda) const {
        return !support || (lambda >= support->first && lambda <= support->second);
    }
};

SpectralFunction from_samples(std::vector<double> grid, std::vector<Complex> values,
                              std::string name);

/// delta_t F = F(t .)
SpectralFunction dilate(const SpectralFunction& f, double t);

SpectralFunction product(const SpectralFunction& f, const SpectralFunction& g);

// --- named symbol families ---
SpectralFunction constant_symbol(Complex c = 1.0);
SpectralFunction power_imag(double beta);            // lambda^{i beta}, value 1 at 0
SpectralFunction mikhlin_bump();                     // smooth bump on [1/2,2]
SpectralFunction rough_indicator(double a, double b, double mollify_width = 0.0);
SpectralFunction wave_symbol(double gamma);          // e^{i lambda}(1+lambda)^{-gamma}
SpectralFunction gaussian_heat_symbol(double t);     // e^{-t lambda^2}

/// C^inf bump supported exactly on [1/2,2] (log-scale transplant of
/// exp(-1/(1-u^2))); shared shape for psi numerator and the default eta.
double log_bump(double lambda);

/// Dyadic partition of unity: psi supported exactly in [1/2,2] with
/// sum_j psi(2^{-j} lambda) = 1 for all lambda > 0.
struct PartitionOfUnity {
    SpectralFunction psi;

    double operator()(double lambda) const { return psi(lambda).real(); }
    double at_scale(int j, double lambda) const { return (*this)(std::exp2(-j) * lambda); }
};

PartitionOfUnity build_partition_of_unity();

/// Fourier transform of the even bump on (-1,1) normalized to integral 2pi;
/// entire, real, Phi(0) = 2pi. Evaluated by fixed high-order quadrature.
SpectralFunction finite_propagation_window();

struct SobolevOptions {
    int initial_points = 1 << 14;
    int max_points = 1 << 18;
    double stability_rel = 0.01; // refinement acceptance threshold
};

struct SobolevResult {
    double value = 0.0;
    bool converged = true; // false when 2x refinement still moves the value
    int points_used = 0;
};

/// Bessel-potential Sobolev norm ||F^{-1}[(1+|xi|^2)^{s/2} g^]||_{L^q(R)} of
/// the even extension of g, which must be compactly supported. q may be inf.
SobolevResult sobolev_norm(const SpectralFunction& g, double s, double q,
                           SobolevOptions opts = {});

/// Default Hoermander cutoff: the [1/2,2] bump.
SpectralFunction default_eta();

struct HormanderResult {
    double value = 0.0;
    bool warning = false; // grid refinement moved the sup by more than 2%
    double worst_t = 0.0;
};

/// sup over t_grid of ||eta . delta_t F||_{W^q_s}.
HormanderResult hormander_functional(const SpectralFunction& f, const SpectralFunction& eta,
                                     double s, double q, const std::vector<double>& t_grid);

/// 33 log-uniform points per decade across [lo, hi].
std::vector<double> default_t_grid(double lo, double hi);

} // namespace fha

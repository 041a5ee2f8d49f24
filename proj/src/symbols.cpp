#include "fha/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace fha {

namespace {

constexpr double kPi = std::numbers::pi;

// In-place iterative radix-2 FFT; sign=-1 forward, +1 inverse (unscaled).
void fft(std::vector<Complex>& a, int sign) {
    const size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft size must be a power of two");
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = sign * 2.0 * kPi / static_cast<double>(len);
        Complex wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                Complex u = a[i + k];
                Complex v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// Bessel-potential multiplier applied on the periodized grid; equivalent to
// the trapezoid quadrature of the Fourier integrals on the same grid.
double bessel_norm_on_grid(const SpectralFunction& g, double X, int npts, double s, double q) {
    std::vector<Complex> a(npts);
    const double dx = 2.0 * X / npts;
    for (int j = 0; j < npts; ++j) {
        double x = -X + j * dx;
        a[j] = g(std::abs(x)); // even extension
    }
    fft(a, -1);
    for (int k = 0; k < npts; ++k) {
        int kk = k <= npts / 2 ? k : k - npts;
        double xi = 2.0 * kPi * kk / (npts * dx);
        a[k] *= std::pow(1.0 + xi * xi, s / 2.0);
    }
    fft(a, +1);
    const double inv = 1.0 / npts;
    if (std::isinf(q)) {
        double m = 0.0;
        for (const Complex& v : a) m = std::max(m, std::abs(v) * inv);
        return m;
    }
    double acc = 0.0;
    for (const Complex& v : a) acc += std::pow(std::abs(v) * inv, q);
    return std::pow(acc * dx, 1.0 / q);
}

} // namespace

SpectralFunction from_samples(std::vector<double> grid, std::vector<Complex> values,
                              std::string name) {
    if (grid.size() != values.size() || grid.size() < 2)
        throw std::invalid_argument("sample table needs matching grids with >= 2 nodes");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw std::invalid_argument("sample grid must be sorted");
    auto g = std::make_shared<std::vector<double>>(std::move(grid));
    auto v = std::make_shared<std::vector<Complex>>(std::move(values));
    SpectralFunction f;
    f.name = std::move(name);
    f.support = {g->front(), g->back()};
    f.eval = [g, v](double lambda) -> Complex {
        if (lambda <= g->front()) return lambda == g->front() ? v->front() : Complex(0.0);
        if (lambda >= g->back()) return lambda == g->back() ? v->back() : Complex(0.0);
        auto it = std::upper_bound(g->begin(), g->end(), lambda);
        size_t i = static_cast<size_t>(it - g->begin());
        double w = (lambda - (*g)[i - 1]) / ((*g)[i] - (*g)[i - 1]);
        return (*v)[i - 1] * (1.0 - w) + (*v)[i] * w;
    };
    return f;
}

SpectralFunction dilate(const SpectralFunction& f, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("dilation scale must be positive");
    SpectralFunction g;
    g.name = f.name + "@" + std::to_string(t);
    if (f.support) g.support = {f.support->first / t, f.support->second / t};
    auto inner = f.eval;
    g.eval = [inner, t](double lambda) { return inner(t * lambda); };
    return g;
}

SpectralFunction product(const SpectralFunction& f, const SpectralFunction& g) {
    SpectralFunction p;
    p.name = f.name + "*" + g.name;
    if (f.support && g.support)
        p.support = {std::max(f.support->first, g.support->first),
                     std::min(f.support->second, g.support->second)};
    else if (f.support)
        p.support = f.support;
    else if (g.support)
        p.support = g.support;
    auto fe = f.eval, ge = g.eval;
    p.eval = [fe, ge](double lambda) { return fe(lambda) * ge(lambda); };
    return p;
}

SpectralFunction constant_symbol(Complex c) {
    SpectralFunction f;
    f.name = "const";
    f.eval = [c](double) { return c; };
    return f;
}

SpectralFunction power_imag(double beta) {
    SpectralFunction f;
    f.name = "power_imag(" + std::to_string(beta) + ")";
    f.eval = [beta](double lambda) -> Complex {
        if (lambda <= 0.0) return 1.0; // modulus limit at the origin
        return std::exp(Complex(0.0, beta * std::log(lambda)));
    };
    return f;
}

double log_bump(double lambda) {
    if (!(lambda > 0.0)) return 0.0;
    double u = std::log2(lambda);
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

SpectralFunction mikhlin_bump() {
    SpectralFunction f;
    f.name = "mikhlin_bump";
    f.support = {0.5, 2.0};
    f.eval = [](double lambda) -> Complex { return log_bump(lambda); };
    return f;
}

SpectralFunction rough_indicator(double a, double b, double mollify_width) {
    if (!(a < b)) throw std::invalid_argument("indicator needs a < b");
    SpectralFunction f;
    f.name = "rough_indicator(" + std::to_string(a) + "," + std::to_string(b) + ")";
    f.support = {a, b};
    if (mollify_width <= 0.0) {
        f.eval = [a, b](double lambda) -> Complex { return (lambda >= a && lambda <= b) ? 1.0 : 0.0; };
        return f;
    }
    double w = std::min(mollify_width, (b - a) / 2.0);
    // C^inf ramp 0 -> 1 over [0,1]
    auto ramp = [](double x) {
        auto e = [](double y) { return y > 0.0 ? std::exp(-1.0 / y) : 0.0; };
        double num = e(x);
        return num / (num + e(1.0 - x));
    };
    f.eval = [a, b, w, ramp](double lambda) -> Complex {
        if (lambda <= a || lambda >= b) return 0.0;
        return ramp((lambda - a) / w) * ramp((b - lambda) / w);
    };
    return f;
}

SpectralFunction wave_symbol(double gamma) {
    SpectralFunction f;
    f.name = "wave(" + std::to_string(gamma) + ")";
    f.eval = [gamma](double lambda) {
        return std::exp(Complex(0.0, lambda)) * std::pow(1.0 + lambda, -gamma);
    };
    return f;
}

SpectralFunction gaussian_heat_symbol(double t) {
    SpectralFunction f;
    f.name = "heat(" + std::to_string(t) + ")";
    f.eval = [t](double lambda) -> Complex { return std::exp(-t * lambda * lambda); };
    return f;
}

PartitionOfUnity build_partition_of_unity() {
    SpectralFunction psi;
    psi.name = "psi";
    psi.support = {0.5, 2.0};
    psi.eval = [](double lambda) -> Complex {
        double num = log_bump(lambda);
        if (num == 0.0) return 0.0;
        // only the neighbouring dyadic shifts overlap [1/2,2]
        double den = num + log_bump(lambda * 0.5) + log_bump(lambda * 2.0);
        return num / den;
    };
    return PartitionOfUnity{psi};
}

SpectralFunction finite_propagation_window() {
    // phi(x) = (2pi / I0) exp(-1/(1-x^2)) on (-1,1); Phi = its Fourier transform.
    constexpr int kNodes = 2048;
    auto xs = std::make_shared<std::vector<double>>();
    auto ws = std::make_shared<std::vector<double>>();
    double i0 = 0.0;
    const double h = 2.0 / (kNodes + 1);
    for (int j = 1; j <= kNodes; ++j) {
        double x = -1.0 + j * h;
        double v = std::exp(-1.0 / (1.0 - x * x));
        xs->push_back(x);
        ws->push_back(v * h);
        i0 += v * h;
    }
    const double scale = 2.0 * kPi / i0;
    SpectralFunction f;
    f.name = "Phi";
    f.eval = [xs, ws, scale](double xi) -> Complex {
        double acc = 0.0;
        for (size_t j = 0; j < xs->size(); ++j) acc += (*ws)[j] * std::cos(xi * (*xs)[j]);
        return acc * scale;
    };
    return f;
}

SobolevResult sobolev_norm(const SpectralFunction& g, double s, double q, SobolevOptions opts) {
    if (s < 0.0) throw std::invalid_argument("smoothness s must be >= 0");
    if (!(q >= 1.0)) throw std::invalid_argument("integrability q must be >= 1");
    if (!g.support)
        throw std::invalid_argument("sobolev_norm requires a compactly supported function");
    double radius = std::max(std::abs(g.support->first), std::abs(g.support->second));
    if (radius <= 0.0) return {0.0, true, 0};
    const double X = 8.0 * radius;

    SobolevResult res;
    double prev = bessel_norm_on_grid(g, X, opts.initial_points, s, q);
    int npts = opts.initial_points;
    res.value = prev;
    res.points_used = npts;
    res.converged = false;
    while (npts < opts.max_points) {
        npts *= 2;
        double cur = bessel_norm_on_grid(g, X, npts, s, q);
        res.value = cur;
        res.points_used = npts;
        if (std::abs(cur - prev) <= opts.stability_rel * std::max(std::abs(cur), 1e-300)) {
            res.converged = true;
            break;
        }
        prev = cur;
    }
    return res;
}

SpectralFunction default_eta() {
    SpectralFunction eta = mikhlin_bump();
    eta.name = "eta";
    return eta;
}

HormanderResult hormander_functional(const SpectralFunction& f, const SpectralFunction& eta,
                                     double s, double q, const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("t grid must be nonempty");
    if (!eta.support) throw std::invalid_argument("eta must be compactly supported");
    HormanderResult out;
    for (double t : t_grid) {
        SpectralFunction g = product(eta, dilate(f, t));
        g.support = eta.support; // the cutoff pins the support
        SobolevResult r = sobolev_norm(g, s, q);
        if (!r.converged) out.warning = true;
        if (r.value > out.value) {
            out.value = r.value;
            out.worst_t = t;
        }
    }
    // refinement check at the attained t
    {
        SpectralFunction g = product(eta, dilate(f, out.worst_t));
        g.support = eta.support;
        SobolevOptions fine;
        fine.initial_points = 1 << 16;
        fine.max_points = 1 << 18;
        SobolevResult r = sobolev_norm(g, s, q, fine);
        if (std::abs(r.value - out.value) > 0.02 * std::max(out.value, 1e-300)) out.warning = true;
    }
    return out;
}

std::vector<double> default_t_grid(double lo, double hi) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("bad t grid bounds");
    std::vector<double> t;
    const double per_decade = 33.0;
    double decades = std::log10(hi / lo);
    int npts = std::max(2, static_cast<int>(std::ceil(per_decade * decades)) + 1);
    for (int i = 0; i < npts; ++i)
        t.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (npts - 1)));
    return t;
}

} // namespace fha

#include "fha/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fha {

namespace {

// piece w(2^{-j} sqrt(L)) f via the spectral coefficients
ComplexSignal scale_piece(const OperatorSpectrum& spec, const std::vector<Complex>& coeff,
                          const std::function<Complex(double)>& w, int j) {
    const int n = spec.size();
    ComplexSignal out(n, 0.0);
    const double scale = std::exp2(-j);
    for (int i = 0; i < n; ++i) {
        Complex wv = w(scale * std::sqrt(spec.eigenvalue(i)));
        if (wv == Complex(0.0)) continue;
        Complex c = wv * coeff[i];
        const Signal& phi = spec.eigenvector(i);
        for (int x = 0; x < n; ++x) out[x] += c * phi[x];
    }
    return out;
}

double ellq(const std::vector<double>& v, double q) {
    if (std::isinf(q)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, x);
        return m;
    }
    double acc = 0.0;
    for (double x : v) acc += std::pow(x, q);
    return std::pow(acc, 1.0 / q);
}

} // namespace

std::pair<int, int> default_j_range(const OperatorSpectrum& spec) {
    double hi = std::sqrt(spec.lambda_max());
    if (hi <= 0.0) return {0, 0};
    double lo = std::sqrt(spec.lambda_min_positive());
    int j_min = static_cast<int>(std::floor(std::log2(lo))) - 1;
    int j_max = static_cast<int>(std::ceil(std::log2(hi))) + 1;
    return {j_min, j_max};
}

ComplexSignal project_out_kernel(const OperatorSpectrum& spec, const ComplexSignal& f,
                                 double* removed) {
    const int n = spec.size();
    ComplexSignal out = f;
    double mass = 0.0;
    std::vector<Complex> coeff = spec.coefficients(f);
    for (int i = 0; i < n; ++i) {
        if (spec.eigenvalue(i) > 0.0) continue;
        mass += std::norm(coeff[i]);
        const Signal& phi = spec.eigenvector(i);
        for (int x = 0; x < n; ++x) out[x] -= coeff[i] * phi[x];
    }
    if (removed) *removed = std::sqrt(mass);
    return out;
}

double lp_norm(const Space& s, const ComplexSignal& f, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
    if (std::isinf(p)) {
        double m = 0.0;
        for (const Complex& v : f) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (int x = 0; x < s.size(); ++x) acc += std::pow(std::abs(f[x]), p) * s.mu(x);
    return std::pow(acc, 1.0 / p);
}

NormResult besov_norm(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                      const ComplexSignal& f, const NormSpec& ns) {
    NormResult res;
    ComplexSignal g = project_out_kernel(spec, f, &res.kernel_mass_removed);
    if (spec.lambda_max() <= 0.0) return res;
    auto [j_min, j_max] = default_j_range(spec);
    std::vector<Complex> coeff = spec.coefficients(g);
    std::vector<double> terms;
    for (int j = j_min; j <= j_max; ++j) {
        ComplexSignal piece = scale_piece(spec, coeff, pou.psi.eval, j);
        terms.push_back(std::exp2(j * ns.alpha) * lp_norm(spec.space(), piece, ns.p));
    }
    res.value = ellq(terms, ns.q);
    return res;
}

NormResult triebel_lizorkin_norm(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                                 const ComplexSignal& f, const NormSpec& ns) {
    NormResult res;
    ComplexSignal g = project_out_kernel(spec, f, &res.kernel_mass_removed);
    if (spec.lambda_max() <= 0.0) return res;
    auto [j_min, j_max] = default_j_range(spec);
    std::vector<Complex> coeff = spec.coefficients(g);
    const int n = spec.size();
    std::vector<std::vector<double>> per_point(n);
    for (int j = j_min; j <= j_max; ++j) {
        ComplexSignal piece = scale_piece(spec, coeff, pou.psi.eval, j);
        double w = std::exp2(j * ns.alpha);
        for (int x = 0; x < n; ++x) per_point[x].push_back(w * std::abs(piece[x]));
    }
    ComplexSignal pointwise(n);
    for (int x = 0; x < n; ++x) pointwise[x] = ellq(per_point[x], ns.q);
    res.value = lp_norm(spec.space(), pointwise, ns.p);
    return res;
}

NormResult space_norm(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                      const ComplexSignal& f, const NormSpec& ns) {
    return ns.kind == NormKind::besov ? besov_norm(spec, pou, f, ns)
                                      : triebel_lizorkin_norm(spec, pou, f, ns);
}

NormResult space_norm(const OperatorSpectrum& spec, const PartitionOfUnity& pou, const Signal& f,
                      const NormSpec& ns) {
    return space_norm(spec, pou, ComplexSignal(f.begin(), f.end()), ns);
}

NormResult window_norm(const OperatorSpectrum& spec, const SpectralFunction& w,
                       const ComplexSignal& f, const NormSpec& ns) {
    NormResult res;
    ComplexSignal g = project_out_kernel(spec, f, &res.kernel_mass_removed);
    if (spec.lambda_max() <= 0.0) return res;
    auto [j_min, j_max] = default_j_range(spec);
    // widen until the window weights vanish on the whole positive spectrum
    auto weightless = [&](int j) {
        double scale = std::exp2(-j);
        for (int i = 0; i < spec.size(); ++i) {
            if (spec.eigenvalue(i) <= 0.0) continue;
            if (std::abs(w(scale * std::sqrt(spec.eigenvalue(i)))) > 1e-14) return false;
        }
        return true;
    };
    const int cap = 60;
    while (j_min > -cap && !weightless(j_min - 1)) --j_min;
    while (j_max < cap && !weightless(j_max + 1)) ++j_max;

    std::vector<Complex> coeff = spec.coefficients(g);
    const int n = spec.size();
    if (ns.kind == NormKind::besov) {
        std::vector<double> terms;
        for (int j = j_min; j <= j_max; ++j) {
            ComplexSignal piece = scale_piece(spec, coeff, w.eval, j);
            terms.push_back(std::exp2(j * ns.alpha) * lp_norm(spec.space(), piece, ns.p));
        }
        res.value = ellq(terms, ns.q);
    } else {
        std::vector<std::vector<double>> per_point(n);
        for (int j = j_min; j <= j_max; ++j) {
            ComplexSignal piece = scale_piece(spec, coeff, w.eval, j);
            double wj = std::exp2(j * ns.alpha);
            for (int x = 0; x < n; ++x) per_point[x].push_back(wj * std::abs(piece[x]));
        }
        ComplexSignal pointwise(n);
        for (int x = 0; x < n; ++x) pointwise[x] = ellq(per_point[x], ns.q);
        res.value = lp_norm(spec.space(), pointwise, ns.p);
    }
    return res;
}

std::vector<double> default_t_quadrature(const OperatorSpectrum& spec, int points_per_scale) {
    if (points_per_scale < 2) throw std::invalid_argument("need >= 2 points per scale");
    double hi_l = std::sqrt(spec.lambda_max());
    if (hi_l <= 0.0) throw std::domain_error("zero operator has no scale band");
    double lo_l = std::sqrt(spec.lambda_min_positive());
    double t_lo = 0.5 / hi_l, t_hi = 2.0 / lo_l;
    double octaves = std::log2(t_hi / t_lo);
    int npts = static_cast<int>(std::ceil(points_per_scale * octaves)) + 1;
    std::vector<double> t(npts);
    for (int i = 0; i < npts; ++i)
        t[i] = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (npts - 1));
    return t;
}

namespace {

Signal square_function(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                       const ComplexSignal& f, const SquareFunctionSpec& sq, bool cone) {
    if (sq.t_grid.size() < 2) throw std::invalid_argument("t quadrature needs >= 2 nodes");
    if (cone && sq.aperture < 1.0) throw std::invalid_argument("aperture must be >= 1");
    const Space& s = spec.space();
    const int n = spec.size();
    std::vector<Complex> coeff = spec.coefficients(f);

    Signal acc(n, 0.0);
    for (size_t it = 0; it < sq.t_grid.size(); ++it) {
        double t = sq.t_grid[it];
        // trapezoid weight in log t
        double w;
        if (it == 0)
            w = 0.5 * std::log(sq.t_grid[1] / sq.t_grid[0]);
        else if (it + 1 == sq.t_grid.size())
            w = 0.5 * std::log(sq.t_grid[it] / sq.t_grid[it - 1]);
        else
            w = 0.5 * std::log(sq.t_grid[it + 1] / sq.t_grid[it - 1]);

        // field psi(t sqrt(L)) f
        ComplexSignal u(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double wv = pou(t * std::sqrt(spec.eigenvalue(i)));
            if (wv == 0.0) continue;
            Complex c = wv * coeff[i];
            const Signal& phi = spec.eigenvector(i);
            for (int x = 0; x < n; ++x) u[x] += c * phi[x];
        }
        std::vector<double> amp(n);
        for (int y = 0; y < n; ++y)
            amp[y] = std::pow(std::pow(t, -sq.alpha) * std::abs(u[y]), sq.q) * s.mu(y);
        for (int x = 0; x < n; ++x) {
            double vxt = s.ball_volume(x, t);
            double sum = 0.0;
            for (int y = 0; y < n; ++y) {
                if (amp[y] == 0.0) continue;
                if (cone) {
                    if (s.d(x, y) < sq.aperture * t) sum += amp[y];
                } else {
                    sum += amp[y] *
                           std::pow(1.0 + s.d(x, y) / t, -sq.lambda_decay * sq.q);
                }
            }
            acc[x] += w * sum / vxt;
        }
    }
    for (double& v : acc) v = std::pow(v, 1.0 / sq.q);
    return acc;
}

} // namespace

Signal g_function(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                  const ComplexSignal& f, const SquareFunctionSpec& sq) {
    return square_function(spec, pou, f, sq, false);
}

Signal lusin_function(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                      const ComplexSignal& f, const SquareFunctionSpec& sq) {
    return square_function(spec, pou, f, sq, true);
}

AngleReport change_of_angle_report(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                                   const std::vector<ComplexSignal>& batch, double alpha, double p,
                                   double q, const std::vector<double>& a_list) {
    if (batch.empty()) throw std::invalid_argument("batch must be nonempty");
    SquareFunctionSpec sq;
    sq.alpha = alpha;
    sq.q = q;
    sq.t_grid = default_t_quadrature(spec);

    std::vector<double> base;
    bool any = false;
    sq.aperture = 1.0;
    for (const ComplexSignal& f : batch) {
        Signal sig = lusin_function(spec, pou, f, sq);
        double v = lp_norm(spec.space(), ComplexSignal(sig.begin(), sig.end()), p);
        base.push_back(v);
        if (v > 0.0) any = true;
    }
    if (!any) throw std::invalid_argument("degenerate batch: every signal has zero area function");

    AngleReport rep;
    std::vector<double> la, lr;
    for (double a : a_list) {
        sq.aperture = a;
        double worst = 0.0;
        for (size_t i = 0; i < batch.size(); ++i) {
            if (base[i] == 0.0) continue;
            Signal sig = lusin_function(spec, pou, batch[i], sq);
            double v = lp_norm(spec.space(), ComplexSignal(sig.begin(), sig.end()), p);
            worst = std::max(worst, v / base[i]);
        }
        rep.ratios.push_back({a, worst});
        la.push_back(std::log(a));
        lr.push_back(std::log(worst));
    }
    // least squares log ratio = log C + e log a
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = static_cast<int>(la.size());
    for (int i = 0; i < m; ++i) {
        sx += la[i];
        sy += lr[i];
        sxx += la[i] * la[i];
        sxy += la[i] * lr[i];
    }
    double denom = m * sxx - sx * sx;
    if (denom > 0.0) {
        rep.e_fitted = (m * sxy - sx * sy) / denom;
        rep.C_fitted = std::exp((sy - rep.e_fitted * sx) / m);
    }
    return rep;
}

EquivalenceReport equivalence_report(const OperatorSpectrum& spec, const SpectralFunction& w1,
                                     const SpectralFunction& w2,
                                     const std::vector<ComplexSignal>& batch, const NormSpec& ns) {
    if (batch.empty()) throw std::invalid_argument("batch must be nonempty");
    EquivalenceReport rep;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < batch.size(); ++i) {
        double n1 = window_norm(spec, w1, batch[i], ns).value;
        double n2 = window_norm(spec, w2, batch[i], ns).value;
        if (n2 == 0.0) continue;
        double r = n1 / n2;
        if (r < rep.min_ratio) {
            rep.min_ratio = r;
            rep.argmin = static_cast<int>(i);
        }
        if (r > rep.max_ratio) {
            rep.max_ratio = r;
            rep.argmax = static_cast<int>(i);
        }
    }
    if (rep.argmin < 0) throw std::invalid_argument("degenerate batch: all reference norms zero");
    return rep;
}

} // namespace fha

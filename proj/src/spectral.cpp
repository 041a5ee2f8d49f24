#include "fha/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace fha {

namespace {

// Cyclic Jacobi sweeps; a is symmetric, v accumulates rotations (columns are
// eigenvectors). Runs to near machine precision: basis orthonormality errors
// get amplified by high powers of the scale in downstream quadratures, so a
// looser stop (e.g. 1e-12) visibly pollutes reconstruction residuals.
void jacobi_eigen(std::vector<std::vector<double>>& a, std::vector<std::vector<double>>& v) {
    const int n = static_cast<int>(a.size());
    v.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) v[i][i] = 1.0;
    double norm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) norm += a[i][j] * a[i][j];
    norm = std::sqrt(norm);
    if (norm == 0.0) return;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += 2.0 * a[i][j] * a[i][j];
        if (std::sqrt(off) <= 1e-15 * norm) return;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    throw std::runtime_error("eigensolver failed to converge in 100 sweeps");
}

} // namespace

Matrix reshape_matrix(const std::vector<double>& flat, int n) {
    if (static_cast<int>(flat.size()) != n * n)
        throw std::invalid_argument("flat matrix has wrong size");
    Matrix m(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = flat[static_cast<size_t>(i) * n + j];
    return m;
}

double OperatorSpectrum::lambda_min_positive() const {
    for (double l : eigenvalues_)
        if (l > 0.0) return l;
    throw std::domain_error("spectrum has no positive eigenvalue");
}

std::vector<Complex> OperatorSpectrum::coefficients(const ComplexSignal& f) const {
    const int n = size();
    std::vector<Complex> c(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int x = 0; x < n; ++x) c[i] += f[x] * eigenvectors_[i][x] * space_->mu(x);
    return c;
}

std::vector<double> OperatorSpectrum::coefficients(const Signal& f) const {
    const int n = size();
    std::vector<double> c(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int x = 0; x < n; ++x) c[i] += f[x] * eigenvectors_[i][x] * space_->mu(x);
    return c;
}

OperatorSpectrum spectral_decompose(const Space& s, const Matrix& L) {
    const int n = s.size();
    if (static_cast<int>(L.size()) != n)
        throw std::invalid_argument("operator size does not match the space");
    for (const auto& row : L)
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("operator matrix is not square");

    // self-adjointness in <.,.>_mu <=> mu(x) L(x,y) symmetric
    double worst = 0.0;
    int wx = 0, wy = 0;
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
            double asym = std::abs(s.mu(x) * L[x][y] - s.mu(y) * L[y][x]);
            if (asym > worst) {
                worst = asym;
                wx = x;
                wy = y;
            }
        }
    if (worst > 1e-9)
        throw std::invalid_argument("operator is not self-adjoint in the weighted form: entry (" +
                                    std::to_string(wx) + "," + std::to_string(wy) +
                                    ") asymmetry " + std::to_string(worst));

    // symmetrize: S = D^{1/2} L D^{-1/2}
    std::vector<std::vector<double>> sym(n, std::vector<double>(n));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) sym[x][y] = std::sqrt(s.mu(x) / s.mu(y)) * L[x][y];
    // exact symmetry for the solver
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
            double avg = 0.5 * (sym[x][y] + sym[y][x]);
            sym[x][y] = sym[y][x] = avg;
        }

    std::vector<std::vector<double>> vec;
    jacobi_eigen(sym, vec);

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return sym[a][a] < sym[b][b]; });

    std::vector<double> lambda(n);
    std::vector<Signal> phi(n, Signal(n));
    for (int i = 0; i < n; ++i) {
        double l = sym[order[i]][order[i]];
        if (l < -1e-6)
            throw std::invalid_argument("operator has a negative eigenvalue: " + std::to_string(l));
        lambda[i] = l < 1e-10 ? 0.0 : l;
        for (int x = 0; x < n; ++x) phi[i][x] = vec[x][order[i]] / std::sqrt(s.mu(x));
        // sign convention: first component above noise is positive
        for (int x = 0; x < n; ++x) {
            if (std::abs(phi[i][x]) > 1e-12) {
                if (phi[i][x] < 0.0)
                    for (double& v : phi[i]) v = -v;
                break;
            }
        }
    }
    return OperatorSpectrum(&s, L, std::move(lambda), std::move(phi));
}

ComplexSignal apply_kernel(const KernelMatrix& k, const Space& s, const ComplexSignal& f) {
    const int n = k.size();
    ComplexSignal out(n, 0.0);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) out[x] += k.values[x][y] * f[y] * s.mu(y);
    return out;
}

Signal apply_kernel(const KernelMatrix& k, const Space& s, const Signal& f) {
    ComplexSignal cf(f.begin(), f.end());
    ComplexSignal res = apply_kernel(k, s, cf);
    Signal out(res.size());
    for (size_t i = 0; i < res.size(); ++i) out[i] = res[i].real();
    return out;
}

KernelMatrix compose_kernels(const KernelMatrix& k1, const KernelMatrix& k2, const Space& s) {
    const int n = k1.size();
    KernelMatrix out;
    out.generator = k1.generator + " o " + k2.generator;
    out.values.assign(n, ComplexSignal(n, 0.0));
    for (int x = 0; x < n; ++x)
        for (int z = 0; z < n; ++z) {
            Complex w = k1.values[x][z] * s.mu(z);
            if (w == Complex(0.0)) continue;
            for (int y = 0; y < n; ++y) out.values[x][y] += w * k2.values[z][y];
        }
    return out;
}

KernelMatrix heat_kernel(const OperatorSpectrum& spec, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("heat kernel time must be positive");
    const int n = spec.size();
    KernelMatrix k;
    k.generator = "heat(t=" + std::to_string(t) + ")";
    k.values.assign(n, ComplexSignal(n, 0.0));
    for (int i = 0; i < n; ++i) {
        double w = std::exp(-t * spec.eigenvalue(i));
        const Signal& phi = spec.eigenvector(i);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) k.values[x][y] += w * phi[x] * phi[y];
    }
    return k;
}

KernelMatrix apply_function(const OperatorSpectrum& spec, const SpectralFunction& f) {
    const int n = spec.size();
    KernelMatrix k;
    k.generator = f.name;
    k.values.assign(n, ComplexSignal(n, 0.0));
    for (int i = 0; i < n; ++i) {
        Complex w = f(std::sqrt(spec.eigenvalue(i)));
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
            throw std::domain_error("symbol '" + f.name + "' undefined at eigenvalue " +
                                    std::to_string(spec.eigenvalue(i)));
        if (w == Complex(0.0)) continue;
        const Signal& phi = spec.eigenvector(i);
        for (int x = 0; x < n; ++x) {
            Complex wx = w * phi[x];
            for (int y = 0; y < n; ++y) k.values[x][y] += wx * phi[y];
        }
    }
    return k;
}

ComplexSignal apply_function_to_signal(const OperatorSpectrum& spec, const SpectralFunction& f,
                                       const ComplexSignal& sig) {
    const int n = spec.size();
    std::vector<Complex> c = spec.coefficients(sig);
    ComplexSignal out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        Complex w = f(std::sqrt(spec.eigenvalue(i)));
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
            throw std::domain_error("symbol '" + f.name + "' undefined at eigenvalue " +
                                    std::to_string(spec.eigenvalue(i)));
        if (w == Complex(0.0)) continue;
        Complex wc = w * c[i];
        const Signal& phi = spec.eigenvector(i);
        for (int x = 0; x < n; ++x) out[x] += wc * phi[x];
    }
    return out;
}

ComplexSignal apply_function_to_signal(const OperatorSpectrum& spec, const SpectralFunction& f,
                                       const Signal& sig) {
    return apply_function_to_signal(spec, f, ComplexSignal(sig.begin(), sig.end()));
}

GaussianFit gaussian_diagnostic(const OperatorSpectrum& spec, const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("t grid must be nonempty");
    for (double t : t_grid)
        if (!(t > 0.0)) throw std::invalid_argument("t grid must be positive");
    const Space& s = spec.space();
    const int n = spec.size();
    const std::vector<double> candidates = {1.0, 2.0, 4.0, 8.0, 16.0};

    struct Fit {
        double C = 0.0;
        int wx = 0, wy = 0;
        double wt = 0.0;
    };
    std::vector<Fit> fits(candidates.size());
    for (double t : t_grid) {
        KernelMatrix p = heat_kernel(spec, t);
        for (int x = 0; x < n; ++x) {
            double vol = s.ball_volume(x, std::sqrt(t));
            for (int y = 0; y < n; ++y) {
                double mag = std::abs(p.values[x][y]) * vol;
                double d2 = s.d(x, y) * s.d(x, y);
                for (size_t ci = 0; ci < candidates.size(); ++ci) {
                    double need = mag * std::exp(d2 / (candidates[ci] * t));
                    if (need > fits[ci].C) fits[ci] = {need, x, y, t};
                }
            }
        }
    }
    GaussianFit best;
    best.C = std::numeric_limits<double>::infinity();
    for (size_t ci = 0; ci < candidates.size(); ++ci) {
        best.per_candidate.push_back({candidates[ci], fits[ci].C});
        if (fits[ci].C < best.C) {
            best.C = fits[ci].C;
            best.c = candidates[ci];
            best.worst_x = fits[ci].wx;
            best.worst_y = fits[ci].wy;
            best.worst_t = fits[ci].wt;
        }
    }
    return best;
}

PropagationReport finite_propagation_check(const OperatorSpectrum& spec,
                                           const SpectralFunction& phi, double t, int k) {
    if (!(t > 0.0)) throw std::invalid_argument("propagation time must be positive");
    if (k < 0) throw std::invalid_argument("power k must be nonnegative");
    SpectralFunction sym;
    sym.name = "(t^2 L)^" + std::to_string(k) + " " + phi.name + "(t sqrt(L))";
    auto base = phi.eval;
    sym.eval = [base, t, k](double lambda) {
        Complex v = base(t * lambda);
        double amp = std::pow(t * lambda, 2.0 * k);
        return amp * v;
    };
    KernelMatrix ker = apply_function(spec, sym);

    const Space& s = spec.space();
    const int n = spec.size();
    PropagationReport rep;
    bool any_off = false;
    for (int x = 0; x < n; ++x) {
        double vol = s.ball_volume(x, t);
        for (int y = 0; y < n; ++y) {
            double mag = std::abs(ker.values[x][y]);
            if (s.d(x, y) > t) {
                any_off = true;
                rep.off_support_max = std::max(rep.off_support_max, mag);
            } else {
                rep.on_support_max = std::max(rep.on_support_max, mag);
            }
            rep.size_bound_C = std::max(rep.size_bound_C, mag * vol);
        }
    }
    rep.vacuous = !any_off;
    rep.ratio = (rep.vacuous || rep.on_support_max == 0.0)
                    ? 0.0
                    : rep.off_support_max / rep.on_support_max;
    return rep;
}

RestrictedBoundReport restricted_kernel_bounds(const OperatorSpectrum& spec,
                                               const SpectralFunction& f, double R, double s_idx,
                                               double q_tilde, double eps) {
    if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
    // verify support on the evaluation grid: eigenvalues plus a uniform scan;
    // [0, R] rather than [R/4, R] so zero-padding to a doubled R stays legal
    for (int i = 0; i < spec.size(); ++i) {
        double sq = std::sqrt(spec.eigenvalue(i));
        if (sq > R && std::abs(f(sq)) > 1e-14)
            throw std::invalid_argument("symbol '" + f.name + "' is nonzero at " +
                                        std::to_string(sq) + " above R");
    }
    for (int j = 0; j <= 256; ++j) {
        double lam = R * (1.0 + 0.25 * j);
        if (std::abs(f(lam)) > 1e-14)
            throw std::invalid_argument("symbol '" + f.name + "' is nonzero at " +
                                        std::to_string(lam) + " above R");
    }
    SpectralFunction g = dilate(f, R); // supported in [0, 1]
    g.support = {0.0, 1.0};

    RestrictedBoundReport rep;
    // ||delta_R F||_{q~} on [0, 1] by trapezoid
    {
        const int m = 4096;
        double lo = 0.0, hi = 1.0, h = (hi - lo) / m;
        if (std::isinf(q_tilde)) {
            double mx = 0.0;
            for (int j = 0; j <= m; ++j) mx = std::max(mx, std::abs(g(lo + j * h)));
            rep.norm_q = mx;
        } else {
            double acc = 0.0;
            for (int j = 0; j <= m; ++j) {
                double w = (j == 0 || j == m) ? 0.5 : 1.0;
                acc += w * std::pow(std::abs(g(lo + j * h)), q_tilde);
            }
            rep.norm_q = std::pow(acc * h, 1.0 / q_tilde);
        }
    }
    rep.norm_sobolev = sobolev_norm(g, s_idx + eps, q_tilde).value;

    KernelMatrix ker = apply_function(spec, f);
    const Space& sp = spec.space();
    const int n = spec.size();
    const double rinv = 1.0 / R;
    if (rep.norm_q > 0.0) {
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                double denom = std::sqrt(sp.ball_volume(x, rinv) * sp.ball_volume(y, rinv));
                rep.C_pointwise =
                    std::max(rep.C_pointwise, std::abs(ker.values[x][y]) * denom / rep.norm_q);
            }
        for (int y = 0; y < n; ++y) {
            double col = 0.0;
            for (int x = 0; x < n; ++x)
                col += std::norm(ker.values[x][y]) * sp.mu(x);
            rep.C_column_l2 = std::max(
                rep.C_column_l2, col * sp.ball_volume(y, rinv) / (rep.norm_q * rep.norm_q));
        }
    }
    if (rep.norm_sobolev > 0.0) {
        for (int x = 0; x < n; ++x) {
            double row = 0.0;
            for (int y = 0; y < n; ++y)
                row += std::norm(ker.values[x][y]) *
                       std::pow(1.0 + R * sp.d(x, y), 2.0 * s_idx) * sp.mu(y);
            rep.C_weighted_l2 =
                std::max(rep.C_weighted_l2,
                         std::sqrt(row * sp.ball_volume(x, rinv)) / rep.norm_sobolev);
        }
    }
    return rep;
}

double operator_l2_norm(const KernelMatrix& k, const Space& s, int iters, unsigned seed) {
    const int n = k.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexSignal v(n);
    for (auto& x : v) x = Complex(u(rng), u(rng));

    // adjoint in L2(mu): K*(x,y) = conj(K(y,x))
    auto apply_adjoint = [&](const ComplexSignal& f) {
        ComplexSignal out(n, 0.0);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) out[x] += std::conj(k.values[y][x]) * f[y] * s.mu(y);
        return out;
    };
    double sigma2 = 0.0;
    for (int it = 0; it < iters; ++it) {
        ComplexSignal w = apply_adjoint(apply_kernel(k, s, v));
        double nrm = 0.0;
        for (int x = 0; x < n; ++x) nrm += std::norm(w[x]) * s.mu(x);
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) return 0.0;
        double next = nrm; // Rayleigh growth of K*K on mu-normalized v
        for (auto& x : w) x /= nrm;
        v = std::move(w);
        if (it > 4 && std::abs(next - sigma2) <= 1e-9 * std::max(next, 1e-300)) {
            sigma2 = next;
            break;
        }
        sigma2 = next;
    }
    return std::sqrt(sigma2);
}

} // namespace fha

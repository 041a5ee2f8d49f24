#include "fha/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace fha {

namespace {

ComplexSignal apply_L(const Matrix& L, const ComplexSignal& f) {
    const int n = static_cast<int>(L.size());
    ComplexSignal out(n, 0.0);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) out[x] += L[x][y] * f[y];
    return out;
}

double max_abs(const ComplexSignal& f) {
    double m = 0.0;
    for (const Complex& v : f) m = std::max(m, std::abs(v));
    return m;
}

void track(AtomReport& rep, double ratio, const std::string& clause, int witness) {
    if (ratio > rep.worst_violation) {
        rep.worst_violation = ratio;
        rep.worst_clause = clause;
        rep.witness_point = witness;
    }
    if (ratio > 1.0 + 1e-12) rep.ok = false;
}

} // namespace

AtomReport validate_atom(const OperatorSpectrum& spec, const DyadicTree& tree,
                         const ClassicAtom& atom, double support_tol) {
    AtomReport rep;
    const Space& s = spec.space();
    const int n = s.size();
    const Cube& q = tree.cubes_at_level(atom.cube_level)[atom.cube_id];
    const double ell = q.sidelength();
    const double r3 = 3.0 * tree.kappa0() * ell;
    const double vol = tree.cube_measure(q);
    double size_factor = 0.0;

    ComplexSignal lkb = atom.b;
    for (int k = 0; k <= 2 * atom.M; ++k) {
        if (k > 0) lkb = apply_L(spec.matrix(), lkb);
        double peak = max_abs(lkb);
        double rhs_size = std::pow(ell, 2.0 * (atom.M - k)) * std::pow(vol, -1.0 / atom.p);
        for (int x = 0; x < n; ++x) {
            double mag = std::abs(lkb[x]);
            if (s.d(q.center, x) > r3 * (1.0 + 1e-12) && peak > 0.0)
                track(rep, mag / (support_tol * peak), "support L^" + std::to_string(k), x);
            track(rep, mag / rhs_size, "size L^" + std::to_string(k), x);
            if (rhs_size > 0.0) size_factor = std::max(size_factor, mag / rhs_size);
        }
    }
    rep.normalization = std::max(size_factor, 1.0);
    return rep;
}

AtomReport validate_atom(const OperatorSpectrum& spec, const PartitionOfUnity& pou,
                         const NewAtom& atom, double support_tol) {
    AtomReport rep;
    const Space& s = spec.space();
    const int n = s.size();
    const double volB = s.ball_volume(atom.center, atom.radius * (1.0 + 1e-12));
    NormSpec fs{atom.alpha, atom.q, atom.q, NormKind::triebel_lizorkin};
    double size_factor = 0.0;

    ComplexSignal lkb = atom.b;
    for (int k = 0; k <= atom.M; ++k) {
        if (k > 0) lkb = apply_L(spec.matrix(), lkb);
        double peak = max_abs(lkb);
        for (int x = 0; x < n; ++x)
            if (s.d(atom.center, x) > atom.radius * (1.0 + 1e-12) && peak > 0.0)
                track(rep, std::abs(lkb[x]) / (support_tol * peak),
                      "support L^" + std::to_string(k), x);
        double lhs = space_norm(spec, pou, lkb, fs).value;
        double rhs = std::pow(atom.radius, 2.0 * (atom.M - k)) *
                     std::pow(volB, 1.0 / atom.q - 1.0 / atom.p);
        track(rep, rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity()
                                                      : 0.0),
              "norm L^" + std::to_string(k), -1);
        if (rhs > 0.0) size_factor = std::max(size_factor, lhs / rhs);
    }
    rep.normalization = std::max(size_factor, 1.0);
    return rep;
}

std::pair<int, int> required_tree_levels(const OperatorSpectrum& spec) {
    double hi = std::sqrt(spec.lambda_max());
    if (hi <= 0.0) throw std::domain_error("zero operator has no scale band");
    double lo = std::sqrt(spec.lambda_min_positive());
    int umin = static_cast<int>(std::floor(std::log2(0.5 / hi)));
    int umax = static_cast<int>(std::ceil(std::log2(2.0 / lo)));
    return {-umax, -umin - 1};
}

Decomposition atomic_decompose(const OperatorSpectrum& spec, const DyadicTree& tree,
                               const PartitionOfUnity& pou, const ComplexSignal& f, double alpha,
                               double p, double q, int M, DecomposeOptions opts) {
    if (!(p > 0.0 && p <= 1.0 && q > 1.0 && std::isfinite(q)))
        throw std::invalid_argument("need 0 < p <= 1 < q < inf");
    if (M < 1) throw std::invalid_argument("M must be >= 1");
    const Space& s = spec.space();
    const int n = s.size();
    const int P = opts.points_per_octave;

    Decomposition dec;
    dec.source = f;
    dec.m = static_cast<int>(std::floor(std::abs(alpha) / 4.0 + 0.5)) + 1;

    double src_norm = 0.0;
    for (int x = 0; x < n; ++x) src_norm += std::norm(f[x]) * s.mu(x);
    src_norm = std::sqrt(src_norm);
    if (src_norm == 0.0) {
        dec.reconstruction.assign(n, 0.0);
        return dec;
    }
    double removed = 0.0;
    ComplexSignal g = project_out_kernel(spec, f, &removed);
    double g_norm = 0.0;
    for (int x = 0; x < n; ++x) g_norm += std::norm(g[x]) * s.mu(x);
    g_norm = std::sqrt(g_norm);
    if (g_norm <= 1e-10 * src_norm)
        throw std::invalid_argument("signal lies entirely in the kernel of the operator");

    auto [lev_lo, lev_hi] = required_tree_levels(spec);
    if (tree.level_min() > lev_lo || tree.level_max() < lev_hi)
        throw std::invalid_argument("tree levels [" + std::to_string(tree.level_min()) + "," +
                                    std::to_string(tree.level_max()) + "] do not cover the band [" +
                                    std::to_string(lev_lo) + "," + std::to_string(lev_hi) + "]");

    // midpoint log-t quadrature, aligned so each octave maps to one cube level
    const int umin = -lev_hi - 1, umax = -lev_lo;
    const double w = std::log(2.0) / P;
    std::vector<double> t_grid;
    for (int i = umin * P; i < umax * P; ++i) t_grid.push_back(std::exp2((i + 0.5) / P));
    const int nt = static_cast<int>(t_grid.size());

    std::vector<double> sqlam(n);
    for (int i = 0; i < n; ++i) sqlam[i] = std::sqrt(spec.eigenvalue(i));
    std::vector<Complex> coeff = spec.coefficients(g);

    // field u_t = psi(t sqrt(L)) f on the full grid
    std::vector<ComplexSignal> field(nt, ComplexSignal(n, 0.0));
    for (int it = 0; it < nt; ++it) {
        for (int i = 0; i < n; ++i) {
            double wv = pou(t_grid[it] * sqlam[i]);
            if (wv == 0.0) continue;
            Complex c = wv * coeff[i];
            const Signal& phi = spec.eigenvector(i);
            for (int x = 0; x < n; ++x) field[it][x] += c * phi[x];
        }
    }

    // Lusin function with the geometric aperture
    dec.c0 = std::max(2.0 * tree.kappa0(), 1.001);
    Signal lusin(n, 0.0);
    for (int it = 0; it < nt; ++it) {
        double t = t_grid[it];
        std::vector<double> amp(n);
        for (int y = 0; y < n; ++y)
            amp[y] = std::pow(std::pow(t, -alpha) * std::abs(field[it][y]), q) * s.mu(y);
        for (int x = 0; x < n; ++x) {
            double sum = 0.0;
            for (int y = 0; y < n; ++y)
                if (s.d(x, y) < dec.c0 * t) sum += amp[y];
            lusin[x] += w * sum / s.ball_volume(x, t);
        }
    }
    for (double& v : lusin) v = std::pow(v, 1.0 / q);

    double s_max = 0.0, s_min_pos = std::numeric_limits<double>::infinity();
    for (double v : lusin) {
        s_max = std::max(s_max, v);
        if (v > 0.0) s_min_pos = std::min(s_min_pos, v);
    }
    if (s_max == 0.0) throw std::invalid_argument("area function vanishes identically");
    const int k_min = static_cast<int>(std::floor(p * std::log2(s_min_pos))) - 1;
    const int k_max = static_cast<int>(std::ceil(p * std::log2(s_max))) + 1;

    // level sets O_k (strict inequality) and their measures for the audit log
    auto in_Ok = [&](int x, int k) { return std::pow(lusin[x], p) > std::exp2(k); };
    for (int k = k_min; k <= k_max; ++k) {
        double mass = 0.0;
        for (int x = 0; x < n; ++x)
            if (in_Ok(x, k)) mass += s.mu(x);
        dec.stopping_sizes.push_back({k, mass});
    }

    // assign each cube to its unique stopping level
    struct CubeRef {
        int level;
        int id;
    };
    std::map<std::pair<int, int>, int> cube_k;
    for (int nu = tree.level_min(); nu <= tree.level_max(); ++nu) {
        for (const Cube& qc : tree.cubes_at_level(nu)) {
            double muq = tree.cube_measure(qc);
            for (int k = k_min; k <= k_max; ++k) {
                double mk = 0.0, mk1 = 0.0;
                for (int x : qc.members) {
                    if (in_Ok(x, k)) mk += s.mu(x);
                    if (in_Ok(x, k + 1)) mk1 += s.mu(x);
                }
                if (mk > muq / 2.0 && muq / 2.0 >= mk1) {
                    cube_k[{nu, qc.id}] = k;
                    break;
                }
            }
        }
    }

    // group cubes under the maximal assigned cube with the same k
    std::map<std::pair<int, std::pair<int, int>>, std::vector<CubeRef>> groups;
    for (const auto& [key, k] : cube_k) {
        const Cube* cur = &tree.cubes_at_level(key.first)[key.second];
        std::pair<int, int> top = key;
        const Cube* walk = cur;
        while (walk->level > tree.level_min()) {
            walk = &tree.parent_of(*walk);
            auto it = cube_k.find({walk->level, walk->id});
            if (it != cube_k.end() && it->second == k) top = {walk->level, walk->id};
        }
        groups[{k, top}].push_back({key.first, key.second});
    }

    // reproducing constant: 1/c = int s^{2M+2m} Phi(s) psi(s) ds/s on the
    // same midpoint density (psi limits the range to one octave each side)
    SpectralFunction Phi = finite_propagation_window();
    double cinv = 0.0;
    for (int i = -P; i < P; ++i) {
        double sv = std::exp2((i + 0.5) / P);
        cinv += std::pow(sv, 2.0 * (M + dec.m)) * Phi(sv).real() * pou(sv) * w;
    }
    dec.c_norm = 1.0 / cinv;

    // Psi(t sqrt(lambda_i)) per grid node, shared across cubes
    std::vector<std::vector<double>> Psi_t(nt, std::vector<double>(n));
    for (int it = 0; it < nt; ++it)
        for (int i = 0; i < n; ++i) {
            double ts = t_grid[it] * sqlam[i];
            Psi_t[it][i] = std::pow(ts, 2.0 * dec.m) * Phi(ts).real();
        }

    dec.reconstruction.assign(n, 0.0);
    for (const auto& [gkey, cubes] : groups) {
        int k = gkey.first;
        const Cube& top = tree.cubes_at_level(gkey.second.first)[gkey.second.second];

        ComplexSignal acc(n, 0.0);
        double lam_q = 0.0;
        for (const CubeRef& cr : cubes) {
            const Cube& qc = tree.cubes_at_level(cr.level)[cr.id];
            // octave of this cube: t in (2^{-level-1}, 2^{-level}]
            int i_lo = (-cr.level - 1) * P, i_hi = -cr.level * P;
            if (i_lo < umin * P || i_hi > umax * P) continue; // outside the band
            for (int i = i_lo; i < i_hi; ++i) {
                int it = i - umin * P;
                double t = t_grid[it];
                // chi_Q u_t and its spectral push through Psi(t sqrt(L))
                ComplexSignal chi(n, 0.0);
                for (int x : qc.members) chi[x] = field[it][x];
                std::vector<Complex> cc = spec.coefficients(chi);
                double tw = w * std::pow(t, 2.0 * M);
                for (int i2 = 0; i2 < n; ++i2) {
                    double psiv = Psi_t[it][i2];
                    if (psiv == 0.0) continue;
                    Complex c = tw * psiv * cc[i2];
                    const Signal& phi = spec.eigenvector(i2);
                    for (int x = 0; x < n; ++x) acc[x] += c * phi[x];
                }
                for (int x : qc.members)
                    lam_q += w * std::pow(std::pow(t, -alpha) * std::abs(field[it][x]), q) *
                             s.mu(x);
            }
        }
        double lam = std::pow(tree.cube_measure(top), 1.0 / p - 1.0 / q) *
                     std::pow(lam_q, 1.0 / q);
        if (!(lam > 0.0)) continue;

        NewAtom atom;
        atom.center = top.center;
        atom.radius = 3.0 * tree.kappa0() * top.sidelength();
        atom.cube_level = top.level;
        atom.cube_id = top.id;
        atom.M = M;
        atom.alpha = alpha;
        atom.p = p;
        atom.q = q;
        atom.b.assign(n, 0.0);
        for (int x = 0; x < n; ++x) atom.b[x] = dec.c_norm / lam * acc[x];
        atom.a = atom.b;
        for (int j = 0; j < M; ++j) atom.a = apply_L(spec.matrix(), atom.a);
        for (int x = 0; x < n; ++x) dec.reconstruction[x] += lam * atom.a[x];

        dec.atoms.push_back(std::move(atom));
        dec.coefficients.push_back(lam);
        dec.atom_k.push_back(k);
    }

    double err = 0.0;
    for (int x = 0; x < n; ++x) err += std::norm(dec.reconstruction[x] - g[x]) * s.mu(x);
    dec.residual = std::sqrt(err) / g_norm;
    return dec;
}

double coefficient_norm(const Decomposition& dec, double p) {
    double acc = 0.0;
    for (double l : dec.coefficients) acc += std::pow(std::abs(l), p);
    return std::pow(acc, 1.0 / p);
}

std::pair<ComplexSignal, double> reconstruct(const OperatorSpectrum& spec,
                                             const Decomposition& dec) {
    const int n = spec.size();
    const Space& s = spec.space();
    ComplexSignal sum(n, 0.0);
    for (size_t j = 0; j < dec.atoms.size(); ++j)
        for (int x = 0; x < n; ++x) sum[x] += dec.coefficients[j] * dec.atoms[j].a[x];
    double err = 0.0, ref = 0.0;
    ComplexSignal g = project_out_kernel(spec, dec.source);
    for (int x = 0; x < n; ++x) {
        err += std::norm(sum[x] - g[x]) * s.mu(x);
        ref += std::norm(g[x]) * s.mu(x);
    }
    double rel = ref > 0.0 ? std::sqrt(err / ref) : std::sqrt(err);
    return {sum, rel};
}

nlohmann::json Decomposition::to_json() const {
    nlohmann::json atoms_j = nlohmann::json::array();
    for (size_t j = 0; j < atoms.size(); ++j) {
        std::vector<double> b_re, b_im;
        for (const Complex& v : atoms[j].b) {
            b_re.push_back(v.real());
            b_im.push_back(v.imag());
        }
        atoms_j.push_back({{"center", atoms[j].center},
                           {"radius", atoms[j].radius},
                           {"M", atoms[j].M},
                           {"k", atom_k[j]},
                           {"lambda", coefficients[j]},
                           {"b_re", b_re},
                           {"b_im", b_im}});
    }
    nlohmann::json audit = nlohmann::json::array();
    for (const auto& [k, mass] : stopping_sizes) audit.push_back({{"k", k}, {"mu_Ok", mass}});
    return {{"residual", residual}, {"c0", c0},    {"c_norm", c_norm},
            {"m", m},               {"atoms", atoms_j}, {"stopping_sets", audit}};
}

SynthesisReport synthesis_bound_check(const OperatorSpectrum& spec, const DyadicTree& tree,
                                      const PartitionOfUnity& pou,
                                      const std::vector<ClassicAtom>& atoms,
                                      const std::vector<double>& s_coeff, const NormSpec& ns) {
    if (atoms.size() != s_coeff.size())
        throw std::invalid_argument("coefficient count does not match atom count");
    for (const ClassicAtom& a : atoms) {
        AtomReport rep = validate_atom(spec, tree, a, 1e-12);
        if (!rep.ok)
            throw std::invalid_argument("invalid atom: clause '" + rep.worst_clause +
                                        "' violated by factor " +
                                        std::to_string(rep.worst_violation));
    }
    const Space& s = spec.space();
    const int n = s.size();

    ComplexSignal sum(n, 0.0);
    for (size_t j = 0; j < atoms.size(); ++j)
        for (int x = 0; x < n; ++x) sum[x] += s_coeff[j] * atoms[j].a[x];
    SynthesisReport rep;
    rep.lhs = space_norm(spec, pou, sum, ns).value;

    // sequence norm: levels nu with atoms contribute
    // ( sum_Q V(Q)^{-1/p} |s_Q| chi_Q )^q summed with weights 2^{nu alpha q}
    std::map<int, Signal> per_level;
    for (size_t j = 0; j < atoms.size(); ++j) {
        const Cube& qc = tree.cubes_at_level(atoms[j].cube_level)[atoms[j].cube_id];
        Signal& lvl = per_level
                          .try_emplace(atoms[j].cube_level, Signal(n, 0.0))
                          .first->second;
        double vq = std::pow(tree.cube_measure(qc), -1.0 / ns.p) * std::abs(s_coeff[j]);
        for (int x : qc.members) lvl[x] += vq;
    }
    ComplexSignal pointwise(n, 0.0);
    Signal accq(n, 0.0);
    for (const auto& [nu, lvl] : per_level) {
        double wq = std::pow(std::exp2(nu * ns.alpha), ns.q);
        for (int x = 0; x < n; ++x) accq[x] += wq * std::pow(lvl[x], ns.q);
    }
    for (int x = 0; x < n; ++x) pointwise[x] = std::pow(accq[x], 1.0 / ns.q);
    rep.rhs = lp_norm(s, pointwise, ns.p);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

} // namespace fha

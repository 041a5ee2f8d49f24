#include "fha/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace fha {

namespace {

void validate_distances(int n, const std::vector<double>& dist) {
    for (int x = 0; x < n; ++x) {
        if (dist[static_cast<size_t>(x) * n + x] != 0.0)
            throw std::invalid_argument("dist(" + std::to_string(x) + "," + std::to_string(x) +
                                        ") must be 0");
        for (int y = 0; y < n; ++y) {
            double dxy = dist[static_cast<size_t>(x) * n + y];
            double dyx = dist[static_cast<size_t>(y) * n + x];
            if (dxy < 0.0)
                throw std::invalid_argument("negative distance at pair (" + std::to_string(x) +
                                            "," + std::to_string(y) + ")");
            if (dxy != dyx)
                throw std::invalid_argument("non-symmetric distance at pair (" +
                                            std::to_string(x) + "," + std::to_string(y) + ")");
            if (x != y && dxy == 0.0)
                throw std::invalid_argument("zero distance between distinct points (" +
                                            std::to_string(x) + "," + std::to_string(y) + ")");
        }
    }
}

// Smallest K with d(x,z) <= K (d(x,y)+d(y,z)). Exact for N <= 512, sampled above.
double fit_quasi_const(int n, const std::vector<double>& dist) {
    auto d = [&](int a, int b) { return dist[static_cast<size_t>(a) * n + b]; };
    double k = 1.0;
    if (n <= 512) {
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z) {
                    double denom = d(x, y) + d(y, z);
                    if (denom > 0.0) k = std::max(k, d(x, z) / denom);
                }
    } else {
        uint64_t state = 0x9e3779b97f4a7c15ULL;
        auto next = [&]() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            return static_cast<int>(state % static_cast<uint64_t>(n));
        };
        for (int trial = 0; trial < 2000000; ++trial) {
            int x = next(), y = next(), z = next();
            double denom = d(x, y) + d(y, z);
            if (denom > 0.0) k = std::max(k, d(x, z) / denom);
        }
    }
    return k;
}

std::vector<double> shortest_paths(int n, const std::vector<std::vector<std::pair<int, double>>>& adj) {
    std::vector<double> dist(static_cast<size_t>(n) * n, std::numeric_limits<double>::infinity());
    for (int s = 0; s < n; ++s) {
        std::vector<double> row(n, std::numeric_limits<double>::infinity());
        row[s] = 0.0;
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        pq.push({0.0, s});
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du > row[u]) continue;
            for (auto [v, w] : adj[u])
                if (row[u] + w < row[v]) {
                    row[v] = row[u] + w;
                    pq.push({row[v], v});
                }
        }
        for (int t = 0; t < n; ++t) {
            if (!std::isfinite(row[t]))
                throw std::invalid_argument("graph is disconnected: no path from " +
                                            std::to_string(s) + " to " + std::to_string(t));
            dist[static_cast<size_t>(s) * n + t] = row[t];
        }
    }
    return dist;
}

std::vector<std::vector<std::pair<int, double>>> named_adjacency(SpaceKind kind, int size) {
    std::vector<std::vector<std::pair<int, double>>> adj;
    switch (kind) {
        case SpaceKind::cycle: {
            adj.resize(size);
            for (int i = 0; i < size; ++i) {
                adj[i].push_back({(i + 1) % size, 1.0});
                adj[i].push_back({(i + size - 1) % size, 1.0});
            }
            break;
        }
        case SpaceKind::path: {
            adj.resize(size);
            for (int i = 0; i + 1 < size; ++i) {
                adj[i].push_back({i + 1, 1.0});
                adj[i + 1].push_back({i, 1.0});
            }
            break;
        }
        case SpaceKind::grid2d: {
            int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(size))));
            if (side * side != size)
                throw std::invalid_argument("grid2d size must be a perfect square");
            adj.resize(size);
            auto id = [side](int a, int b) { return a * side + b; };
            for (int a = 0; a < side; ++a)
                for (int b = 0; b < side; ++b) {
                    if (a + 1 < side) {
                        adj[id(a, b)].push_back({id(a + 1, b), 1.0});
                        adj[id(a + 1, b)].push_back({id(a, b), 1.0});
                    }
                    if (b + 1 < side) {
                        adj[id(a, b)].push_back({id(a, b + 1), 1.0});
                        adj[id(a, b + 1)].push_back({id(a, b), 1.0});
                    }
                }
            break;
        }
    }
    return adj;
}

std::vector<double> laplacian_of(int n, const std::vector<std::vector<std::pair<int, double>>>& adj) {
    std::vector<double> L(static_cast<size_t>(n) * n, 0.0);
    for (int u = 0; u < n; ++u)
        for (auto [v, len] : adj[u]) {
            double w = 1.0 / len;
            L[static_cast<size_t>(u) * n + v] -= w;
            L[static_cast<size_t>(u) * n + u] += w;
        }
    return L;
}

std::vector<std::vector<std::pair<int, double>>> adjacency_from_json(const nlohmann::json& j, int& n) {
    n = j.at("n").get<int>();
    if (n < 2) throw std::invalid_argument("graph must have at least 2 nodes");
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& e : j.at("edges")) {
        int a = e.at(0).get<int>();
        int b = e.at(1).get<int>();
        double len = e.size() > 2 ? e.at(2).get<double>() : 1.0;
        if (a < 0 || a >= n || b < 0 || b >= n || len <= 0.0)
            throw std::invalid_argument("bad edge in graph description");
        adj[a].push_back({b, len});
        adj[b].push_back({a, len});
    }
    return adj;
}

} // namespace

Space::Space(int n, std::vector<double> dist, std::vector<double> weight)
    : n_(n), dist_(std::move(dist)), weight_(std::move(weight)) {
    if (n_ < 1) throw std::invalid_argument("space needs at least one point");
    if (dist_.size() != static_cast<size_t>(n_) * n_) throw std::invalid_argument("dist size mismatch");
    if (weight_.size() != static_cast<size_t>(n_)) throw std::invalid_argument("weight size mismatch");
    for (double w : weight_)
        if (!(w > 0.0)) throw std::invalid_argument("weights must be strictly positive");
    validate_distances(n_, dist_);
    quasi_const_ = fit_quasi_const(n_, dist_);
    total_measure_ = 0.0;
    for (double w : weight_) total_measure_ += w;
    diameter_ = *std::max_element(dist_.begin(), dist_.end());
    min_pos_dist_ = diameter_;
    for (double v : dist_)
        if (v > 0.0) min_pos_dist_ = std::min(min_pos_dist_, v);
}

double Space::ball_volume(int x, double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
    double v = 0.0;
    for (int y = 0; y < n_; ++y)
        if (d(x, y) < r) v += mu(y);
    return v;
}

Space build_space(SpaceKind kind, int size) {
    if (size < 2) throw std::invalid_argument("size must be >= 2");
    auto adj = named_adjacency(kind, size);
    return Space(size, shortest_paths(size, adj), std::vector<double>(size, 1.0));
}

Space build_space_from_json(const nlohmann::json& j) {
    int n = 0;
    auto adj = adjacency_from_json(j, n);
    std::vector<double> w(n, 1.0);
    if (j.contains("weights")) {
        auto ws = j.at("weights").get<std::vector<double>>();
        if (static_cast<int>(ws.size()) != n) throw std::invalid_argument("weights size mismatch");
        w = ws;
    }
    return Space(n, shortest_paths(n, adj), std::move(w));
}

std::vector<double> graph_laplacian(SpaceKind kind, int size) {
    return laplacian_of(size, named_adjacency(kind, size));
}

std::vector<double> graph_laplacian_from_json(const nlohmann::json& j) {
    int n = 0;
    auto adj = adjacency_from_json(j, n);
    return laplacian_of(n, adj);
}

std::vector<double> default_r_grid(const Space& s) {
    std::vector<double> r;
    int kmax = static_cast<int>(std::ceil(std::log2(std::max(2.0, s.diameter()))));
    for (int k = -1; k <= kmax; ++k) r.push_back(std::exp2(k));
    return r;
}

DoublingReport fit_doubling(const Space& s, std::vector<double> r_grid,
                            std::vector<double> lambda_grid) {
    if (r_grid.empty()) r_grid = default_r_grid(s);
    if (lambda_grid.empty()) throw std::invalid_argument("lambda grid must be nonempty");
    for (double l : lambda_grid)
        if (l < 1.0) throw std::invalid_argument("lambda must be >= 1");

    DoublingReport rep;
    const int n = s.size();
    const double diam = s.diameter();
    const double r_floor = 2.0 * s.min_positive_distance();

    // Dimension estimate: log-log least squares through the origin over
    // unsaturated samples (r above the metric resolution, lambda*r inside the
    // space). Saturated balls carry no growth information.
    double sxy = 0.0, sxx = 0.0;
    double ncert = 0.0;
    for (int x = 0; x < n; ++x)
        for (double r : r_grid) {
            double vr = s.ball_volume(x, r);
            for (double l : lambda_grid) {
                if (l <= 1.0) continue;
                double ratio = s.ball_volume(x, l * r) / vr;
                ncert = std::max(ncert, std::log(ratio) / std::log(l));
                if (r < r_floor || l * r > diam / 2.0) continue;
                sxy += std::log(l) * std::log(ratio);
                sxx += std::log(l) * std::log(l);
            }
        }
    rep.n = sxx > 0.0 ? sxy / sxx : 0.0;
    rep.n_certified = ncert;

    // Certified constant for V(x,lr) <= C l^n V(x,r) over the full grids.
    rep.C_doubling = 0.0;
    for (int x = 0; x < n; ++x)
        for (double r : r_grid) {
            double vr = s.ball_volume(x, r);
            for (double l : lambda_grid) {
                double c = s.ball_volume(x, l * r) / (std::pow(l, rep.n) * vr);
                if (c > rep.C_doubling) {
                    rep.C_doubling = c;
                    rep.worst_volume = {x, -1, r, l};
                }
            }
        }

    // Comparison exponent of V(x,r) <= C (1+d(x,y)/r)^ntilde V(y,r):
    // same two-stage fit over (x,y,r) samples.
    sxy = sxx = 0.0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (x == y) continue;
            for (double r : r_grid) {
                if (r < r_floor) continue;
                double lhs = std::log(s.ball_volume(x, r) / s.ball_volume(y, r));
                double arg = std::log1p(s.d(x, y) / r);
                if (lhs <= 0.0) continue; // only growth constraints inform the exponent
                sxy += arg * lhs;
                sxx += arg * arg;
            }
        }
    rep.n_tilde = sxx > 0.0 ? std::max(0.0, sxy / sxx) : 0.0;
    if (rep.n_tilde > rep.n) {
        rep.n_tilde = rep.n;
        rep.n_tilde_clamped = true;
    }
    rep.C_compare = 0.0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (double r : r_grid) {
                double c = s.ball_volume(x, r) /
                           (std::pow(1.0 + s.d(x, y) / r, rep.n_tilde) * s.ball_volume(y, r));
                if (c > rep.C_compare) {
                    rep.C_compare = c;
                    rep.worst_compare = {x, y, r, 0.0};
                }
            }
    return rep;
}

Signal maximal_function(const Space& s, const Signal& f, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("maximal function exponent must be positive");
    const int n = s.size();
    if (static_cast<int>(f.size()) != n) throw std::invalid_argument("signal size mismatch");

    // All distinct balls are closed balls around each center; enumerate by
    // sorting distances per center and taking prefixes.
    Signal out(n, 0.0);
    std::vector<std::pair<double, int>> order(n);
    for (int z = 0; z < n; ++z) {
        for (int y = 0; y < n; ++y) order[y] = {s.d(z, y), y};
        std::sort(order.begin(), order.end());
        double vol = 0.0, mass = 0.0;
        for (int k = 0; k < n; ++k) {
            vol += s.mu(order[k].second);
            mass += std::pow(std::abs(f[order[k].second]), r) * s.mu(order[k].second);
            if (k + 1 < n && order[k + 1].first == order[k].first) continue; // same ball
            double avg = std::pow(mass / vol, 1.0 / r);
            // ball B(z, d_k + eps) contains exactly order[0..k]
            for (int j = 0; j <= k; ++j) {
                int x = order[j].second;
                out[x] = std::max(out[x], avg);
            }
        }
    }
    return out;
}

double lp_norm(const Space& s, const Signal& f, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (int x = 0; x < s.size(); ++x) acc += std::pow(std::abs(f[x]), p) * s.mu(x);
    return std::pow(acc, 1.0 / p);
}

} // namespace fha

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fha {

using Signal = std::vector<double>;

/// Finite metric measure space with a quasi-distance and positive weights.
/// Balls are strict: B(x,r) = { y : d(x,y) < r }.
class Space {
public:
    Space(int n, std::vector<double> dist, std::vector<double> weight);

    int size() const { return n_; }
    double d(int x, int y) const { return dist_[static_cast<size_t>(x) * n_ + y]; }
    double mu(int x) const { return weight_[x]; }
    const std::vector<double>& weights() const { return weight_; }
    double quasi_const() const { return quasi_const_; }
    double total_measure() const { return total_measure_; }
    double diameter() const { return diameter_; }
    double min_positive_distance() const { return min_pos_dist_; }

    double ball_volume(int x, double r) const;

private:
    int n_;
    std::vector<double> dist_;
    std::vector<double> weight_;
    double quasi_const_ = 1.0;
    double total_measure_ = 0.0;
    double diameter_ = 0.0;
    double min_pos_dist_ = 0.0;
};

enum class SpaceKind { cycle, path, grid2d };

/// Shortest-path space on a named graph with unit edge lengths and unit weights.
Space build_space(SpaceKind kind, int size);

/// Weighted graph from JSON {"n": int, "edges": [[i,j,length],...], "weights": [...]}.
/// Missing weights default to 1.0. Distances are shortest-path.
Space build_space_from_json(const nlohmann::json& j);

/// Dense graph Laplacian (degree minus adjacency, edge weight = 1/length)
/// matching the named builders above; row-major n*n.
std::vector<double> graph_laplacian(SpaceKind kind, int size);
std::vector<double> graph_laplacian_from_json(const nlohmann::json& j);

struct DoublingWitness {
    int x = -1;
    int y = -1;
    double r = 0.0;
    double lambda = 0.0;
};

/// Fitted doubling data. `n` is the pooled log-log slope over unsaturated
/// samples (the dimension estimate); `n_certified` is the smallest exponent
/// satisfying every sampled constraint with C = 1, which can only grow as
/// constraints are added. C_doubling certifies (2.1)-style doubling at the
/// fitted n over the full sample set.
struct DoublingReport {
    double C_doubling = 1.0;
    double n = 0.0;
    double n_certified = 0.0;
    double n_tilde = 0.0;
    double C_compare = 1.0;       // constant in the volume-comparison bound
    bool n_tilde_clamped = false; // true when the raw fit exceeded n
    DoublingWitness worst_volume; // attains C_doubling
    DoublingWitness worst_compare;
};

std::vector<double> default_r_grid(const Space& s);

DoublingReport fit_doubling(const Space& s,
                            std::vector<double> r_grid = {},
                            std::vector<double> lambda_grid = {1, 2, 4, 8});

/// Hardy--Littlewood maximal function: sup over all balls containing x of the
/// r-average, exhaustive over the finite ball family.
Signal maximal_function(const Space& s, const Signal& f, double r);

/// mu-weighted lp (quasi-)norm; p = infinity as max.
double lp_norm(const Space& s, const Signal& f, double p);

} // namespace fha

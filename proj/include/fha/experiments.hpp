#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "fha/atoms.hpp"
#include "fha/interp.hpp"

namespace fha {

/// One fully reproducible experiment setup. The seed determines every random
/// draw; identical configs produce byte-identical reports.
struct ExperimentConfig {
    std::string space_kind = "cycle"; // cycle | path | grid2d
    int space_size = 64;
    std::vector<double> alpha_list = {0.0, 1.0};
    std::vector<double> p_list = {0.5, 1.0, 2.0};
    std::vector<double> q_list = {1.0, 2.0};
    std::vector<double> s_grid = {0.5, 1.0, 1.5, 2.0, 2.5};
    double q_tilde = 2.0;
    int trials = 8;
    unsigned long long seed = 1;

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// Space, operator, tree and window built once from a config.
struct Workbench {
    ExperimentConfig config;
    Space space;
    OperatorSpectrum spec;
    DyadicTree tree;
    PartitionOfUnity pou;
    DoublingReport doubling;

    explicit Workbench(const ExperimentConfig& cfg);
};

/// Standard normal via Box-Muller on the raw engine (std::normal_distribution
/// is not bit-stable across library implementations).
double gauss(std::mt19937_64& rng);

/// Random combination of eigenvectors from the middle third of the positive
/// spectrum, Gaussian complex coefficients.
ComplexSignal random_midband_signal(const OperatorSpectrum& spec, std::mt19937_64& rng);

/// Atoms of a decomposition of one random signal; adversarial candidates for
/// operator-norm estimation.
std::vector<ComplexSignal> atom_candidates(const Workbench& wb, unsigned long long seed);

struct OperatorNormEstimate {
    double value = 0.0;       // max ratio over all candidates: a lower bound
    std::string argmax;       // label of the attaining candidate
    int candidates = 0;
};

/// Lower bound on ||F(sqrt(L))||_{ns -> ns}: max of output/input norm over
/// single eigenvectors, `trials` mid-band draws, and the extra candidates.
OperatorNormEstimate estimate_operator_norm(const Workbench& wb, const SpectralFunction& F,
                                            const NormSpec& ns, int trials,
                                            unsigned long long seed,
                                            const std::vector<ComplexSignal>& extra = {});

struct MultiplierCell {
    double alpha = 0.0, p = 0.0, q = 0.0, s = 0.0;
    double empirical_norm = 0.0;  // sampled lower bound on the operator norm
    double hormander_value = 0.0; // |F(0)| + sup_t ||eta delta_t F||_{W^{q~}_s}
    double ratio = 0.0;
    bool hormander_warning = false;
};

/// Evaluates empirical norm vs the smoothness functional on every
/// (alpha, p, q) cell of the config at smoothness s.
std::vector<MultiplierCell> multiplier_experiment(const Workbench& wb, const SpectralFunction& F,
                                                  double s, const std::vector<double>& t_grid);

struct SweepRow {
    double p = 0.0, q = 0.0, s = 0.0, width = 0.0;
    double empirical = 0.0, hormander = 0.0, ratio = 0.0;
};

struct SweepCellSummary {
    double p = 0.0, q = 0.0;
    double threshold = 0.0;     // n(1/(1^p^q) - 1/2) from the fitted dimension
    double stabilization = 0.0; // smallest grid s with ratio band <= 2 as width -> 0
    bool stabilized = false;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::vector<SweepCellSummary> cells;
    bool ordering_ok = false; // stabilization point nonincreasing in p across cells
};

/// Smoothness-threshold sweep on mollified indicators with shrinking
/// mollification width; ratio blow-up below the cell threshold, stability
/// above it.
SweepReport threshold_sweep(const Workbench& wb);

struct RoundtripRow {
    int index = 0;
    double residual = 0.0;
    double coeff_norm = 0.0; // (sum |lambda|^p)^{1/p}
    double f_norm = 0.0;     // ||f|| in F^0_{1,2}
    double ratio = 0.0;
    int atoms = 0;
    double worst_atom_normalization = 1.0;
};

struct RoundtripReport {
    std::vector<RoundtripRow> rows;
    double min_ratio = 0.0, max_ratio = 0.0;
    bool residuals_ok = true; // every residual <= 1e-8
};

/// Batch of decompositions (alpha=0, p=1, q=2, M=2) on random signals.
RoundtripReport decomposition_roundtrip(const Workbench& wb, int batch, unsigned long long seed);

struct InterpRow {
    double t = 0.0;
    double upper = 0.0; // level-split K estimate
    double lower = 0.0; // certified psi_k companion bound
    int split_k = 0;
};

struct InterpReport {
    std::vector<InterpRow> rows; // profile for the first batch signal
    bool bracket_ok = true;      // lower <= upper at every grid t, every signal
    double band_min = 0.0, band_max = 0.0; // interp-norm / target-norm over batch
};

/// Besov pair (0,2)-(1,2) at theta=1/2, q=2 against the target B^{1/2}_{2,2}.
InterpReport interpolation_experiment(const Workbench& wb, int batch, unsigned long long seed);

/// Tabular report: '#'-prefixed comment lines (config echo, achieved
/// constants), column names, numeric rows printed with %.17g.
struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

/// Shared comment block: config echo plus doubling/tree constants.
std::vector<std::string> report_header(const Workbench& wb);

} // namespace fha

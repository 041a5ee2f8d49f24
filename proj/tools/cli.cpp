#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "fha/experiments.hpp"

using namespace fha;

namespace {

int emit(const Table& table, const std::string& out, const std::string& format) {
    std::string text = format == "json" ? table.to_json().dump(2) + "\n" : table.to_csv();
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) {
            std::cerr << "cannot open output file: " << out << "\n";
            return 2;
        }
        f << text;
    }
    return 0;
}

int run_space(const Workbench& wb, const std::string& out, const std::string& format) {
    Table t;
    t.comments = report_header(wb);
    t.columns = {"n_points", "diameter", "total_measure", "doubling_n", "n_certified",
                 "n_tilde", "C_doubling", "C_compare"};
    t.rows = {{static_cast<double>(wb.space.size()), wb.space.diameter(),
               wb.space.total_measure(), wb.doubling.n, wb.doubling.n_certified,
               wb.doubling.n_tilde, wb.doubling.C_doubling, wb.doubling.C_compare}};
    int rc = emit(t, out, format);
    if (rc) return rc;
    bool ok = wb.doubling.n_tilde <= wb.doubling.n + 1e-12 && wb.doubling.C_doubling >= 1.0;
    return ok ? 0 : 1;
}

int run_tree(const Workbench& wb, const std::string& out, const std::string& format) {
    Table t;
    t.comments = report_header(wb);
    t.columns = {"level", "cubes", "total_mu"};
    bool ok = true;
    for (int nu = wb.tree.level_min(); nu <= wb.tree.level_max(); ++nu) {
        double mass = 0.0;
        for (const Cube& q : wb.tree.cubes_at_level(nu)) mass += wb.tree.cube_measure(q);
        if (std::abs(mass - wb.space.total_measure()) > 1e-12 * wb.space.total_measure())
            ok = false;
        t.rows.push_back({static_cast<double>(nu),
                          static_cast<double>(wb.tree.cubes_at_level(nu).size()), mass});
    }
    int rc = format == "json" && out.empty()
                 ? (std::cout << wb.tree.to_json().dump(2) << "\n", 0)
                 : emit(t, out, format);
    if (rc) return rc;
    return ok ? 0 : 1;
}

int run_norms(const Workbench& wb, const std::string& out, const std::string& format) {
    std::mt19937_64 rng(wb.config.seed);
    ComplexSignal f(wb.space.size());
    for (auto& v : f) v = Complex(gauss(rng), gauss(rng));
    Table t;
    t.comments = report_header(wb);
    t.columns = {"alpha", "p", "q", "besov", "triebel_lizorkin"};
    bool ok = true;
    for (double alpha : wb.config.alpha_list)
        for (double p : wb.config.p_list)
            for (double q : wb.config.q_list) {
                double b = besov_norm(wb.spec, wb.pou,
                                      f, {alpha, p, q, NormKind::besov}).value;
                double tl = triebel_lizorkin_norm(
                                wb.spec, wb.pou, f,
                                {alpha, p, q, NormKind::triebel_lizorkin}).value;
                t.rows.push_back({alpha, p, q, b, tl});
                // sandwich: B_{p,q^p} >= F_{p,q} >= B_{p,qvp}
                double blow = besov_norm(wb.spec, wb.pou, f,
                                         {alpha, p, std::min(p, q), NormKind::besov}).value;
                double bhigh = besov_norm(wb.spec, wb.pou, f,
                                          {alpha, p, std::max(p, q), NormKind::besov}).value;
                if (!(tl <= blow * (1.0 + 1e-9) && bhigh <= tl * (1.0 + 1e-9))) ok = false;
                if (p == q && std::abs(b - tl) > 1e-10 * std::max(b, 1.0)) ok = false;
            }
    int rc = emit(t, out, format);
    return rc ? rc : (ok ? 0 : 1);
}

int run_decompose(const Workbench& wb, const std::string& out, const std::string& format) {
    RoundtripReport rep = decomposition_roundtrip(wb, 16, wb.config.seed);
    Table t;
    t.comments = report_header(wb);
    t.comments.push_back("coefficient ratio band [" + std::to_string(rep.min_ratio) + "," +
                         std::to_string(rep.max_ratio) + "]");
    t.columns = {"index", "residual", "coeff_norm", "f_norm", "ratio", "atoms",
                 "worst_atom_normalization"};
    for (const RoundtripRow& r : rep.rows)
        t.rows.push_back({static_cast<double>(r.index), r.residual, r.coeff_norm, r.f_norm,
                          r.ratio, static_cast<double>(r.atoms), r.worst_atom_normalization});
    int rc = emit(t, out, format);
    return rc ? rc : (rep.residuals_ok && std::isfinite(rep.max_ratio) ? 0 : 1);
}

int run_interp(const Workbench& wb, const std::string& out, const std::string& format) {
    InterpReport rep = interpolation_experiment(wb, 32, wb.config.seed);
    Table t;
    t.comments = report_header(wb);
    t.comments.push_back("interp/target norm band [" + std::to_string(rep.band_min) + "," +
                         std::to_string(rep.band_max) + "]");
    t.columns = {"t", "K_upper", "K_lower", "split_k"};
    for (const InterpRow& r : rep.rows)
        t.rows.push_back({r.t, r.upper, r.lower, static_cast<double>(r.split_k)});
    int rc = emit(t, out, format);
    bool ok = rep.bracket_ok && rep.band_min > 0.0 && std::isfinite(rep.band_max);
    return rc ? rc : (ok ? 0 : 1);
}

int run_multiplier(const Workbench& wb, const std::string& out, const std::string& format) {
    const std::vector<double> betas = {1.0, 2.0, 4.0, 8.0, 16.0};
    // trend-comparison smoothness: above 1/q~ and the n(1/(1^p^q)-1/2)
    // threshold of every default cell with p >= 1; the smoothness functional
    // grows like (1+beta)^s, so larger s widens the cross-beta ratio band
    double s = wb.config.s_grid.size() == 1 ? wb.config.s_grid[0] : 1.0;
    std::vector<double> t_grid = default_t_grid(0.1, 10.0);
    Table t;
    t.comments = report_header(wb);
    t.columns = {"beta", "alpha", "p", "q", "s", "empirical_norm", "hormander_value", "ratio"};
    std::map<std::pair<double, std::pair<double, double>>, std::pair<double, double>> band;
    for (double beta : betas) {
        std::vector<MultiplierCell> cells =
            multiplier_experiment(wb, power_imag(beta), s, t_grid);
        for (const MultiplierCell& c : cells) {
            t.rows.push_back({beta, c.alpha, c.p, c.q, c.s, c.empirical_norm,
                              c.hormander_value, c.ratio});
            auto& b = band.try_emplace({c.alpha, {c.p, c.q}},
                                       std::make_pair(c.ratio, c.ratio)).first->second;
            b.first = std::min(b.first, c.ratio);
            b.second = std::max(b.second, c.ratio);
        }
    }
    bool ok = true;
    for (const auto& [key, b] : band)
        if (!(b.first > 0.0) || b.second / b.first > 4.0) ok = false;
    t.comments.push_back(std::string("per-cell ratio band across beta within factor 4: ") +
                         (ok ? "yes" : "no"));
    int rc = emit(t, out, format);
    return rc ? rc : (ok ? 0 : 1);
}

int run_sweep(const Workbench& wb, const std::string& out, const std::string& format) {
    SweepReport rep = threshold_sweep(wb);
    Table t;
    t.comments = report_header(wb);
    for (const SweepCellSummary& c : rep.cells)
        t.comments.push_back("cell p=" + std::to_string(c.p) + " q=" + std::to_string(c.q) +
                             " threshold=" + std::to_string(c.threshold) +
                             " stabilization_s=" + std::to_string(c.stabilization) +
                             (c.stabilized ? "" : " (beyond grid)"));
    t.comments.push_back(std::string("stabilization ordering consistent with p: ") +
                         (rep.ordering_ok ? "yes" : "no"));
    t.columns = {"p", "q", "s", "width", "empirical_norm", "hormander_value", "ratio"};
    for (const SweepRow& r : rep.rows)
        t.rows.push_back({r.p, r.q, r.s, r.width, r.empirical, r.hormander, r.ratio});
    int rc = emit(t, out, format);
    return rc ? rc : (rep.ordering_ok ? 0 : 1);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"experiments on operator-adapted smoothness spaces over finite doubling "
                 "metric measure spaces"};
    app.require_subcommand(1);

    std::string config_path, out, format = "csv";
    unsigned long long seed_override = 0;
    bool has_seed = false;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out, "output path (default stdout)");
    app.add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    auto* seed_opt = app.add_option("--seed", seed_override, "override the config seed");

    for (const char* verb : {"space", "tree", "norms", "decompose", "interp", "multiplier",
                             "sweep"})
        app.add_subcommand(verb)->fallthrough();

    CLI11_PARSE(app, argc, argv);
    has_seed = seed_opt->count() > 0;

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) {
                std::cerr << "cannot read config: " << config_path << "\n";
                return 2;
            }
            nlohmann::json j;
            f >> j;
            cfg = ExperimentConfig::from_json(j);
        }
        if (has_seed) cfg.seed = seed_override;

        Workbench wb(cfg);
        const std::string verb = app.get_subcommands().front()->get_name();
        if (verb == "space") return run_space(wb, out, format);
        if (verb == "tree") return run_tree(wb, out, format);
        if (verb == "norms") return run_norms(wb, out, format);
        if (verb == "decompose") return run_decompose(wb, out, format);
        if (verb == "interp") return run_interp(wb, out, format);
        if (verb == "multiplier") return run_multiplier(wb, out, format);
        if (verb == "sweep") return run_sweep(wb, out, format);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

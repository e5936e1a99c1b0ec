// impedance-bands: band structure, surface states and Bloch wave functions of
// one-dimensional periodic and semi-infinite lattices, computed from the
// quantum-wave-impedance dispersion relations and cross-checked against a
// transfer-matrix route and a classical plane-wave matching determinant.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure or oracle
// mismatch, 4 disagreement between analysis methods.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qwi/band_solver.hpp"
#include "qwi/bloch_matrix.hpp"
#include "qwi/config.hpp"
#include "qwi/dispersion.hpp"
#include "qwi/errors.hpp"
#include "qwi/surface_states.hpp"
#include "qwi/table_io.hpp"
#include "qwi/transfer_matrix.hpp"
#include "qwi/units.hpp"
#include "qwi/wavefunction.hpp"

namespace {

using namespace qwi;
using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitDisagreement = 4;

// The two independent routes to F(xi) = cos(kL).  The hidden sign-error
// switch corrupts only the closed-form route and only the sin-carrying term;
// it exists as a negative control for the disagreement exit path.
DispersionFn dispersion_of(const ModelConfig& cfg, const std::string& method,
                           bool inject_sign_error) {
    if (method == "transfer") {
        return [cell = cfg.cell(), L = cfg.L](double xi) {
            return bloch_rhs_from_trace(
                cell_transfer_matrix(cell, energy_of_xi(xi, L)));
        };
    }
    if (method != "impedance")
        throw ConfigError("unknown method \"" + method +
                          "\" (expected impedance or transfer)");
    switch (cfg.kind) {
    case ModelConfig::Kind::Dirac:
        return [p = cfg.p, inject_sign_error](double xi) {
            return dirac_rhs(xi, inject_sign_error ? -p : p);
        };
    case ModelConfig::Kind::DeltaDeltaPrime:
        return [p = cfg.p, bt = cfg.beta_tilde, inject_sign_error](double xi) {
            return delta_delta_prime_rhs(xi, inject_sign_error ? -p : p, bt);
        };
    case ModelConfig::Kind::KronigPenney:
        return [cfg, inject_sign_error](double xi) {
            const double E = energy_of_xi(xi, cfg.L);
            const double F = kronig_penney_rhs(E, cfg.a, cfg.b, cfg.U_b);
            if (!inject_sign_error) return F;
            // Flip the sign of the sin-carrying term: F -> 2 C - F with
            // C the cos * ch part.
            const double k1 = std::sqrt(2.0 * E);
            const double kap_sq = 2.0 * (cfg.U_b - E);
            const double x = kap_sq * cfg.b * cfg.b;
            double ch;
            if (std::abs(x) < 1e-6)
                ch = 1.0 + x * (0.5 + x / 24.0);
            else if (x > 0.0)
                ch = std::cosh(std::sqrt(x));
            else
                ch = std::cos(std::sqrt(-x));
            return 2.0 * std::cos(k1 * cfg.a) * ch - F;
        };
    }
    throw ConfigError("unreachable model kind");
}

struct OutputSink {
    std::string path; // empty: payload to stdout, summary to stderr
    void deliver(const std::string& payload) const {
        if (path.empty())
            std::cout << payload;
        else
            write_text_atomic(path, payload);
    }
    std::ostream& note() const { return path.empty() ? std::cerr : std::cout; }
};

std::string diagram_csv(const BandDiagram& d, double L) {
    CsvTable t({"n", "xi_lo", "xi_hi", "E_lo", "E_hi"});
    for (const auto& b : d.bands)
        t.add_row({std::to_string(b.ordinal), format_g17(b.xi_lo),
                   format_g17(b.xi_hi), format_g17(energy_of_xi(b.xi_lo, L)),
                   format_g17(energy_of_xi(b.xi_hi, L))});
    return t.str();
}

json diagram_json(const BandDiagram& d, double L) {
    json out;
    out["xi_max"] = d.xi_max;
    out["bands"] = json::array();
    for (const auto& b : d.bands)
        out["bands"].push_back({{"n", b.ordinal},
                                {"xi_lo", b.xi_lo},
                                {"xi_hi", b.xi_hi},
                                {"E_lo", energy_of_xi(b.xi_lo, L)},
                                {"E_hi", energy_of_xi(b.xi_hi, L)}});
    out["gaps"] = json::array();
    for (const auto& g : d.gaps)
        out["gaps"].push_back({{"n", g.n},
                               {"sign", g.sign},
                               {"xi_lo", g.xi_lo},
                               {"xi_hi", g.xi_hi},
                               {"E_lo", energy_of_xi(g.xi_lo, L)},
                               {"E_hi", energy_of_xi(g.xi_hi, L)}});
    out["touch_points"] = json::array();
    for (const auto& tp : d.touches)
        out["touch_points"].push_back(
            {{"xi", tp.xi}, {"sign", tp.sign}, {"E", energy_of_xi(tp.xi, L)}});
    return out;
}

void print_diagram_summary(std::ostream& os, const BandDiagram& d) {
    os << "bands: " << d.bands.size() << "  gaps: " << d.gaps.size()
       << "  touch points: " << d.touches.size() << "\n";
    for (const auto& g : d.gaps)
        os << "  gap n=" << g.n << ": xi in [" << format_g17(g.xi_lo) << ", "
           << format_g17(g.xi_hi) << "]\n";
}

int cmd_bands(const ModelConfig& cfg, const std::string& method, double xi_max,
              int grid_per_pi, const std::string& format,
              const OutputSink& sink) {
    const DispersionFn F = dispersion_of(cfg, method, false);
    const BandDiagram d = build_diagram(F, xi_max, grid_per_pi);
    if (format == "json")
        sink.deliver(diagram_json(d, cfg.L).dump(2) + "\n");
    else
        sink.deliver(diagram_csv(d, cfg.L));
    print_diagram_summary(sink.note(), d);
    return 0;
}

int cmd_compare_methods(const ModelConfig& cfg, int samples, double e_max,
                        bool inject_sign_error, const std::string& format,
                        const OutputSink& sink) {
    const DispersionFn F_imp = dispersion_of(cfg, "impedance", inject_sign_error);
    const DispersionFn F_tra = dispersion_of(cfg, "transfer", false);
    const bool kp = (cfg.kind == ModelConfig::Kind::KronigPenney);

    CsvTable t({"E", "xi", "F_impedance", "F_transfer", "abs_delta",
                "det_residual"});
    json rows = json::array();
    double worst_scaled = 0.0, worst_det = 0.0;
    int class_mismatches = 0;
    for (int i = 1; i <= samples; ++i) {
        const double E = e_max * i / samples;
        const double xi = xi_of_energy(E, cfg.L);
        const double fi = F_imp(xi);
        const double ft = F_tra(xi);
        const double delta = std::abs(fi - ft);
        worst_scaled = std::max(worst_scaled,
                                delta / std::max(1.0, std::abs(fi)));
        // Classification must agree away from the (ambiguous) band edges.
        if (std::abs(std::abs(fi) - 1.0) > 1e-9 &&
            std::abs(std::abs(ft) - 1.0) > 1e-9 &&
            (classify(fi) == ZoneKind::Band) != (classify(ft) == ZoneKind::Band))
            ++class_mismatches;
        double det_res = std::numeric_limits<double>::quiet_NaN();
        if (kp && std::abs(fi) <= 1.0) {
            const cdouble k{std::acos(fi) / cfg.L, 0.0};
            det_res = scaled_residual(
                classical_match_matrix(E, k, cfg.a, cfg.b, cfg.U_b));
            worst_det = std::max(worst_det, det_res);
        }
        t.add_row({format_g17(E), format_g17(xi), format_g17(fi), format_g17(ft),
                   format_g17(delta),
                   std::isnan(det_res) ? "nan" : format_g17(det_res)});
        rows.push_back({{"E", E},
                        {"xi", xi},
                        {"F_impedance", fi},
                        {"F_transfer", ft},
                        {"abs_delta", delta}});
    }
    if (format == "json") {
        json out{{"rows", rows},
                 {"max_scaled_delta", worst_scaled},
                 {"max_det_residual", worst_det},
                 {"classification_mismatches", class_mismatches}};
        sink.deliver(out.dump(2) + "\n");
    } else {
        sink.deliver(t.str());
    }
    sink.note() << "max scaled |delta F|: " << format_g17(worst_scaled)
                << "  classification mismatches: " << class_mismatches;
    if (kp) sink.note() << "  max det residual: " << format_g17(worst_det);
    sink.note() << "\n";

    if (worst_scaled > 1e-9 || class_mismatches > 0 || (kp && worst_det > 1e-7)) {
        sink.note() << "method disagreement beyond tolerance\n";
        return kExitDisagreement;
    }
    return 0;
}

struct GapWindowE {
    int n = 0;
    double E_lo = 0.0, E_hi = 0.0;
};

std::vector<GapWindowE> gap_windows_in_energy(double s, double p, double L) {
    const DispersionFn F = [p](double xi) { return dirac_rhs(xi, p); };
    const BandDiagram d = build_diagram(F, s, 4096);
    std::vector<GapWindowE> out;
    for (const auto& g : d.gaps) {
        const double lo = g.xi_lo + 1e-9;
        const double hi = std::min(g.xi_hi, s) - 1e-9;
        if (hi > lo)
            out.push_back(GapWindowE{g.n, energy_of_xi(lo, L), energy_of_xi(hi, L)});
    }
    return out;
}

int cmd_surface_states(const ModelConfig& cfg, int oracle_N,
                       const std::string& sweep, const std::string& form_name,
                       const std::string& format, const OutputSink& sink) {
    const SemiInfiniteLattice lat = cfg.semi_infinite();
    const double s = lat.s_parameter();
    const double p_alpha = cfg.p;
    const DeformedEdgeForm form = (form_name == "step-offset")
                                      ? DeformedEdgeForm::StepOffsetOnePeriod
                                      : DeformedEdgeForm::EtaAtStep;

    if (!sweep.empty()) {
        double lo = 0.0, hi = 0.0, step = 0.0;
        char c1 = 0, c2 = 0;
        std::istringstream ss(sweep);
        if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
            !(step > 0.0) || hi < lo)
            throw ConfigError("--sweep-p-eta expects lo:hi:step with step > 0");
        CsvTable t({"p_eta", "n", "xi", "lambdaL", "E"});
        json rows = json::array();
        const int n_steps = static_cast<int>(std::floor((hi - lo) / step + 0.5));
        for (int i = 0; i <= n_steps; ++i) {
            const double p_eta = lo + i * step;
            const auto states =
                solve_deformed_edge(s, p_alpha, p_eta, cfg.L, form);
            for (const auto& st : states) {
                t.add_row({format_g17(p_eta), std::to_string(st.n),
                           format_g17(st.xi), format_g17(st.lambdaL),
                           format_g17(st.E)});
                rows.push_back({{"p_eta", p_eta},
                                {"n", st.n},
                                {"xi", st.xi},
                                {"lambdaL", st.lambdaL},
                                {"E", st.E}});
            }
        }
        sink.deliver(format == "json" ? json{{"sweep", rows}}.dump(2) + "\n"
                                      : t.str());
        return 0;
    }

    const double p_eta = cfg.eta * cfg.L;
    const std::vector<SurfaceState> states =
        (p_eta == 0.0 && form == DeformedEdgeForm::EtaAtStep)
            ? solve_clean_edge(s, p_alpha, cfg.L)
            : solve_deformed_edge(s, p_alpha, p_eta, cfg.L, form);

    std::vector<double> oracle_es;
    bool oracle_fail = false;
    std::string oracle_msg;
    if (oracle_N > 0) {
        for (const auto& win : gap_windows_in_energy(s, p_alpha, cfg.L)) {
            const auto found =
                finite_lattice_oracle(lat, win.E_lo, win.E_hi, oracle_N);
            oracle_es.insert(oracle_es.end(), found.begin(), found.end());
            const long n_here =
                std::count_if(states.begin(), states.end(), [&](const SurfaceState& st) {
                    return st.E > win.E_lo && st.E < win.E_hi;
                });
            if (n_here != static_cast<long>(found.size())) {
                oracle_fail = true;
                oracle_msg = "state count differs from the finite-lattice "
                             "oracle in gap n=" + std::to_string(win.n);
            }
        }
        std::sort(oracle_es.begin(), oracle_es.end());
    }

    CsvTable t(oracle_N > 0
                   ? std::vector<std::string>{"n", "xi", "lambdaL", "E",
                                              "residual_1", "residual_2",
                                              "E_oracle", "rel_delta"}
                   : std::vector<std::string>{"n", "xi", "lambdaL", "E",
                                              "residual_1", "residual_2"});
    json rows = json::array();
    for (const auto& st : states) {
        json r{{"n", st.n},          {"xi", st.xi},
               {"lambdaL", st.lambdaL}, {"E", st.E},
               {"residual_1", st.residual_1}, {"residual_2", st.residual_2}};
        std::vector<std::string> cells{
            std::to_string(st.n),      format_g17(st.xi),
            format_g17(st.lambdaL),    format_g17(st.E),
            format_g17(st.residual_1), format_g17(st.residual_2)};
        if (oracle_N > 0) {
            double best = std::numeric_limits<double>::quiet_NaN();
            double rel = std::numeric_limits<double>::infinity();
            for (double Eo : oracle_es) {
                const double r_ = std::abs(Eo - st.E) / std::max(1e-300, st.E);
                if (r_ < rel) {
                    rel = r_;
                    best = Eo;
                }
            }
            if (!(rel <= 1e-5)) {
                oracle_fail = true;
                oracle_msg = "state energy differs from the oracle by relative " +
                             format_g17(rel);
            }
            cells.push_back(format_g17(best));
            cells.push_back(format_g17(rel));
            r["E_oracle"] = best;
            r["rel_delta"] = rel;
        }
        t.add_row(cells);
        rows.push_back(r);
    }
    sink.deliver(format == "json" ? json{{"surface_states", rows}}.dump(2) + "\n"
                                  : t.str());
    sink.note() << states.size() << " surface state(s) for s=" << format_g17(s)
                << " p_alpha=" << format_g17(p_alpha)
                << " p_eta=" << format_g17(p_eta) << "\n";
    if (oracle_fail) {
        sink.note() << "oracle mismatch: " << oracle_msg << "\n";
        return kExitNumerical;
    }
    return 0;
}

// File-name friendly number: 10 stays "10", 0.1 stays "0.1".
std::string trim_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

int cmd_figure1(const ModelConfig& cfg, std::optional<double> p_override,
                double beta_max, double beta_step, int grid_per_pi,
                const std::string& out_stem, const std::string& format,
                const OutputSink&) {
    if (cfg.kind != ModelConfig::Kind::DeltaDeltaPrime)
        throw ConfigError("figure1 requires model \"delta-delta-prime\"");
    std::vector<double> ps = {10.0, 3.0, 0.1};
    if (p_override) ps = {*p_override};
    const int half = static_cast<int>(std::floor(beta_max / beta_step + 0.5));
    const double xi_max = 11.0; // past the top of gap n=2 for every case here

    for (double p : ps) {
        CsvTable t({"beta_tilde", "gap_index", "xi_bottom", "xi_top"});
        json rows = json::array();
        for (int i = -half; i <= half; ++i) {
            const double bt = i * beta_step; // exact 0 at i = 0
            const DispersionFn F = [p, bt](double xi) {
                return delta_delta_prime_rhs(xi, p, bt);
            };
            const BandDiagram d = build_diagram(F, xi_max, grid_per_pi);
            for (int want : {1, 2}) {
                const GapZone* found = nullptr;
                for (const auto& g : d.gaps)
                    if (g.n == want) found = &g;
                if (!found)
                    throw NumericalError("figure1: gap n=" + std::to_string(want) +
                                         " not found at p=" + format_g17(p) +
                                         " beta_tilde=" + format_g17(bt));
                t.add_row({format_g17(bt), std::to_string(want),
                           format_g17(found->xi_lo), format_g17(found->xi_hi)});
                rows.push_back({{"beta_tilde", bt},
                                {"gap_index", want},
                                {"xi_bottom", found->xi_lo},
                                {"xi_top", found->xi_hi}});
            }
        }
        const std::string ext = (format == "json") ? ".json" : ".csv";
        const std::string path = out_stem + "_p" + trim_number(p) + ext;
        write_text_atomic(path, format == "json"
                                    ? json{{"p", p}, {"rows", rows}}.dump(2) + "\n"
                                    : t.str());
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}

int cmd_wavefunction(const ModelConfig& cfg, double xi, int cells,
                     int samples_per_cell, const std::string& format,
                     const OutputSink& sink) {
    if (cfg.kind != ModelConfig::Kind::Dirac)
        throw ConfigError("wavefunction requires model \"dirac\" (free cell "
                          "interior with amplitude-continuous nodes)");
    if (!(xi > 0.0)) throw ConfigError("--xi must be positive");
    const double F = dirac_rhs(xi, cfg.p);
    const BlochWaveNumber kw = k_of_F(F);
    const cdouble kL = (kw.kind == ZoneKind::Gap)
                           ? cdouble{kw.parity * M_PI, kw.lambdaL}
                           : cdouble{kw.kL, 0.0};
    const double E = energy_of_xi(xi, cfg.L);
    const BlochWave w = make_bloch_wave(E, kL, cfg.L);

    CsvTable t({"x", "re_psi", "im_psi", "psi_sq", "re_Z", "im_Z"});
    json rows = json::array();
    const int n_total = cells * samples_per_cell;
    for (int i = 0; i <= n_total; ++i) {
        const double x = cells * cfg.L * i / static_cast<double>(n_total);
        const cdouble psi = psi_at(w, x);
        std::string reZ = "nan", imZ = "nan";
        json row{{"x", x},
                 {"re_psi", psi.real()},
                 {"im_psi", psi.imag()},
                 {"psi_sq", std::norm(psi)}};
        try {
            const cdouble Z = impedance_profile(w, x);
            reZ = format_g17(Z.real());
            imZ = format_g17(Z.imag());
            row["re_Z"] = Z.real();
            row["im_Z"] = Z.imag();
        } catch (const PoleError&) {
            // node of psi: Z column stays nan
        }
        t.add_row({format_g17(x), format_g17(psi.real()), format_g17(psi.imag()),
                   format_g17(std::norm(psi)), reZ, imZ});
        rows.push_back(row);
    }
    if (format == "json") {
        json out{{"xi", xi},
                 {"E", E},
                 {"kL_re", kL.real()},
                 {"kL_im", kL.imag()},
                 {"r0_re", w.r0.real()},
                 {"r0_im", w.r0.imag()},
                 {"rows", rows}};
        sink.deliver(out.dump(2) + "\n");
    } else {
        sink.deliver(t.str());
    }
    sink.note() << "xi=" << format_g17(xi) << "  E=" << format_g17(E)
                << "  kL=" << format_g17(kL.real()) << "+"
                << format_g17(kL.imag()) << "i  |r0|="
                << format_g17(std::abs(w.r0)) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Band structure of one-dimensional periodic and semi-infinite "
                 "lattices via quantum wave impedance"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "csv", method = "impedance";

    auto add_common = [&](CLI::App* sub, bool need_config = true) {
        auto* opt = sub->add_option("--config", config_path,
                                    "JSON lattice description");
        if (need_config) opt->required();
        sub->add_option("--out", out_path, "output file (atomic write)");
        sub->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* bands = app.add_subcommand("bands", "band/gap diagram of the lattice");
    double xi_max = 10.0;
    int grid_per_pi = 4096;
    add_common(bands);
    bands->add_option("--method", method, "impedance or transfer")
        ->check(CLI::IsMember({"impedance", "transfer"}));
    bands->add_option("--xi-max", xi_max, "scan limit in xi = sqrt(2E) L");
    bands->add_option("--grid-per-pi", grid_per_pi, "scan points per pi");

    auto* compare = app.add_subcommand(
        "compare-methods", "impedance vs transfer vs classical determinant");
    int samples = 2048;
    double e_max = 50.0;
    bool inject_sign_error = false;
    add_common(compare);
    compare->add_option("--samples", samples, "energy grid points");
    compare->add_option("--e-max", e_max, "top of the energy grid");
    compare->add_flag("--inject-sign-error", inject_sign_error)->group("");

    auto* surface = app.add_subcommand("surface-states",
                                       "edge-localised states of the "
                                       "semi-infinite crystal");
    int oracle_N = 0;
    std::string sweep, form_name = "eta-at-step";
    add_common(surface);
    surface->add_option("--oracle", oracle_N,
                        "cross-check against a finite lattice of N cells");
    surface->add_option("--sweep-p-eta", sweep,
                        "scan the edge deformation, format lo:hi:step");
    surface->add_option("--form", form_name,
                        "deformed-edge geometry: eta-at-step or step-offset")
        ->check(CLI::IsMember({"eta-at-step", "step-offset"}));

    auto* figure1 = app.add_subcommand(
        "figure1", "gap edges of the delta-delta' comb vs beta_tilde");
    std::optional<double> p_override;
    double beta_max = 0.9, beta_step = 0.02;
    std::string stem = "fig1";
    int fig_grid = 4096;
    add_common(figure1);
    figure1->add_option("--p", p_override,
                        "single p instead of the default {10, 3, 0.1}");
    figure1->add_option("--beta-max", beta_max, "half-width of the beta grid");
    figure1->add_option("--beta-step", beta_step, "beta grid step");
    figure1->add_option("--grid-per-pi", fig_grid, "scan points per pi");
    figure1->add_option("--out-stem", stem, "output file stem");

    auto* wave = app.add_subcommand("wavefunction",
                                    "Bloch wave and impedance profile");
    double wf_xi = 0.0;
    int wf_cells = 3, wf_samples = 256;
    add_common(wave);
    wave->add_option("--xi", wf_xi, "xi = sqrt(2E) L of the state")->required();
    wave->add_option("--cells", wf_cells, "periods to sample");
    wave->add_option("--samples-per-cell", wf_samples, "samples per period");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        const OutputSink sink{out_path};
        if (bands->parsed()) {
            return cmd_bands(load_model_config(config_path), method, xi_max,
                             grid_per_pi, format, sink);
        }
        if (compare->parsed()) {
            return cmd_compare_methods(load_model_config(config_path), samples,
                                       e_max, inject_sign_error, format, sink);
        }
        if (surface->parsed()) {
            return cmd_surface_states(load_model_config(config_path), oracle_N,
                                      sweep, form_name, format, sink);
        }
        if (figure1->parsed()) {
            const std::string out_stem =
                !out_path.empty() ? out_path : stem;
            return cmd_figure1(load_model_config(config_path), p_override,
                               beta_max, beta_step, fig_grid, out_stem, format,
                               sink);
        }
        if (wave->parsed()) {
            return cmd_wavefunction(load_model_config(config_path), wf_xi,
                                    wf_cells, wf_samples, format, sink);
        }
        std::cerr << "no command\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

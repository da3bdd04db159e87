// Command-line driver: coefficients, spectrum, branch, lyapunov, verify.
// Exit codes: 0 success, 1 criterion failure, 2 usage/config error,
// 3 solver failure.
#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <numbers>

#include "gpstrip/acceptance.hpp"
#include "gpstrip/analytic.hpp"
#include "gpstrip/continuation.hpp"
#include "gpstrip/operators.hpp"
#include "gpstrip/reduction.hpp"
#include "gpstrip/report.hpp"

namespace fs = std::filesystem;
using namespace gpstrip;
using report::Config;
using report::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    int nx = 0;
    double half_length = 0.0;
    int modes = 0;
    double tol = 0.0;
    int k = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config_path, "config file (json)");
    cmd->add_option("--out", a.out_dir, "output directory");
    cmd->add_option("--nx", a.nx, "override: x grid points (odd)");
    cmd->add_option("--half-length", a.half_length, "override: half length L");
    cmd->add_option("--modes", a.modes, "override: number of cosine modes");
    cmd->add_option("--tol", a.tol, "override: solver tolerance");
    cmd->add_option("--k", a.k, "override: transverse mode index k");
}

Config resolve(const CommonArgs& a) {
    Config c;
    if (!a.config_path.empty()) c = report::load_config(a.config_path);
    if (a.nx) c.nx = a.nx;
    if (a.half_length != 0.0) c.half_length = a.half_length;
    if (a.modes) c.n_modes = a.modes;
    if (a.tol != 0.0) c.tol = a.tol;
    if (a.k) c.k = a.k;
    return c;
}

int cmd_coefficients(const CommonArgs& args) {
    Config cfg = resolve(args);
    const fs::path out(args.out_dir);
    report::NdjsonWriter nd(out / "coefficients.ndjson", "gpstrip-coefficients/1", cfg);

    auto emit = [&](int nx, const analytic::Coefficients& co) {
        nd.write(json{{"record", "coefficients"},
                      {"nx", nx},
                      {"omega", co.omega},
                      {"lambda", co.lambda_coeff},
                      {"energy_coeff", co.energy_coeff},
                      {"int_chi0_sq", co.int_chi0_sq},
                      {"int_chi0_4", co.int_chi0_4},
                      {"cross_term", co.cross_term},
                      {"soliton_energy_density", co.soliton_energy_density}});
    };
    const auto c1 = analytic::compute_coefficients(cfg.nx, cfg.half_length);
    const auto c2 = analytic::compute_coefficients(2 * cfg.nx - 1, cfg.half_length);
    emit(cfg.nx, c1);
    emit(2 * cfg.nx - 1, c2);
    nd.write(json{{"record", "richardson"},
                  {"omega", c2.omega + (c2.omega - c1.omega) / 3.0},
                  {"lambda", c2.lambda_coeff + (c2.lambda_coeff - c1.lambda_coeff) / 3.0},
                  {"energy_coeff",
                   c2.energy_coeff + (c2.energy_coeff - c1.energy_coeff) / 3.0}});
    const double s2 = std::numbers::sqrt2;
    nd.write(json{{"record", "bounds"},
                  {"int_chi0_sq_vs_2sqrt2", c1.int_chi0_sq - 2.0 * s2},
                  {"omega_lower_bound_ok", c1.omega >= 21.0 / 4.0 * c1.int_chi0_4},
                  {"cross_term_range_ok",
                   -c1.cross_term >= 0.0 && -c1.cross_term <= c1.int_chi0_4},
                  {"energy_coeff_bound_ok",
                   c1.energy_coeff >=
                       9.0 * c1.lambda_coeff * c1.lambda_coeff / (14.0 * s2)}});
    std::cout << "omega = " << c1.omega << ", Lambda = " << c1.lambda_coeff
              << ", energy coefficient = " << c1.energy_coeff << "\n"
              << "report: " << (out / "coefficients.ndjson") << "\n";
    return 0;
}

int cmd_spectrum(const CommonArgs& args) {
    Config cfg = resolve(args);
    const fs::path out(args.out_dir);
    const int k = cfg.k;
    const double dk = analytic::critical_width(k);
    double dmin = cfg.spec_d_min > 0 ? cfg.spec_d_min : dk - 0.5;
    double dmax = cfg.spec_d_max > 0 ? cfg.spec_d_max : dk + 0.5;
    if (dmax <= dmin) throw std::invalid_argument("spectrum: empty d range");

    StripDomain dom = cfg.domain(dk);
    rvector s0(dom.nx);
    for (int i = 0; i < dom.nx; ++i) s0[i] = analytic::soliton(dom.x(i));

    const int n = (int)std::floor((dmax - dmin) / cfg.spec_step) + 1;
    struct Row {
        double d, mu;
        int n_neg;
    };
    std::vector<Row> rows(n);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        const double d = dmin + i * cfg.spec_step;
        StripDomain dd = dom.with_width(d);
        rows[i].d = d;
        rows[i].mu = tk_lowest_eigenvalue(dd, s0, k);
        rows[i].n_neg = morse_index_about_profile(dd, s0);
    }

    report::NdjsonWriter nd(out / "spectrum.ndjson", "gpstrip-spectrum/1", cfg);
    report::CsvWriter csv(out / "spectrum.csv",
                          {"d", "tk_lowest_eigenvalue", "n_negative", "crossing"},
                          "gpstrip-spectrum/1", &cfg);
    report::Series mu_series{"lowest T_k eigenvalue", "#1f77b4", {}, true};
    report::Series nneg_series{"n_negative", "#d62728", {}, true};
    for (int i = 0; i < n; ++i) {
        const bool crossing = i > 0 && rows[i - 1].mu > 0 && rows[i].mu <= 0;
        nd.write(json{{"record", "scan"},
                      {"d", rows[i].d},
                      {"tk_lowest_eigenvalue", rows[i].mu},
                      {"n_negative", rows[i].n_neg},
                      {"crossing", crossing}});
        csv.write_row({report::CsvWriter::num(rows[i].d),
                       report::CsvWriter::num(rows[i].mu),
                       std::to_string(rows[i].n_neg), crossing ? "1" : "0"});
        mu_series.points.emplace_back(rows[i].d, rows[i].mu);
        nneg_series.points.emplace_back(rows[i].d, rows[i].n_neg);
    }
    report::write_svg_plot(out / "spectrum.svg", "sector operator spectrum vs width",
                           "d", "lowest eigenvalue / count",
                           {mu_series, nneg_series}, &cfg);
    std::cout << "spectrum scan written to " << (out / "spectrum.ndjson") << "\n";
    return 0;
}

int cmd_branch(const CommonArgs& args) {
    Config cfg = resolve(args);
    const fs::path out(args.out_dir);
    const int k = cfg.k;
    StripDomain dom = cfg.domain(analytic::critical_width(k));
    continuation::BranchOptions bo;
    bo.tol = cfg.tol;
    continuation::Branch br = continuation::continue_branch(
        dom, k, cfg.branch_start, cfg.branch_end, cfg.branch_step, bo);

    report::NdjsonWriter nd(out / "branch.ndjson", "gpstrip-branch/1", cfg);
    report::CsvWriter csv(out / "branch.csv",
                          {"d", "amplitude", "energy", "residual", "n_vortices",
                           "vortex_list"},
                          "gpstrip-branch/1", &cfg);
    report::Series amp{"amplitude", "#1f77b4", {}, true};
    report::Series amp2{"amplitude^2", "#2ca02c", {}, true};
    report::Series deficit{"energy deficit", "#d62728", {}, true};
    const double dk = analytic::critical_width(k);
    for (const auto& p : br.points) {
        json vlist = json::array();
        std::ostringstream vtxt;
        for (const auto& v : p.vortex_set.entries) {
            vlist.push_back(json{{"x", v.x}, {"y", v.y}, {"degree", v.degree}});
            vtxt << "(" << v.x << ";" << v.y << ";" << v.degree << ") ";
        }
        nd.write(json{{"record", "point"},
                      {"d", p.width},
                      {"amplitude", p.amplitude},
                      {"energy", p.energy},
                      {"residual", p.residual_norm},
                      {"vortices", vlist}});
        csv.write_row({report::CsvWriter::num(p.width),
                       report::CsvWriter::num(p.amplitude),
                       report::CsvWriter::num(p.energy),
                       report::CsvWriter::num(p.residual_norm),
                       std::to_string(p.vortex_set.entries.size()), vtxt.str()});
        amp.points.emplace_back(p.width, p.amplitude);
        amp2.points.emplace_back(p.width - dk, p.amplitude * p.amplitude);
        const double es = continuation::energy(soliton_field(p.field.domain()));
        deficit.points.emplace_back(p.width, es - p.energy);
    }
    if (br.truncated)
        nd.write(json{{"record", "branch_lost"},
                      {"last_good_width", br.last_good_width}});
    // slope of amplitude^2 vs (d - d_k)
    if (amp2.points.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : amp2.points) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = (double)amp2.points.size();
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        nd.write(json{{"record", "amplitude_sq_slope"}, {"slope", slope}});
    }
    report::write_svg_plot(out / "branch_amplitude.svg", "branch amplitude vs width",
                           "d", "amplitude", {amp}, &cfg);
    report::write_svg_plot(out / "branch_energy_deficit.svg",
                           "energy deficit vs width", "d", "E(S0) - E(Psi)",
                           {deficit}, &cfg);
    if (!br.points.empty() && !br.points.back().vortex_set.entries.empty()) {
        report::write_vortex_svg(out / "branch_vortices.svg",
                                 "vortices at the widest branch point",
                                 dom.half_length, br.points.back().width,
                                 br.points.back().vortex_set, &cfg);
    }
    std::cout << "branch with " << br.points.size() << " points written to "
              << (out / "branch.ndjson") << "\n";
    return 0;
}

int cmd_lyapunov(const CommonArgs& args) {
    Config cfg = resolve(args);
    const fs::path out(args.out_dir);
    const int k = cfg.k;
    StripDomain dom = cfg.domain(analytic::critical_width(k));
    const double dk_disc = reduction::critical_width_discrete(dom, k);

    // J surface
    const int nd = cfg.lyap_d_count, nl = cfg.lyap_lambda_count;
    struct Cell {
        double d, lam, J;
        bool ok;
    };
    std::vector<Cell> cells(nd * nl);
#pragma omp parallel for schedule(dynamic) collapse(2)
    for (int i = 0; i < nd; ++i)
        for (int j = 0; j < nl; ++j) {
            const double d =
                dk_disc - cfg.lyap_d_halfspan +
                2.0 * cfg.lyap_d_halfspan * i / std::max(1, nd - 1);
            const double lam =
                -cfg.lyap_lambda_max +
                2.0 * cfg.lyap_lambda_max * j / std::max(1, nl - 1);
            Cell& c = cells[i * nl + j];
            c.d = d;
            c.lam = lam;
            try {
                c.J = reduction::bifurcation_J(dom, k, d, lam, 1e-11);
                c.ok = true;
            } catch (const std::runtime_error&) {
                c.J = 0.0;
                c.ok = false;  // left the contraction regime
            }
        }

    report::NdjsonWriter nd_out(out / "lyapunov.ndjson", "gpstrip-lyapunov/1", cfg);
    report::CsvWriter csv(out / "lyapunov.csv", {"d", "lambda", "J", "status"},
                          "gpstrip-lyapunov/1", &cfg);
    for (const auto& c : cells) {
        nd_out.write(json{{"record", "cell"},
                          {"d", c.d},
                          {"lambda", c.lam},
                          {"J", c.J},
                          {"status", c.ok ? "ok" : "diverged"}});
        csv.write_row({report::CsvWriter::num(c.d), report::CsvWriter::num(c.lam),
                       report::CsvWriter::num(c.J), c.ok ? "ok" : "diverged"});
    }

    // derivative probe and the two closed-form comparisons
    const auto probe = reduction::probe_J_derivatives(dom, k);
    const auto co = analytic::compute_coefficients(cfg.nx, cfg.half_length);
    const double s2 = std::numbers::sqrt2;
    const double mixed_err = std::abs(probe.d_dl + 2.0 * s2);
    const double omega_probe = probe.d_lll / probe.d_k;
    nd_out.write(json{{"record", "derivatives"},
                      {"d_k_discrete", probe.d_k},
                      {"J_at_onset", probe.j_at_zero},
                      {"d_d", probe.d_d},
                      {"d_lambda", probe.d_lambda},
                      {"d_dd", probe.d_dd},
                      {"d_lambda_lambda", probe.d_ll},
                      {"d_d_lambda", probe.d_dl},
                      {"d_d_lambda_check_minus_2sqrt2",
                       json{{"measured", probe.d_dl},
                            {"target", -2.0 * s2},
                            {"pass", mixed_err <= 1e-2}}},
                      {"d3_lambda", probe.d_lll},
                      {"omega_probe", omega_probe},
                      {"omega_pipeline", co.omega},
                      {"omega_check", json{{"measured", omega_probe},
                                           {"target", co.omega},
                                           {"pass", std::abs(omega_probe - co.omega) <=
                                                        0.02 * co.omega}}}});
    // antisymmetry check
    const double ja = reduction::bifurcation_J(dom, k, dk_disc + 0.08, 0.1, 1e-12);
    const double jb = reduction::bifurcation_J(dom, k, dk_disc + 0.08, -0.1, 1e-12);
    nd_out.write(json{{"record", "antisymmetry"},
                      {"J_plus", ja},
                      {"J_minus", jb},
                      {"sum", ja + jb},
                      {"pass", std::abs(ja + jb) <= 1e-10}});

    // J(lambda) sections as a plot
    report::Series sec_lo{"J at d_k - span", "#1f77b4", {}, true};
    report::Series sec_mid{"J at d_k", "#2ca02c", {}, true};
    report::Series sec_hi{"J at d_k + span", "#d62728", {}, true};
    for (int j = 0; j < nl; ++j) {
        sec_lo.points.emplace_back(cells[j].lam, cells[j].J);
        sec_mid.points.emplace_back(cells[(nd / 2) * nl + j].lam,
                                    cells[(nd / 2) * nl + j].J);
        sec_hi.points.emplace_back(cells[(nd - 1) * nl + j].lam,
                                   cells[(nd - 1) * nl + j].J);
    }
    report::write_svg_plot(out / "lyapunov.svg", "bifurcation function sections",
                           "lambda", "J(d, lambda)", {sec_lo, sec_mid, sec_hi}, &cfg);
    std::cout << "J surface and derivative report written to "
              << (out / "lyapunov.ndjson") << "\n";
    return 0;
}

int cmd_verify(const CommonArgs& args) {
    Config cfg = resolve(args);
    const fs::path out(args.out_dir);
    acceptance::Options opts;
    opts.nx = cfg.nx;
    opts.half_length = cfg.half_length;
    opts.n_modes = cfg.n_modes;
    opts.tol = cfg.tol;
    auto results = acceptance::run_all(opts);

    report::NdjsonWriter nd(out / "verify.ndjson", "gpstrip-verify/1", cfg);
    bool all_pass = true;
    for (const auto& r : results) {
        std::cout << acceptance::format_result(r);
        json checks = json::array();
        for (const auto& c : r.checks)
            checks.push_back(json{{"name", c.name},
                                  {"pass", c.pass},
                                  {"measured", c.measured},
                                  {"target", c.target},
                                  {"tolerance", c.tolerance},
                                  {"note", c.note}});
        nd.write(json{{"record", "criterion"},
                      {"id", r.id},
                      {"name", r.name},
                      {"pass", r.pass},
                      {"skipped", r.skipped},
                      {"skip_reason", r.skip_reason},
                      {"seconds", r.seconds},
                      {"checks", checks}});
        if (!r.skipped) all_pass &= r.pass;
    }
    std::cout << (all_pass ? "all criteria passed\n"
                           : "one or more criteria FAILED\n");
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical toolkit for bifurcating solitonic vortices on a strip"};
    app.require_subcommand(1);

    CommonArgs a_coeff, a_spec, a_branch, a_lyap, a_verify;
    auto* c1 = app.add_subcommand("coefficients",
                                  "quadrature pipeline for omega, Lambda and the "
                                  "energy coefficient");
    add_common(c1, a_coeff);
    auto* c2 = app.add_subcommand("spectrum",
                                  "lowest sector eigenvalue and negative-count scan "
                                  "over widths");
    add_common(c2, a_spec);
    auto* c3 = app.add_subcommand("branch", "continue the solution branch in width");
    add_common(c3, a_branch);
    auto* c4 = app.add_subcommand("lyapunov",
                                  "bifurcation function surface and derivative probes");
    add_common(c4, a_lyap);
    auto* c5 = app.add_subcommand("verify", "run the acceptance suite");
    add_common(c5, a_verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c1->parsed()) return cmd_coefficients(a_coeff);
        if (c2->parsed()) return cmd_spectrum(a_spec);
        if (c3->parsed()) return cmd_branch(a_branch);
        if (c4->parsed()) return cmd_lyapunov(a_lyap);
        if (c5->parsed()) return cmd_verify(a_verify);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

// ============================================================================
// chfem_cli — command-line harness around the solver library.
//
// Subcommands reproduce the standard verification studies (convergence
// tables, the steady fourth-order comparison, the eigenvalue comparison, the
// two-drop simulation, the inf-sup sweep, the conformity audit) and run
// custom configurations from a key=value file.  Exit codes: 0 success,
// 2 configuration error, 3 numerical failure.
// ============================================================================
#include "CLI11.hpp"

#include "chfem/audit.hpp"
#include "chfem/io.hpp"
#include "chfem/solver.hpp"
#include "chfem/tables.hpp"

#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

namespace {

using chfem::RateTable;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

// "1..6", "1-6", "2", or "1,3,5"
std::vector<int> parse_levels(const std::string& text) {
    std::vector<int> out;
    const auto parse_int = [](const std::string& s) {
        size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters in '" + s + "'");
        return v;
    };
    size_t dots = text.find("..");
    if (dots == std::string::npos) dots = text.find('-');
    if (dots != std::string::npos && dots > 0) {
        const int a = parse_int(text.substr(0, dots));
        const size_t skip = text[dots] == '.' ? 2 : 1;
        const int b = parse_int(text.substr(dots + skip));
        if (a < 1 || b < a) throw std::invalid_argument("bad level range '" + text + "'");
        for (int l = a; l <= b; ++l) out.push_back(l);
        return out;
    }
    size_t pos = 0;
    while (pos < text.size()) {
        size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        out.push_back(parse_int(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty level list");
    for (const int l : out)
        if (l < 1) throw std::invalid_argument("levels start at 1");
    return out;
}

std::vector<int> clamp_levels(const std::vector<int>& levels, int max_level) {
    std::vector<int> out;
    for (const int l : levels)
        if (l <= max_level) out.push_back(l);
    return out;
}

void echo_block(const std::string& title, const RateTable& table, const std::string& csv_path,
                bool include_rates = true) {
    const std::string csv = table.to_csv(include_rates);
    chfem::write_text(csv_path, csv);
    std::cout << "# " << title << " -> " << csv_path << "\n" << csv;
}

int finish(const std::vector<chfem::CheckLine>& checks) {
    std::cout << chfem::render_checks(checks);
    return chfem::all_pass(checks) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed tensor solver for a fourth-order phase-field equation"};
    app.require_subcommand(1);

    std::string levels_text, out_flag, tau_rule = "fixed", config_path;
    double coal_eps = 0.01, tau = 0.0, T = 0.0;
    unsigned seed = 20240811u;
    int fields = 20;
    bool dense_eigs = false, csv_snapshots = false;

    auto add_common = [&](CLI::App* cmd, bool with_levels = true) {
        cmd->add_option("--out", out_flag, "output directory (default: $CHFEM_OUT or ./out)");
        if (with_levels) cmd->add_option("--levels", levels_text, "level range, e.g. 1..6");
    };

    CLI::App* c_table1 = app.add_subcommand("table1", "state/flux convergence on the square");
    add_common(c_table1);
    CLI::App* c_table2 = app.add_subcommand("table2", "postprocessed convergence on the square");
    add_common(c_table2);
    CLI::App* c_table3 = app.add_subcommand("table3", "convergence on the L-shaped domain");
    add_common(c_table3);
    CLI::App* c_table5 =
        app.add_subcommand("table5", "steady fourth-order comparison (three methods)");
    add_common(c_table5);
    CLI::App* c_table6 = app.add_subcommand("table6", "eigenvalue comparison (three methods)");
    add_common(c_table6);
    c_table6->add_flag("--dense-eigs", dense_eigs, "dense eigensolver at every level");
    CLI::App* c_coal = app.add_subcommand("coalesce", "two-drop simulation");
    add_common(c_coal, false);
    c_coal->add_option("--eps", coal_eps, "interface width")->capture_default_str();
    c_coal->add_option("--tau", tau, "time step");
    c_coal->add_option("--T", T, "final time");
    c_coal->add_flag("--csv-snapshots", csv_snapshots, "also write x,y,u snapshot tables");
    CLI::App* c_infsup = app.add_subcommand("infsup", "discrete stability constant sweep");
    add_common(c_infsup);
    CLI::App* c_audit = app.add_subcommand("audit", "randomized conformity audit");
    add_common(c_audit);
    c_audit->add_option("--seed", seed, "random seed")->capture_default_str();
    c_audit->add_option("--fields", fields, "number of random fields")->capture_default_str();
    CLI::App* c_run = app.add_subcommand("run", "custom evolution study from a config file");
    c_run->add_option("config", config_path, "key=value config file")->required();
    add_common(c_run, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::string out_dir = chfem::resolve_output_dir(out_flag);

        if (c_table1->parsed()) {
            const std::vector<int> levels =
                levels_text.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6} : parse_levels(levels_text);
            const double t0 = now_seconds();
            const RateTable fixed =
                chfem::evolution_block("square", levels, 1.0, "fixed", 1e-5, 2e-4, false);
            const double t1 = now_seconds();
            const RateTable h2 =
                chfem::evolution_block("square", clamp_levels(levels, 5), 1.0, "h2", 0.0, 1.0, false);
            const double t2 = now_seconds();
            echo_block("square, fixed tau=1e-5, T=2e-4", fixed, out_dir + "/table1_fixed.csv");
            echo_block("square, tau=h^2, T=1", h2, out_dir + "/table1_h2.csv");
            std::printf("# block runtimes: %.1f s, %.1f s\n", t1 - t0, t2 - t1);
            return finish(chfem::check_table1(fixed, h2, t1 - t0, t2 - t1));
        }
        if (c_table2->parsed()) {
            const std::vector<int> levels =
                levels_text.empty() ? std::vector<int>{1, 2, 3, 4} : parse_levels(levels_text);
            const RateTable fixed =
                chfem::evolution_block("square", levels, 1.0, "fixed", 1e-6, 4e-5, true);
            const RateTable h4 =
                chfem::evolution_block("square", levels, 1.0, "h4", 0.0, 1.0, true);
            echo_block("square postprocessed, fixed tau=1e-6, T=4e-5", fixed,
                       out_dir + "/table2_fixed.csv");
            echo_block("square postprocessed, tau=h^4, T=1", h4, out_dir + "/table2_h4.csv");
            return finish(chfem::check_table2(fixed, h4));
        }
        if (c_table3->parsed()) {
            const std::vector<int> levels =
                levels_text.empty() ? std::vector<int>{1, 2, 3, 4, 5} : parse_levels(levels_text);
            const RateTable fixed =
                chfem::evolution_block("lshape", levels, 1.0, "fixed", 1e-5, 2e-4, false);
            const RateTable h2 =
                chfem::evolution_block("lshape", levels, 1.0, "h2", 0.0, 1.0, false);
            echo_block("L-shape, fixed tau=1e-5, T=2e-4", fixed, out_dir + "/table3_fixed.csv");
            echo_block("L-shape, tau=h^2, T=1", h2, out_dir + "/table3_h2.csv");
            return finish(chfem::check_table3(fixed, h2));
        }
        if (c_table5->parsed()) {
            const std::vector<int> levels =
                levels_text.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6} : parse_levels(levels_text);
            const chfem::BiharmonicTables t = chfem::run_table5(levels);
            echo_block("steady comparison, mixed", t.mixed, out_dir + "/table5_mixed.csv");
            echo_block("steady comparison, morley", t.morley, out_dir + "/table5_morley.csv");
            echo_block("steady comparison, p1-p1", t.cr, out_dir + "/table5_cr.csv", false);
            return finish(chfem::check_table5(t));
        }
        if (c_table6->parsed()) {
            const std::vector<int> levels =
                levels_text.empty() ? std::vector<int>{3, 4, 5}
                                    : clamp_levels(parse_levels(levels_text), 5);
            const chfem::EigenTables t = chfem::run_table6(levels, dense_eigs);
            const std::pair<const char*, const chfem::EigenTable*> parts[] = {
                {"mixed", &t.mixed}, {"morley", &t.morley}, {"cr", &t.cr}};
            for (const auto& [name, table] : parts) {
                const std::string csv = chfem::eigen_csv(*table);
                const std::string path = out_dir + "/table6_" + std::string(name) + ".csv";
                chfem::write_text(path, csv);
                std::cout << "# eigenvalues, " << name << " -> " << path << "\n" << csv;
            }
            return finish(chfem::check_table6(t));
        }
        if (c_coal->parsed()) {
            const double use_tau = tau > 0.0 ? tau : 1e-2;
            const double use_T = T > 0.0 ? T : 10.0;
            const double use_eps = coal_eps;
            const chfem::CoalesceResult r = chfem::run_coalescence(
                out_dir, use_eps, use_tau, use_T, {0.0, 1.0, 2.0, 10.0}, csv_snapshots);
            chfem::TriMesh::structured_square(20).dump(out_dir + "/mesh.txt");
            std::printf("steps completed: %d of %d\n", r.steps_completed,
                        chfem::step_count(use_T, use_tau));
            std::printf("finite: %s\n", r.finite ? "yes" : "no (step produced non-finite values)");
            std::printf("max per-step mass drift: %.3E\n", r.max_step_drift);
            std::printf("cumulative mass drift:   %.3E\n", r.cumulative_drift);
            std::printf("positive-phase components: %d at start, %d at last finite state\n",
                        r.components_begin, r.components_end);
            return r.finite ? 0 : 3;
        }
        if (c_infsup->parsed()) {
            const std::vector<int> levels =
                levels_text.empty() ? std::vector<int>{1, 2, 3, 4} : parse_levels(levels_text);
            const auto rows = chfem::run_infsup(levels);
            std::string csv = "level,beta\n";
            for (const auto& r : rows) {
                char buf[48];
                std::snprintf(buf, sizeof(buf), "%d,%.6f\n", r.level, r.beta);
                csv += buf;
            }
            chfem::write_text(out_dir + "/infsup.csv", csv);
            std::cout << csv;
            return finish(chfem::check_infsup(rows));
        }
        if (c_audit->parsed()) {
            const int level = levels_text.empty() ? 2 : parse_levels(levels_text).front();
            const chfem::AuditReport rep =
                chfem::conformity_audit(chfem::square_level(level), fields, seed);
            std::printf("fields: %d\n", rep.fields);
            std::printf("constraint rows: %d (rank %d)\n", rep.constraint_rows,
                        rep.constraint_rank);
            std::printf("max admissible violation: %.3E\n", rep.max_admissible_jump);
            std::printf("min control violation:    %.3E\n", rep.min_control_jump);
            const bool ok = rep.constraint_rank == rep.constraint_rows &&
                            rep.max_admissible_jump <= 1e-10 && rep.min_control_jump >= 1e-3;
            std::cout << (ok ? "PASS" : "FAIL") << " conformity audit\n";
            return ok ? 0 : 1;
        }
        if (c_run->parsed()) {
            const auto cfg = chfem::parse_config(config_path);
            chfem::EvolveSpec spec;
            bool postprocess = false;
            std::vector<int> levels{1, 2, 3};
            for (const auto& [key, value] : cfg) {
                try {
                    if (key == "domain")
                        spec.domain = value;
                    else if (key == "levels" || key == "level")
                        levels = parse_levels(value);
                    else if (key == "eps")
                        spec.eps = std::stod(value);
                    else if (key == "tau")
                        spec.tau = std::stod(value);
                    else if (key == "tau_rule")
                        spec.tau_rule = value;
                    else if (key == "T")
                        spec.T = std::stod(value);
                    else if (key == "postprocess")
                        postprocess = (value == "1" || value == "true" || value == "yes");
                    else if (key == "out")
                        ;  // handled by resolve_output_dir precedence below
                    else
                        throw std::invalid_argument("unknown key '" + key + "'");
                } catch (const std::exception& e) {
                    std::cerr << "config error: " << config_path << ": " << e.what() << "\n";
                    return 2;
                }
            }
            if (spec.domain != "square" && spec.domain != "lshape") {
                std::cerr << "config error: domain must be square or lshape\n";
                return 2;
            }
            if (spec.tau_rule == "fixed" && spec.tau <= 0.0) {
                std::cerr << "config error: fixed tau rule needs tau > 0\n";
                return 2;
            }
            if (spec.T <= 0.0) {
                std::cerr << "config error: T must be positive\n";
                return 2;
            }
            std::string run_out = out_dir;
            if (out_flag.empty() && cfg.count("out")) {
                run_out = cfg.at("out");
                chfem::ensure_dir(run_out);
            }
            const RateTable t = chfem::evolution_block(spec.domain, levels, spec.eps,
                                                       spec.tau_rule, spec.tau, spec.T,
                                                       postprocess);
            echo_block("custom study (" + spec.domain + ")", t, run_out + "/custom.csv");
            return 0;
        }
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

// ============================================================================
// acceptance.cpp — end-to-end acceptance harness.
//
// Runs the full verification suite and prints exactly one PASS/FAIL line per
// acceptance criterion (supporting sub-checks are listed indented).  All
// tolerances are pinned here and in the shared check_* helpers; the process
// exits nonzero if any gated criterion fails.  Criteria marked "reported"
// never gate the exit code.
// ============================================================================
#include "chfem/assembly.hpp"
#include "chfem/audit.hpp"
#include "chfem/errors.hpp"
#include "chfem/manufactured.hpp"
#include "chfem/postprocess.hpp"
#include "chfem/solver.hpp"
#include "chfem/tables.hpp"

#include "util.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace {

using chfem::CheckLine;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

bool gated_pass(const std::vector<CheckLine>& lines) { return chfem::all_pass(lines); }

void print_criterion(int id, const std::string& title, bool pass, bool gated,
                     const std::vector<CheckLine>& lines) {
    std::printf("[%s] criterion %2d: %s%s\n", pass ? "PASS" : "FAIL", id, title.c_str(),
                gated ? "" : " (reported, not gated)");
    for (const auto& l : lines)
        std::printf("         %-4s %s%s: %s\n", l.pass ? "ok" : "BAD",
                    l.gated ? "" : "(info) ", l.name.c_str(), l.detail.c_str());
    std::fflush(stdout);
}

CheckLine line(const std::string& name, bool pass, const std::string& detail) {
    CheckLine l;
    l.name = name;
    l.pass = pass;
    l.detail = detail;
    return l;
}

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return std::string(buf);
}

// --- criterion 11 oracles ----------------------------------------------------

// elementwise integration-by-parts identity of the divDiv coupling
CheckLine oracle_by_parts() {
    const chfem::TriMesh m = chfem::square_level(2);
    const chfem::SigmaSpace sp(m);
    const chfem::VSpace vs(m);
    const Eigen::SparseMatrix<double> B = chfem::divdiv_coupling(sp, vs);
    std::mt19937 rng(20240811u);
    std::normal_distribution<double> N(0.0, 1.0);
    Eigen::VectorXd tau(sp.ndof()), v(vs.ndof());
    for (int i = 0; i < tau.size(); ++i) tau[i] = N(rng);
    for (int i = 0; i < v.size(); ++i) v[i] = N(rng);
    const Eigen::VectorXd Bt = B * tau;
    const auto& vol = chfem::triangle_rule(6);
    const auto& seg = chfem::segment_rule(8);
    double max_rel = 0.0;
    for (int t = 0; t < m.num_tris(); ++t) {
        const double lhs = v.segment(3 * t, 3).dot(Bt.segment(3 * t, 3));
        const auto g = m.grad_lambda(t);
        const Eigen::Vector2d grad_v =
            v[3 * t] * g[0] + v[3 * t + 1] * g[1] + v[3 * t + 2] * g[2];
        double rhs = 0.0;
        for (const auto& q : vol) {
            const Eigen::Vector2d dv = sp.eval_div(tau, t, 1.0 - q.x - q.y, q.x, q.y);
            rhs -= 2.0 * m.area(t) * q.w * dv.dot(grad_v);
        }
        for (int k = 0; k < 3; ++k) {
            const int e = m.tri_edge[t][k];
            const Eigen::Vector2d n_out = m.outward_sign(t, e) * m.edge_normal(e);
            const int a_lo = m.local_vertex(t, m.edge_v[e][0]);
            const int a_hi = m.local_vertex(t, m.edge_v[e][1]);
            for (const auto& q : seg) {
                double lam[3] = {0.0, 0.0, 0.0};
                lam[a_lo] = 1.0 - q.t;
                lam[a_hi] = q.t;
                const Eigen::Vector2d dv = sp.eval_div(tau, t, lam[0], lam[1], lam[2]);
                rhs += m.edge_length(e) * q.w * dv.dot(n_out) *
                       vs.eval(v, t, lam[0], lam[1], lam[2]);
            }
        }
        max_rel = std::max(max_rel, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    return line("divDiv coupling vs elementwise integration by parts",
                max_rel <= 1e-11, fmt("max relative gap %.2E (limit 1.0E-11)", max_rel));
}

// closed-form derivative fields against central finite differences
CheckLine oracle_derivatives() {
    double worst = 0.0;
    const double h = 1e-5;
    const double t = 0.3;
    struct Probe {
        std::shared_ptr<const chfem::ExactSolution> ex;
        std::vector<Eigen::Vector2d> pts;
    };
    const std::vector<Probe> probes = {
        {chfem::exact_square_trig(), {{0.31, 0.47}, {0.72, 0.15}, {0.11, 0.93}}},
        {chfem::exact_lshape_singular(), {{-0.51, 0.43}, {-0.62, -0.57}, {0.35, 0.72}}}};
    for (const auto& pr : probes) {
        for (const auto& x : pr.pts) {
            const auto& ex = *pr.ex;
            const auto rel = [](double got, double want) {
                return std::abs(got - want) / std::max(1.0, std::abs(want));
            };
            const Eigen::Vector2d g = ex.grad_u(x, t);
            worst = std::max(worst, rel((ex.u({x[0] + h, x[1]}, t) - ex.u({x[0] - h, x[1]}, t)) /
                                            (2 * h),
                                        g[0]));
            worst = std::max(worst, rel((ex.u({x[0], x[1] + h}, t) - ex.u({x[0], x[1] - h}, t)) /
                                            (2 * h),
                                        g[1]));
            const Eigen::Matrix2d H = ex.hess_u(x, t);
            worst = std::max(
                worst, rel((ex.grad_u({x[0] + h, x[1]}, t)[0] - ex.grad_u({x[0] - h, x[1]}, t)[0]) /
                               (2 * h),
                           H(0, 0)));
            worst = std::max(
                worst, rel((ex.grad_u({x[0], x[1] + h}, t)[0] - ex.grad_u({x[0], x[1] - h}, t)[0]) /
                               (2 * h),
                           H(0, 1)));
            worst = std::max(
                worst, rel((ex.grad_u({x[0], x[1] + h}, t)[1] - ex.grad_u({x[0], x[1] - h}, t)[1]) /
                               (2 * h),
                           H(1, 1)));
            worst = std::max(worst, rel(H.trace(), ex.lap_u(x, t)));
            const Eigen::Vector2d gl = ex.grad_lap_u(x, t);
            worst = std::max(
                worst,
                rel((ex.lap_u({x[0] + h, x[1]}, t) - ex.lap_u({x[0] - h, x[1]}, t)) / (2 * h),
                    gl[0]));
            worst = std::max(
                worst,
                rel((ex.lap_u({x[0], x[1] + h}, t) - ex.lap_u({x[0], x[1] - h}, t)) / (2 * h),
                    gl[1]));
        }
    }
    return line("derivative fields vs finite differences", worst <= 1e-5,
                fmt("max relative gap %.2E (limit 1.0E-05)", worst));
}

// quintic reconstruction reproduces quintics
CheckLine oracle_postprocess() {
    const chfem::TriMesh m = chfem::square_level(2);
    const chfem::SigmaSpace sp(m);
    const chfem::VSpace vs(m);
    const auto quintic = [](const Eigen::Vector2d& p) {
        const double x = p[0], y = p[1];
        return std::pow(x, 5) + std::pow(y, 5) + x * x * x * y * y + 2.0 * x * x * y - x * y +
               3.0 * x + 2.0;
    };
    const auto quintic_hess = [](const Eigen::Vector2d& p) {
        const double x = p[0], y = p[1];
        Eigen::Matrix2d H;
        H(0, 0) = 20.0 * x * x * x + 6.0 * x * y * y + 4.0 * y;
        H(0, 1) = 6.0 * x * x * y + 4.0 * x - 1.0;
        H(1, 1) = 20.0 * y * y * y + 2.0 * x * x * x;
        H(1, 0) = H(0, 1);
        return H;
    };
    const Eigen::VectorXd s = testutil::interpolate_tensor(sp, quintic_hess);
    const Eigen::VectorXd w = vs.project_l2(quintic, 12);
    chfem::CHCase cas;
    cas.eps = 1.0;
    cas.nonlinear = false;
    const chfem::ReconResult rec = chfem::reconstruct_state(sp, vs, s, w, cas, 10);
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> U(0.05, 0.9);
    double max_err = 0.0;
    for (int t = 0; t < m.num_tris(); ++t)
        for (int rep = 0; rep < 5; ++rep) {
            double l0 = U(rng), l1 = U(rng) * (1.0 - l0);
            const double got = chfem::eval_reconstruction(rec.coef, t, l0, l1, 1.0 - l0 - l1);
            const double want = quintic(m.point(t, l0, l1, 1.0 - l0 - l1));
            max_err = std::max(max_err, std::abs(got - want) / std::max(1.0, std::abs(want)));
        }
    const bool pass = max_err <= 1e-10 && rec.max_multiplier <= 1e-8;
    return line("quintic reconstruction exactness", pass,
                fmt("max relative gap %.2E, multiplier %.2E", max_err, rec.max_multiplier));
}

}  // namespace

int main() {
    std::printf("acceptance harness: mixed tensor solver verification\n");
    std::fflush(stdout);
    bool all_ok = true;

    // 1 — state/flux convergence on the square ------------------------------
    {
        const double t0 = now_seconds();
        const chfem::RateTable fixed =
            chfem::evolution_block("square", {1, 2, 3, 4, 5, 6}, 1.0, "fixed", 1e-5, 2e-4, false);
        const double t1 = now_seconds();
        const chfem::RateTable h2 =
            chfem::evolution_block("square", {1, 2, 3, 4, 5}, 1.0, "h2", 0.0, 1.0, false);
        const double t2 = now_seconds();
        const auto lines = chfem::check_table1(fixed, h2, t1 - t0, t2 - t1);
        const bool ok = gated_pass(lines);
        all_ok = all_ok && ok;
        print_criterion(1, "second-order state/flux convergence on the square", ok, true, lines);
    }

    // 2 — postprocessed convergence on the square ---------------------------
    {
        const chfem::RateTable fixed =
            chfem::evolution_block("square", {1, 2, 3, 4}, 1.0, "fixed", 1e-6, 4e-5, true);
        const chfem::RateTable h4 =
            chfem::evolution_block("square", {1, 2, 3, 4}, 1.0, "h4", 0.0, 1.0, true);
        const auto lines = chfem::check_table2(fixed, h4);
        const bool ok = gated_pass(lines);
        all_ok = all_ok && ok;
        print_criterion(2, "fourth-order flux and reconstruction rates on the square", ok, true,
                        lines);
    }

    // 3 — convergence under the corner singularity --------------------------
    {
        const chfem::RateTable fixed =
            chfem::evolution_block("lshape", {1, 2, 3, 4, 5}, 1.0, "fixed", 1e-5, 2e-4, false);
        const chfem::RateTable h2 =
            chfem::evolution_block("lshape", {1, 2, 3, 4, 5}, 1.0, "h2", 0.0, 1.0, false);
        const auto lines = chfem::check_table3(fixed, h2);
        const bool ok = gated_pass(lines);
        all_ok = all_ok && ok;
        print_criterion(3, "singular-rate convergence on the L-shaped domain", ok, true, lines);
    }

    // 4 — steady fourth-order comparison ------------------------------------
    {
        const chfem::BiharmonicTables t = chfem::run_table5({1, 2, 3, 4, 5, 6});
        const auto lines = chfem::check_table5(t);
        const bool ok = gated_pass(lines);
        all_ok = all_ok && ok;
        print_criterion(4, "steady comparison: two convergent methods, one stalling", ok, true,
                        lines);
    }

    // 5 — eigenvalue comparison ----------------------------------------------
    {
        const chfem::EigenTables t = chfem::run_table6({3, 4, 5}, false);
        const auto lines = chfem::check_table6(t);
        const bool ok = gated_pass(lines);
        all_ok = all_ok && ok;
        print_criterion(5, "eigenvalue tables for the three methods", ok, true, lines);
    }

    // 6 — conservation in the two-drop run (topology reported as criterion 12)
    const chfem::CoalesceResult coal = chfem::run_coalescence("", 0.01, 1e-2, 10.0, {}, false);
    {
        std::vector<CheckLine> lines;
        lines.push_back(line("all 1000 steps finite",
                             coal.finite && coal.steps_completed == 1000,
                             fmt("completed %.0f of 1000, finite: %.0f (1=yes)",
                                 static_cast<double>(coal.steps_completed),
                                 coal.finite ? 1.0 : 0.0)));
        lines.push_back(line("per-step state-integral drift <= 1e-10",
                             coal.max_step_drift <= 1e-10,
                             fmt("max per-step drift %.2E", coal.max_step_drift)));
        lines.push_back(line("cumulative state-integral drift <= 1e-8",
                             coal.finite && coal.steps_completed == 1000 &&
                                 coal.cumulative_drift <= 1e-8,
                             fmt("cumulative drift %.2E", coal.cumulative_drift)));
        const bool ok6 = lines[0].pass && lines[1].pass && lines[2].pass;
        all_ok = all_ok && ok6;
        print_criterion(6, "state-integral conservation in the two-drop run", ok6, true, lines);
    }

    // 7 — constant steady states ---------------------------------------------
    {
        std::vector<CheckLine> lines;
        bool ok = true;
        for (double c : {0.0, 1.0, -1.0}) {
            chfem::MixedCH solver(chfem::square_level(2), chfem::case_constant(c, 1.0));
            solver.prepare_stepping(1e-2);
            chfem::MixedCH::Pair state = solver.project_exact(0.0);
            for (int n = 1; n <= 100; ++n) state = solver.step(state, n * 1e-2);
            const double es =
                chfem::error_sigma(solver.sigma_space(), state.s, solver.problem(), 1.0, 8);
            const double eu =
                chfem::error_state(solver.v_space(), state.w, solver.problem(), 1.0, 8);
            const bool pass = es <= 1e-8 && eu <= 1e-8;
            ok = ok && pass;
            lines.push_back(line(fmt("steady state u = %.0f after 100 steps", c),
                                 pass, fmt("flux error %.2E, state error %.2E", es, eu)));
        }
        all_ok = all_ok && ok;
        print_criterion(7, "constant states are preserved over 100 steps", ok, true, lines);
    }

    // 8 — randomized conformity audit ----------------------------------------
    {
        std::vector<CheckLine> lines;
        bool ok = true;
        for (const char* dom : {"square", "lshape"}) {
            const chfem::TriMesh m = std::string(dom) == "square" ? chfem::square_level(2)
                                                                  : chfem::lshape_level(2);
            const chfem::AuditReport rep = chfem::conformity_audit(m, 20, 20240811u);
            const bool pass = rep.constraint_rank == rep.constraint_rows &&
                              rep.max_admissible_jump <= 1e-10 && rep.min_control_jump >= 1e-3;
            ok = ok && pass;
            lines.push_back(line(std::string("audit on the ") + dom, pass,
                                 fmt("admissible %.2E (<=1e-10), control %.2E (>=1e-3)",
                                     rep.max_admissible_jump, rep.min_control_jump)));
        }
        all_ok = all_ok && ok;
        print_criterion(8, "20 random admissible fields conform; controls do not", ok, true,
                        lines);
    }

    // 9 — inf-sup sweep --------------------------------------------------------
    {
        const auto rows = chfem::run_infsup({1, 2, 3, 4});
        const auto lines = chfem::check_infsup(rows);
        const bool ok = gated_pass(lines);
        all_ok = all_ok && ok;
        print_criterion(9, "discrete stability constant: positive, level-stable", ok, true,
                        lines);
    }

    // 10 — projection accuracy --------------------------------------------------
    {
        const chfem::RateTable t = chfem::projection_rates({3, 4, 5, 6});
        const auto lines = chfem::check_projection(t);
        const bool ok = gated_pass(lines);
        all_ok = all_ok && ok;
        print_criterion(10, "coupled projection converges at second order", ok, true, lines);
    }

    // 11 — independent oracles ---------------------------------------------------
    {
        std::vector<CheckLine> lines;
        lines.push_back(oracle_by_parts());
        lines.push_back(oracle_derivatives());
        lines.push_back(oracle_postprocess());
        const bool ok = lines[0].pass && lines[1].pass && lines[2].pass;
        all_ok = all_ok && ok;
        print_criterion(11, "independent oracles for assembly, calculus, reconstruction", ok,
                        true, lines);
    }

    // 12 — topology of the two-drop run (reported, not gated) -----------------
    {
        std::vector<CheckLine> topo;
        topo.push_back(line("positive regions: two at start", coal.components_begin == 2,
                            fmt("found %.0f", static_cast<double>(coal.components_begin))));
        topo.push_back(line("positive regions: one at the end", coal.components_end == 1,
                            fmt("found %.0f at the last finite state",
                                static_cast<double>(coal.components_end))));
        const bool ok12 = topo[0].pass && topo[1].pass;
        print_criterion(12, "two drops merge into one", ok12, false, topo);
    }

    std::printf("%s\n", all_ok ? "ACCEPTANCE: all gated criteria passed"
                               : "ACCEPTANCE: at least one gated criterion FAILED");
    return all_ok ? 0 : 1;
}

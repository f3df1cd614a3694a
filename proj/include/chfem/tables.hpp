// ============================================================================
// tables.hpp — verification drivers: convergence studies of the evolution
// solver, the steady fourth-order comparison (three discretisations), the
// eigenvalue comparison, the two-drop simulation, and the inf-sup sweep.
//
// Every driver returns plain data; the pass/fail checks against the pinned
// tolerances live in check_* helpers so the command-line harness and the
// acceptance test evaluate exactly the same conditions.
// ============================================================================
#pragma once

#include "chfem/io.hpp"
#include "chfem/manufactured.hpp"
#include "chfem/mesh.hpp"

#include <array>
#include <string>
#include <vector>

namespace chfem {

// ---- evolution convergence studies -----------------------------------------

struct EvolveSpec {
    std::string domain = "square";  // "square" | "lshape"
    int level = 1;
    double eps = 1.0;
    std::string tau_rule = "fixed";  // "fixed" | "h2" | "h4"
    double tau = 1e-5;               // only for tau_rule == "fixed"
    double T = 2e-4;
    bool postprocess = false;  // improved final step + quintic reconstruction
};

struct EvolveOutcome {
    double h = 0.0, tau = 0.0;
    int steps = 0;
    double err_sigma = 0.0, err_state = 0.0, err_recon = 0.0;
    double init_rho = 0.0;             // projection slack at t = 0 (~0 expected)
    double max_step_mass_drift = 0.0;  // max_n |mean(u^n) - mean(u^{n-1})|
};

EvolveOutcome run_evolution(const EvolveSpec& spec);

// one table block: same case and tau rule over a range of levels
RateTable evolution_block(const std::string& domain, const std::vector<int>& levels, double eps,
                          const std::string& tau_rule, double tau_fixed, double T,
                          bool postprocess);

// EOC between the two finest levels of error column c (NaN when < 2 rows)
double finest_rate(const RateTable& table, size_t column);

// ---- pinned tolerance checks -------------------------------------------------

struct CheckLine {
    std::string name;
    bool pass = false;
    bool gated = true;  // false: informational only, never fails the harness
    std::string detail;
};

// Negative runtimes mean "not measured"; measured ones are gated at 600 s per block.
std::vector<CheckLine> check_table1(const RateTable& block_fixed, const RateTable& block_h2,
                                    double seconds_fixed = -1.0, double seconds_h2 = -1.0);
std::vector<CheckLine> check_table2(const RateTable& block_fixed, const RateTable& block_h4);
std::vector<CheckLine> check_table3(const RateTable& block_fixed, const RateTable& block_h2);

// ---- steady fourth-order comparison (three discretisations) -----------------

struct BiharmonicTables {
    RateTable mixed;   // tensor-flux mixed method
    RateTable morley;  // quadratic plate element
    RateTable cr;      // P1-P1 coupled method (no meaningful rates)
};

BiharmonicTables run_table5(const std::vector<int>& levels);
std::vector<CheckLine> check_table5(const BiharmonicTables& t);

// ---- eigenvalue comparison ----------------------------------------------------

struct EigenTable {
    std::vector<int> levels;
    std::vector<double> h;
    std::vector<std::array<double, 5>> values;  // five smallest nonzero, ascending
};

struct EigenTables {
    EigenTable mixed, morley, cr;
};

// force_dense routes every level of every method through the dense solver;
// otherwise the mixed pencil switches to shift-invert iteration at level >= 4
EigenTables run_table6(const std::vector<int>& levels, bool force_dense);
std::vector<CheckLine> check_table6(const EigenTables& t);
std::string eigen_csv(const EigenTable& t);

// ---- two-drop simulation -------------------------------------------------------

struct CoalesceResult {
    std::vector<std::array<double, 3>> mass_history;  // (step, time, mass)
    int steps_completed = 0;
    bool finite = true;        // false: a step produced non-finite values
    double max_step_drift = 0.0;
    double cumulative_drift = 0.0;  // max |mass - initial mass| while finite
    int components_begin = 0;  // positive-phase regions at t = 0
    int components_end = 0;    // ... at the last finite snapshot
};

CoalesceResult run_coalescence(const std::string& out_dir, double eps, double tau, double T,
                               const std::vector<double>& snapshot_times, bool csv_snapshots);

// Number of connected components (8-neighbour) of {u_h > 0} sampled on an
// n-by-n grid over the mesh's bounding box.
int positive_region_components(const TriMesh& mesh, const class VSpace& vs,
                               const Eigen::VectorXd& w, int grid_n = 200);

// ---- inf-sup sweep and projection rates ------------------------------------------

struct InfSupRow {
    int level = 0;
    double beta = 0.0;
};

std::vector<InfSupRow> run_infsup(const std::vector<int>& levels);
std::vector<CheckLine> check_infsup(const std::vector<InfSupRow>& rows);

// projection accuracy of the coupled elliptic projection on the square case
RateTable projection_rates(const std::vector<int>& levels);
std::vector<CheckLine> check_projection(const RateTable& t);

// render check lines as "PASS name: detail" / "FAIL ..." text
std::string render_checks(const std::vector<CheckLine>& lines);
bool all_pass(const std::vector<CheckLine>& lines);

}  // namespace chfem

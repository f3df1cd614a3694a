#include "chfem/tables.hpp"

#include "chfem/biharmonic.hpp"
#include "chfem/ciarlet_raviart.hpp"
#include "chfem/errors.hpp"
#include "chfem/infsup.hpp"
#include "chfem/morley.hpp"
#include "chfem/postprocess.hpp"
#include "chfem/solver.hpp"
#include "chfem/vspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace chfem {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

CHCase case_for_domain(const std::string& domain, double eps) {
    if (domain == "square") return case_square_trig(eps);
    if (domain == "lshape") return case_lshape_singular(eps);
    throw std::runtime_error("unknown domain: " + domain);
}

TriMesh mesh_for_domain(const std::string& domain, int level) {
    return domain == "square" ? square_level(level) : lshape_level(level);
}

}  // namespace

// ---------------------------------------------------------------------------
// evolution studies
// ---------------------------------------------------------------------------
EvolveOutcome run_evolution(const EvolveSpec& spec) {
    TriMesh mesh = mesh_for_domain(spec.domain, spec.level);
    const CHCase cas = case_for_domain(spec.domain, spec.eps);

    EvolveOutcome out;
    out.h = mesh.h_max();
    // step-size rules square the structured grid spacing (the shortest edge),
    // not the triangle diameter
    const double hs = mesh.h_min();
    double tau = spec.tau;
    if (spec.tau_rule == "h2")
        tau = hs * hs;
    else if (spec.tau_rule == "h4")
        tau = hs * hs * hs * hs;
    else if (spec.tau_rule != "fixed")
        throw std::runtime_error("unknown tau rule: " + spec.tau_rule);
    const int N = step_count(spec.T, tau);
    tau = spec.T / N;
    out.tau = tau;
    out.steps = N;

    MixedCH solver(std::move(mesh), cas);
    MixedCH::Pair st = solver.project_exact(0.0, &out.init_rho);
    solver.prepare_stepping(tau);

    double mass_prev = solver.state_integral(st.w);
    auto track_mass = [&](const MixedCH::Pair& p) {
        const double m = solver.state_integral(p.w);
        out.max_step_mass_drift = std::max(out.max_step_mass_drift, std::abs(m - mass_prev));
        mass_prev = m;
    };

    const int n_plain = spec.postprocess ? N - 1 : N;
    for (int n = 1; n <= n_plain; ++n) {
        st = solver.step(st, static_cast<double>(n) * tau);
        track_mass(st);
    }
    if (spec.postprocess) {
        // the potential of the final step is evaluated on the reconstruction
        // of the previous state; everything else is the ordinary step
        ReconResult rec = reconstruct_state(solver.sigma_space(), solver.v_space(), st.s, st.w,
                                            solver.problem());
        const Eigen::MatrixXd coef = rec.coef;
        st = solver.step_custom_potential(
            st, spec.T,
            [&coef](int t, double l0, double l1, double l2) {
                return eval_reconstruction(coef, t, l0, l1, l2);
            },
            solver.quad().final_potential);
        track_mass(st);
        ReconResult rec2 = reconstruct_state(solver.sigma_space(), solver.v_space(), st.s, st.w,
                                             solver.problem());
        out.err_recon = error_reconstruction(solver.mesh(), rec2.coef, solver.problem(), spec.T,
                                             solver.quad().project);
    }
    out.err_sigma =
        error_sigma(solver.sigma_space(), st.s, solver.problem(), spec.T, solver.quad().project);
    out.err_state =
        error_state(solver.v_space(), st.w, solver.problem(), spec.T, solver.quad().project);
    return out;
}

RateTable evolution_block(const std::string& domain, const std::vector<int>& levels, double eps,
                          const std::string& tau_rule, double tau_fixed, double T,
                          bool postprocess) {
    RateTable table;
    table.error_names = {"sigma", "u"};
    if (postprocess) table.error_names.push_back("upost");
    table.errors.resize(table.error_names.size());
    for (const int level : levels) {
        EvolveSpec spec;
        spec.domain = domain;
        spec.level = level;
        spec.eps = eps;
        spec.tau_rule = tau_rule;
        spec.tau = tau_fixed;
        spec.T = T;
        spec.postprocess = postprocess;
        const EvolveOutcome o = run_evolution(spec);
        table.levels.push_back(level);
        table.h.push_back(o.h);
        table.errors[0].push_back(o.err_sigma);
        table.errors[1].push_back(o.err_state);
        if (postprocess) table.errors[2].push_back(o.err_recon);
    }
    return table;
}

double finest_rate(const RateTable& table, size_t column) {
    const auto r = table.rates();
    if (column >= r.size() || r[column].size() < 2) return std::nan("");
    return r[column].back();
}

// ---------------------------------------------------------------------------
// pinned tolerance checks
// ---------------------------------------------------------------------------
namespace {

CheckLine rate_check(const std::string& name, double got, double lo, double hi) {
    CheckLine l;
    l.name = name;
    l.pass = std::isfinite(got) && got >= lo && got <= hi;
    l.detail = fmt("rate %.3f, accepted [%.2f, %.2f]", got, lo, hi);
    return l;
}

// reference value matched within a factor of 1.5 either way
CheckLine abs_check(const std::string& name, double got, double ref) {
    CheckLine l;
    l.name = name;
    const double ratio = got / ref;
    l.pass = std::isfinite(got) && ratio <= 1.5 && ratio >= 1.0 / 1.5;
    l.detail = fmt("error %.3E, reference %.3E (accepted within x1.5)", got, ref);
    return l;
}

CheckLine runtime_check(const std::string& name, double seconds, double limit) {
    CheckLine l;
    l.name = name;
    l.pass = seconds <= limit;
    l.detail = fmt("%.1f s, limit %.0f s", seconds, limit);
    return l;
}

bool has_level(const RateTable& t, int level) {
    return !t.levels.empty() && t.levels.back() == level;
}

}  // namespace

std::vector<CheckLine> check_table1(const RateTable& block_fixed, const RateTable& block_h2,
                                    double seconds_fixed, double seconds_h2) {
    std::vector<CheckLine> out;
    out.push_back(rate_check("table1 fixed-tau EOC(sigma)", finest_rate(block_fixed, 0), 1.90, 2.10));
    out.push_back(rate_check("table1 fixed-tau EOC(u)", finest_rate(block_fixed, 1), 1.90, 2.10));
    out.push_back(rate_check("table1 tau=h^2 EOC(sigma)", finest_rate(block_h2, 0), 1.90, 2.10));
    out.push_back(rate_check("table1 tau=h^2 EOC(u)", finest_rate(block_h2, 1), 1.90, 2.10));
    if (seconds_fixed >= 0.0)
        out.push_back(runtime_check("table1 fixed-tau block runtime", seconds_fixed, 600.0));
    if (seconds_h2 >= 0.0)
        out.push_back(runtime_check("table1 tau=h^2 block runtime", seconds_h2, 600.0));
    if (has_level(block_fixed, 6)) {
        out.push_back(abs_check("table1 fixed-tau sigma error at level 6",
                                block_fixed.errors[0].back(), 2.68e-4));
        out.push_back(abs_check("table1 fixed-tau u error at level 6",
                                block_fixed.errors[1].back(), 3.11e-4));
    }
    if (has_level(block_h2, 5)) {
        out.push_back(
            abs_check("table1 tau=h^2 sigma error at level 5", block_h2.errors[0].back(), 6.71e-4));
        out.push_back(
            abs_check("table1 tau=h^2 u error at level 5", block_h2.errors[1].back(), 4.58e-4));
    }
    return out;
}

std::vector<CheckLine> check_table2(const RateTable& block_fixed, const RateTable& block_h4) {
    std::vector<CheckLine> out;
    out.push_back(rate_check("table2 fixed-tau EOC(sigma)", finest_rate(block_fixed, 0), 3.7, 4.1));
    out.push_back(rate_check("table2 fixed-tau EOC(u)", finest_rate(block_fixed, 1), 1.88, 2.08));
    out.push_back(
        rate_check("table2 fixed-tau EOC(upost)", finest_rate(block_fixed, 2), 3.75, 4.15));
    out.push_back(rate_check("table2 tau=h^4 EOC(sigma)", finest_rate(block_h4, 0), 3.7, 4.1));
    out.push_back(rate_check("table2 tau=h^4 EOC(u)", finest_rate(block_h4, 1), 1.88, 2.08));
    out.push_back(rate_check("table2 tau=h^4 EOC(upost)", finest_rate(block_h4, 2), 3.75, 4.15));
    return out;
}

std::vector<CheckLine> check_table3(const RateTable& block_fixed, const RateTable& block_h2) {
    std::vector<CheckLine> out;
    out.push_back(
        rate_check("table3 fixed-tau EOC(sigma)", finest_rate(block_fixed, 0), 0.28, 0.38));
    out.push_back(rate_check("table3 fixed-tau EOC(u)", finest_rate(block_fixed, 1), 0.64, 0.80));
    out.push_back(rate_check("table3 tau=h^2 EOC(sigma)", finest_rate(block_h2, 0), 0.28, 0.38));
    out.push_back(rate_check("table3 tau=h^2 EOC(u)", finest_rate(block_h2, 1), 0.64, 0.80));
    return out;
}

// ---------------------------------------------------------------------------
// steady fourth-order comparison
// ---------------------------------------------------------------------------
BiharmonicTables run_table5(const std::vector<int>& levels) {
    const auto exact = exact_lshape_singular();
    BiharmonicTables T;
    for (RateTable* t : {&T.mixed, &T.morley, &T.cr}) {
        t->error_names = {"sigma", "u"};
        t->errors.resize(2);
    }
    for (const int level : levels) {
        const TriMesh mesh = lshape_level(level);
        const double h = mesh.h_max();

        const BiharmonicErrors me = mixed_biharmonic_solve(mesh, exact);
        T.mixed.levels.push_back(level);
        T.mixed.h.push_back(h);
        T.mixed.errors[0].push_back(me.sigma);
        T.mixed.errors[1].push_back(me.state);

        const MorleyErrors mo = morley_biharmonic_solve(mesh, exact);
        T.morley.levels.push_back(level);
        T.morley.h.push_back(h);
        T.morley.errors[0].push_back(mo.sigma);
        T.morley.errors[1].push_back(mo.state);

        const CiarletRaviartErrors cr = ciarlet_raviart_solve(mesh, exact);
        T.cr.levels.push_back(level);
        T.cr.h.push_back(h);
        T.cr.errors[0].push_back(cr.sigma);
        T.cr.errors[1].push_back(cr.state);
    }
    return T;
}

std::vector<CheckLine> check_table5(const BiharmonicTables& t) {
    std::vector<CheckLine> out;
    out.push_back(rate_check("table5 mixed EOC(sigma)", finest_rate(t.mixed, 0), 0.26, 0.36));
    out.push_back(rate_check("table5 mixed EOC(u)", finest_rate(t.mixed, 1), 0.55, 0.79));
    out.push_back(rate_check("table5 morley EOC(sigma)", finest_rate(t.morley, 0), 0.26, 0.36));
    out.push_back(rate_check("table5 morley EOC(u)", finest_rate(t.morley, 1), 0.55, 0.79));

    CheckLine mono;
    mono.name = "table5 p1-p1 state error non-decreasing";
    mono.pass = true;
    const auto& e = t.cr.errors[1];
    for (size_t i = 1; i < e.size(); ++i)
        if (e[i] < e[i - 1] - 1e-12) mono.pass = false;
    mono.detail = e.empty() ? "no rows" : fmt("first %.3f, last %.3f", e.front(), e.back());
    out.push_back(mono);

    if (has_level(t.cr, 6)) {
        CheckLine big;
        big.name = "table5 p1-p1 state error exceeds 2.0 at level 6";
        big.pass = e.back() > 2.0;
        big.detail = fmt("error %.3f (reference 2.19)", e.back());
        out.push_back(big);
    }
    return out;
}

// ---------------------------------------------------------------------------
// eigenvalue comparison
// ---------------------------------------------------------------------------
namespace {

std::array<double, 5> five_values(std::vector<double> v, const char* what) {
    if (v.size() < 5)
        throw std::runtime_error(std::string(what) +
                                 ": eigensolver returned fewer than five converged values");
    std::array<double, 5> a;
    std::copy_n(v.begin(), 5, a.begin());
    return a;
}

// Reference eigenvalues of the L-shape benchmark (five smallest nonzero
// modes), used as acceptance targets.  Row i holds the targets for
// refinement level i + 3 of the hierarchy built by lshape_level: the
// reference sequence starts at the third level, which the mixed method
// reproduces to six digits.
constexpr double kRefMixed[5][5] = {
    {7.1399, 11.7918, 97.4396, 97.4396, 128.7678},
    {8.0275, 12.0402, 97.4113, 97.4113, 129.0807},
    {8.7681, 12.2025, 97.4103, 97.4103, 129.3118},
    {9.3379, 12.3072, 97.4132, 97.4132, 129.4666},
    {9.7498, 12.3742, 97.4252, 97.4252, 129.5834},
};
constexpr double kRefMorley[5][5] = {
    {6.6167, 10.8045, 81.4404, 84.6007, 107.3816},
    {7.5927, 11.6734, 92.7873, 93.7330, 122.6000},
    {8.4162, 12.0429, 96.2045, 96.4536, 127.5163},
    {9.0711, 12.2249, 97.1047, 97.1678, 128.9456},
    {9.5588, 12.3266, 97.3328, 97.3486, 129.3880},
};
constexpr double kRefCR[5][5] = {
    {2.3897, 13.0454, 107.4661, 107.5314, 146.6509},
    {2.2528, 12.6333, 99.9091, 99.9153, 133.9467},
    {2.2055, 12.5260, 98.0344, 98.0349, 130.7807},
    {2.1881, 12.4986, 97.5655, 97.5655, 129.9860},
    {2.1816, 12.4917, 97.4482, 97.4482, 129.7868},
};

void check_eigen_method(std::vector<CheckLine>& out, const EigenTable& t, const char* label,
                        const double ref[5][5]) {
    for (size_t i = 0; i < t.levels.size(); ++i) {
        const int level = t.levels[i];
        if (level < 3 || level > 7) continue;
        CheckLine l;
        l.name = std::string("table6 ") + label + " level " + std::to_string(level) +
                 " vs reference";
        double worst = 0.0;
        for (int j = 0; j < 5; ++j)
            worst = std::max(worst, std::abs(t.values[i][static_cast<size_t>(j)] -
                                             ref[level - 3][j]) /
                                        ref[level - 3][j]);
        l.pass = worst <= 1e-2;
        l.detail = fmt("max relative deviation %.2E (accepted 1.0E-02)", worst);
        out.push_back(l);
    }
}

}  // namespace

EigenTables run_table6(const std::vector<int>& levels, bool force_dense) {
    EigenTables T;
    for (const int level : levels) {
        const TriMesh mesh = lshape_level(level);
        const double h = mesh.h_max();

        const bool dense_mixed = force_dense || level <= 3;
        T.mixed.levels.push_back(level);
        T.mixed.h.push_back(h);
        T.mixed.values.push_back(
            five_values(mixed_biharmonic_eigs(mesh, 5, dense_mixed), "mixed pencil"));

        T.morley.levels.push_back(level);
        T.morley.h.push_back(h);
        T.morley.values.push_back(
            five_values(morley_biharmonic_eigs(mesh, 5, true), "morley pencil"));

        T.cr.levels.push_back(level);
        T.cr.h.push_back(h);
        T.cr.values.push_back(five_values(ciarlet_raviart_eigs(mesh, 5), "p1-p1 pencil"));
    }
    return T;
}

std::vector<CheckLine> check_table6(const EigenTables& t) {
    std::vector<CheckLine> out;
    check_eigen_method(out, t.mixed, "mixed", kRefMixed);
    check_eigen_method(out, t.morley, "morley", kRefMorley);
    check_eigen_method(out, t.cr, "p1-p1", kRefCR);

    // the symmetric domain carries an exactly degenerate third/fourth mode;
    // the mixed discretisation preserves the symmetry at every level
    for (size_t i = 0; i < t.mixed.levels.size(); ++i) {
        CheckLine l;
        l.name = "table6 mixed degenerate pair, level " + std::to_string(t.mixed.levels[i]);
        const double a = t.mixed.values[i][2], b = t.mixed.values[i][3];
        const double rel = std::abs(a - b) / std::max(std::abs(a), 1e-30);
        l.pass = rel <= 1e-6;
        l.detail = fmt("split %.2E relative (accepted 1.0E-06)", rel);
        out.push_back(l);
    }
    // the nonconforming comparisons split the pair at coarse levels; report
    // the splits without gating
    for (size_t i = 0; i < t.morley.levels.size(); ++i) {
        CheckLine l;
        l.name = "table6 morley pair split, level " + std::to_string(t.morley.levels[i]);
        l.gated = false;
        const double a = t.morley.values[i][2], b = t.morley.values[i][3];
        l.pass = true;
        l.detail = fmt("split %.2E relative", std::abs(a - b) / std::max(std::abs(a), 1e-30));
        out.push_back(l);
    }
    return out;
}

std::string eigen_csv(const EigenTable& t) {
    std::ostringstream os;
    os << "mesh,h,lambda1,lambda2,lambda3,lambda4,lambda5\n";
    char buf[64];
    for (size_t i = 0; i < t.levels.size(); ++i) {
        os << t.levels[i] << "," << format_sci(t.h[i]);
        for (int j = 0; j < 5; ++j) {
            std::snprintf(buf, sizeof(buf), ",%.4f", t.values[i][static_cast<size_t>(j)]);
            os << buf;
        }
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// two-drop simulation
// ---------------------------------------------------------------------------
int positive_region_components(const TriMesh& mesh, const VSpace& vs, const Eigen::VectorXd& w,
                               int grid_n) {
    double x0 = std::numeric_limits<double>::max(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& p : mesh.xy) {
        x0 = std::min(x0, p.x());
        x1 = std::max(x1, p.x());
        y0 = std::min(y0, p.y());
        y1 = std::max(y1, p.y());
    }
    struct TriGeo {
        double bx0, bx1, by0, by1;
        Eigen::Vector2d p0;
        Eigen::Matrix2d inv;  // maps (p - p0) to (l1, l2)
    };
    std::vector<TriGeo> geo(static_cast<size_t>(mesh.num_tris()));
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const auto& v = mesh.tri[static_cast<size_t>(t)];
        const Eigen::Vector2d a = mesh.xy[static_cast<size_t>(v[0])];
        const Eigen::Vector2d b = mesh.xy[static_cast<size_t>(v[1])];
        const Eigen::Vector2d c = mesh.xy[static_cast<size_t>(v[2])];
        TriGeo& g = geo[static_cast<size_t>(t)];
        g.bx0 = std::min({a.x(), b.x(), c.x()});
        g.bx1 = std::max({a.x(), b.x(), c.x()});
        g.by0 = std::min({a.y(), b.y(), c.y()});
        g.by1 = std::max({a.y(), b.y(), c.y()});
        g.p0 = a;
        Eigen::Matrix2d E;
        E.col(0) = b - a;
        E.col(1) = c - a;
        g.inv = E.inverse();
    }
    const double dx = (x1 - x0) / grid_n, dy = (y1 - y0) / grid_n;
    std::vector<char> pos(static_cast<size_t>(grid_n) * static_cast<size_t>(grid_n), 0);
    for (int iy = 0; iy < grid_n; ++iy)
        for (int ix = 0; ix < grid_n; ++ix) {
            const Eigen::Vector2d p(x0 + (ix + 0.5) * dx, y0 + (iy + 0.5) * dy);
            for (int t = 0; t < mesh.num_tris(); ++t) {
                const TriGeo& g = geo[static_cast<size_t>(t)];
                if (p.x() < g.bx0 || p.x() > g.bx1 || p.y() < g.by0 || p.y() > g.by1) continue;
                const Eigen::Vector2d l12 = g.inv * (p - g.p0);
                const double l0 = 1.0 - l12[0] - l12[1];
                if (l12[0] < -1e-10 || l12[1] < -1e-10 || l0 < -1e-10) continue;
                if (vs.eval(w, t, l0, l12[0], l12[1]) > 0.0)
                    pos[static_cast<size_t>(iy) * static_cast<size_t>(grid_n) +
                        static_cast<size_t>(ix)] = 1;
                break;
            }
        }
    // 8-neighbour flood fill over the positive cells
    std::vector<char> seen(pos.size(), 0);
    std::vector<int> stack;
    int components = 0;
    for (int start = 0; start < static_cast<int>(pos.size()); ++start) {
        if (!pos[static_cast<size_t>(start)] || seen[static_cast<size_t>(start)]) continue;
        ++components;
        stack.assign(1, start);
        seen[static_cast<size_t>(start)] = 1;
        while (!stack.empty()) {
            const int cur = stack.back();
            stack.pop_back();
            const int cy = cur / grid_n, cx = cur % grid_n;
            for (int oy = -1; oy <= 1; ++oy)
                for (int ox = -1; ox <= 1; ++ox) {
                    if (ox == 0 && oy == 0) continue;
                    const int nx = cx + ox, ny = cy + oy;
                    if (nx < 0 || ny < 0 || nx >= grid_n || ny >= grid_n) continue;
                    const int id = ny * grid_n + nx;
                    if (!pos[static_cast<size_t>(id)] || seen[static_cast<size_t>(id)]) continue;
                    seen[static_cast<size_t>(id)] = 1;
                    stack.push_back(id);
                }
        }
    }
    return components;
}

namespace {

void write_snapshot_files(const std::string& out_dir, double time, const MixedCH& solver,
                          const MixedCH::Pair& st, bool csv_snapshots) {
    const TriMesh& mesh = solver.mesh();
    std::vector<std::array<double, 3>> u_corner(static_cast<size_t>(mesh.num_tris()));
    std::vector<std::array<double, 3>> sig_cell(static_cast<size_t>(mesh.num_tris()));
    for (int t = 0; t < mesh.num_tris(); ++t) {
        for (int a = 0; a < 3; ++a)
            u_corner[static_cast<size_t>(t)][static_cast<size_t>(a)] = st.w[3 * t + a];
        const Eigen::Matrix2d s =
            solver.sigma_space().eval(st.s, t, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
        sig_cell[static_cast<size_t>(t)] = {s(0, 0), s(0, 1), s(1, 1)};
    }
    char tag[32];
    std::snprintf(tag, sizeof(tag), "%g", time);
    write_vtk_snapshot(out_dir + "/snapshot_t" + tag + ".vtk", mesh, u_corner, sig_cell);
    if (csv_snapshots)
        write_xyu_csv(out_dir + "/snapshot_t" + tag + ".csv", mesh, u_corner);
}

}  // namespace

CoalesceResult run_coalescence(const std::string& out_dir, double eps, double tau, double T,
                               const std::vector<double>& snapshot_times, bool csv_snapshots) {
    TriMesh mesh = TriMesh::structured_square(20);
    const CHCase cas = case_two_drops(eps);

    const int N = step_count(T, tau);
    tau = T / N;

    MixedCH solver(std::move(mesh), cas);
    MixedCH::Pair st = solver.init_from_u0();
    solver.prepare_stepping(tau);

    CoalesceResult res;
    const double mass0 = solver.state_integral(st.w);
    res.mass_history.push_back({0.0, 0.0, mass0});
    res.components_begin = positive_region_components(solver.mesh(), solver.v_space(), st.w);
    res.components_end = res.components_begin;

    auto want_snapshot = [&snapshot_times, tau](double time) {
        for (const double s : snapshot_times)
            if (std::abs(time - s) <= 0.5 * tau) return true;
        return false;
    };
    const bool writing = !out_dir.empty();
    if (writing && want_snapshot(0.0)) write_snapshot_files(out_dir, 0.0, solver, st, csv_snapshots);

    double mass_prev = mass0;
    for (int n = 1; n <= N; ++n) {
        const double time = static_cast<double>(n) * tau;
        MixedCH::Pair next;
        try {
            next = solver.step(st, time);
        } catch (const std::exception&) {
            res.finite = false;
            break;
        }
        // the factorisation itself never diagnoses overflow of the lagged
        // potential, so non-finite values must be caught explicitly; the last
        // finite state is kept for the final snapshot
        if (!next.w.allFinite() || !next.s.allFinite()) {
            res.finite = false;
            break;
        }
        st = next;
        res.steps_completed = n;
        const double m = solver.state_integral(st.w);
        res.max_step_drift = std::max(res.max_step_drift, std::abs(m - mass_prev));
        res.cumulative_drift = std::max(res.cumulative_drift, std::abs(m - mass0));
        mass_prev = m;
        res.mass_history.push_back({static_cast<double>(n), time, m});
        if (writing && want_snapshot(time))
            write_snapshot_files(out_dir, time, solver, st, csv_snapshots);
    }
    res.components_end = positive_region_components(solver.mesh(), solver.v_space(), st.w);
    if (writing) write_mass_history(out_dir + "/mass_history.csv", res.mass_history);
    return res;
}

// ---------------------------------------------------------------------------
// inf-sup sweep and projection accuracy
// ---------------------------------------------------------------------------
std::vector<InfSupRow> run_infsup(const std::vector<int>& levels) {
    std::vector<InfSupRow> rows;
    for (const int level : levels) {
        InfSupRow r;
        r.level = level;
        r.beta = infsup_constant(square_level(level));
        rows.push_back(r);
    }
    return rows;
}

std::vector<CheckLine> check_infsup(const std::vector<InfSupRow>& rows) {
    std::vector<CheckLine> out;
    CheckLine positive;
    positive.name = "inf-sup constants positive";
    positive.pass = !rows.empty();
    double lo = std::numeric_limits<double>::max(), hi = 0.0;
    for (const auto& r : rows) {
        if (!(r.beta > 0.0)) positive.pass = false;
        lo = std::min(lo, r.beta);
        hi = std::max(hi, r.beta);
    }
    positive.detail = rows.empty() ? "no rows" : fmt("min %.4f, max %.4f", lo, hi);
    out.push_back(positive);

    CheckLine stable;
    stable.name = "inf-sup variation below 25%";
    stable.pass = positive.pass && (hi - lo) / hi < 0.25;
    stable.detail = rows.empty() ? "no rows" : fmt("relative spread %.1f%%", 100.0 * (hi - lo) / hi);
    out.push_back(stable);
    return out;
}

RateTable projection_rates(const std::vector<int>& levels) {
    RateTable table;
    table.error_names = {"sigma", "u", "total"};
    table.errors.resize(3);
    for (const int level : levels) {
        TriMesh mesh = square_level(level);
        const double h = mesh.h_max();
        MixedCH solver(std::move(mesh), case_square_trig(1.0));
        double rho = 0.0;
        const MixedCH::Pair p = solver.project_exact(0.0, &rho);
        const double es =
            error_sigma(solver.sigma_space(), p.s, solver.problem(), 0.0, solver.quad().project);
        const double eu =
            error_state(solver.v_space(), p.w, solver.problem(), 0.0, solver.quad().project);
        table.levels.push_back(level);
        table.h.push_back(h);
        table.errors[0].push_back(es);
        table.errors[1].push_back(eu);
        table.errors[2].push_back(es + eu);
    }
    return table;
}

std::vector<CheckLine> check_projection(const RateTable& t) {
    std::vector<CheckLine> out;
    out.push_back(
        rate_check("projection combined error EOC (finest pair)", finest_rate(t, 2), 1.85, 2.15));
    const auto r = t.rates();
    for (size_t i = 1; i + 1 < t.levels.size(); ++i) {
        CheckLine l;
        l.name = "projection EOC levels " + std::to_string(t.levels[i - 1]) + "->" +
                 std::to_string(t.levels[i]);
        l.gated = false;
        l.pass = true;
        l.detail = fmt("rate %.3f", r[2][i]);
        out.push_back(l);
    }
    return out;
}

std::string render_checks(const std::vector<CheckLine>& lines) {
    std::ostringstream os;
    for (const auto& l : lines) {
        const char* tag = l.gated ? (l.pass ? "PASS" : "FAIL") : "REPORT";
        os << tag << " " << l.name << ": " << l.detail << "\n";
    }
    return os.str();
}

bool all_pass(const std::vector<CheckLine>& lines) {
    for (const auto& l : lines)
        if (l.gated && !l.pass) return false;
    return true;
}

}  // namespace chfem

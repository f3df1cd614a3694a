// ============================================================================
// io.hpp — CSV/VTK artifact writers, config parsing, output-dir resolution.
//
// All writers format numbers through fixed printf-style patterns so repeated
// runs with identical inputs produce byte-identical files.
// ============================================================================
#pragma once

#include "chfem/mesh.hpp"

#include <Eigen/Dense>
#include <array>
#include <map>
#include <string>
#include <vector>

namespace chfem {

// %.2E (three significant digits, matching the convergence tables)
std::string format_sci(double v);
// %.2f, or "--" for NaN (first row of a rate column)
std::string format_rate(double v);

// one block of a convergence study
struct RateTable {
    std::vector<std::string> error_names;   // e.g. {"sigma", "u"} or {"sigma","u","upost"}
    std::vector<int> levels;
    std::vector<double> h;
    // errors[c][row] for column c
    std::vector<std::vector<double>> errors;

    // log2(e_prev / e_this) per column; NaN in the first row
    std::vector<std::vector<double>> rates() const;
    // header "mesh,h,err_<n0>,rate_<n0>,..." plus one line per level.
    // include_rates=false drops every rate column (used where a method has no
    // meaningful convergence order to report).
    std::string to_csv(bool include_rates = true) const;
};

void write_text(const std::string& path, const std::string& content);

// "step,time,mass" rows
void write_mass_history(const std::string& path,
                        const std::vector<std::array<double, 3>>& rows);

// Legacy-format VTK unstructured grid with per-cell corner duplication so a
// discontinuous P1 state is rendered faithfully: 3T points carrying the state
// as POINT_DATA, T triangles carrying flux components as CELL_DATA.
void write_vtk_snapshot(const std::string& path, const TriMesh& mesh,
                        const std::vector<std::array<double, 3>>& u_corner,
                        const std::vector<std::array<double, 3>>& sigma_cell);

// plain "x,y,u" table sampled at cell corners (snapshot fallback)
void write_xyu_csv(const std::string& path, const TriMesh& mesh,
                   const std::vector<std::array<double, 3>>& u_corner);

// "key=value" lines; blank lines and '#' comments ignored; values keep
// internal spaces but are trimmed at both ends. Throws std::runtime_error
// with a line diagnostic on malformed input.
std::map<std::string, std::string> parse_config(const std::string& path);

// --out flag beats the CHFEM_OUT environment variable beats "./out";
// the directory is created if absent.
std::string resolve_output_dir(const std::string& flag_value);

void ensure_dir(const std::string& path);

}  // namespace chfem

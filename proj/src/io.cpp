#include "chfem/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chfem {

std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2E", v);
    return buf;
}

std::string format_rate(double v) {
    if (std::isnan(v)) return "--";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::vector<std::vector<double>> RateTable::rates() const {
    std::vector<std::vector<double>> r(errors.size());
    for (size_t c = 0; c < errors.size(); ++c) {
        r[c].assign(errors[c].size(), std::nan(""));
        for (size_t i = 1; i < errors[c].size(); ++i)
            r[c][i] = std::log2(errors[c][i - 1] / errors[c][i]);
    }
    return r;
}

std::string RateTable::to_csv(bool include_rates) const {
    std::ostringstream os;
    os << "mesh,h";
    for (const auto& name : error_names) {
        os << ",err_" << name;
        if (include_rates) os << ",rate_" << name;
    }
    os << "\n";
    const auto r = rates();
    for (size_t i = 0; i < levels.size(); ++i) {
        os << levels[i] << "," << format_sci(h[i]);
        for (size_t c = 0; c < errors.size(); ++c) {
            os << "," << format_sci(errors[c][i]);
            if (include_rates) os << "," << format_rate(r[c][i]);
        }
        os << "\n";
    }
    return os.str();
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
}

void write_mass_history(const std::string& path,
                        const std::vector<std::array<double, 3>>& rows) {
    std::ostringstream os;
    os << "step,time,mass\n";
    char buf[80];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.6f,%.12E\n", static_cast<int>(r[0]), r[1], r[2]);
        os << buf;
    }
    write_text(path, os.str());
}

void write_vtk_snapshot(const std::string& path, const TriMesh& mesh,
                        const std::vector<std::array<double, 3>>& u_corner,
                        const std::vector<std::array<double, 3>>& sigma_cell) {
    const int T = mesh.num_tris();
    std::ostringstream os;
    char buf[128];
    os << "# vtk DataFile Version 3.0\n";
    os << "phase field snapshot\n";
    os << "ASCII\n";
    os << "DATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << 3 * T << " double\n";
    for (int t = 0; t < T; ++t)
        for (int a = 0; a < 3; ++a) {
            const auto& p = mesh.xy[static_cast<size_t>(
                mesh.tri[static_cast<size_t>(t)][static_cast<size_t>(a)])];
            std::snprintf(buf, sizeof(buf), "%.9G %.9G 0\n", p.x(), p.y());
            os << buf;
        }
    os << "CELLS " << T << " " << 4 * T << "\n";
    for (int t = 0; t < T; ++t) os << "3 " << 3 * t << " " << 3 * t + 1 << " " << 3 * t + 2 << "\n";
    os << "CELL_TYPES " << T << "\n";
    for (int t = 0; t < T; ++t) os << "5\n";
    os << "POINT_DATA " << 3 * T << "\n";
    os << "SCALARS u double 1\nLOOKUP_TABLE default\n";
    for (int t = 0; t < T; ++t)
        for (int a = 0; a < 3; ++a) {
            std::snprintf(buf, sizeof(buf), "%.9G\n",
                          u_corner[static_cast<size_t>(t)][static_cast<size_t>(a)]);
            os << buf;
        }
    os << "CELL_DATA " << T << "\n";
    const char* comp[3] = {"sigma_xx", "sigma_xy", "sigma_yy"};
    for (int c = 0; c < 3; ++c) {
        os << "SCALARS " << comp[c] << " double 1\nLOOKUP_TABLE default\n";
        for (int t = 0; t < T; ++t) {
            std::snprintf(buf, sizeof(buf), "%.9G\n",
                          sigma_cell[static_cast<size_t>(t)][static_cast<size_t>(c)]);
            os << buf;
        }
    }
    write_text(path, os.str());
}

void write_xyu_csv(const std::string& path, const TriMesh& mesh,
                   const std::vector<std::array<double, 3>>& u_corner) {
    std::ostringstream os;
    os << "x,y,u\n";
    char buf[128];
    for (int t = 0; t < mesh.num_tris(); ++t)
        for (int a = 0; a < 3; ++a) {
            const auto& p = mesh.xy[static_cast<size_t>(
                mesh.tri[static_cast<size_t>(t)][static_cast<size_t>(a)])];
            std::snprintf(buf, sizeof(buf), "%.9G,%.9G,%.9G\n", p.x(), p.y(),
                          u_corner[static_cast<size_t>(t)][static_cast<size_t>(a)]);
            os << buf;
        }
    write_text(path, os.str());
}

namespace {
std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}
}  // namespace

std::map<std::string, std::string> parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::map<std::string, std::string> cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty key");
        cfg[key] = val;
    }
    return cfg;
}

std::string resolve_output_dir(const std::string& flag_value) {
    std::string dir = flag_value;
    if (dir.empty()) {
        const char* env = std::getenv("CHFEM_OUT");
        if (env && *env) dir = env;
    }
    if (dir.empty()) dir = "./out";
    ensure_dir(dir);
    return dir;
}

void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw std::runtime_error("cannot create directory " + path + ": " + ec.message());
}

}  // namespace chfem

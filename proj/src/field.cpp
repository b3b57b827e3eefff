#include "cosmon/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cosmon {

SpacetimeField SpacetimeField::zeros(double t_period, std::size_t n_t,
                                     std::vector<double> r_grid) {
    SpacetimeField f;
    f.t_period = t_period;
    f.n_t = n_t;
    f.r = std::move(r_grid);
    f.values.assign(f.n_t * f.r.size(), cplx(0.0, 0.0));
    return f;
}

std::vector<double> SpacetimeField::staggered_grid(double r_max, std::size_t n_r, double offset) {
    std::vector<double> g(n_r);
    const double dr = r_max / static_cast<double>(n_r);
    for (std::size_t j = 0; j < n_r; ++j) g[j] = (static_cast<double>(j) + offset) * dr;
    return g;
}

bool SpacetimeField::is_staggered_uniform(double tol) const {
    if (r.size() < 2) return false;
    const double dr = r[1] - r[0];
    if (std::abs(r[0] - 0.5 * dr) > tol * dr) return false;
    for (std::size_t j = 1; j < r.size(); ++j)
        if (std::abs(r[j] - r[j - 1] - dr) > tol * dr) return false;
    return true;
}

double SpacetimeField::dr() const {
    if (!is_staggered_uniform())
        throw GridMismatch("SpacetimeField: staggered uniform r grid required");
    return r[1] - r[0];
}

double SpacetimeField::weighted_norm_sq() const {
    // midpoint rule in r on staggered-uniform grids, trapezoid otherwise
    const std::size_t nr = r.size();
    std::vector<double> wr(nr, 0.0);
    if (is_staggered_uniform()) {
        const double h = r[1] - r[0];
        for (std::size_t j = 0; j < nr; ++j) wr[j] = r[j] * h;
    } else {
        for (std::size_t j = 0; j < nr; ++j) {
            const double left = j == 0 ? r[0] : 0.5 * (r[j] - r[j - 1]);
            const double right = j + 1 == nr ? 0.0 : 0.5 * (r[j + 1] - r[j]);
            wr[j] = r[j] * (left + right);
        }
    }
    double acc = 0.0;
    for (std::size_t it = 0; it < n_t; ++it)
        for (std::size_t j = 0; j < nr; ++j)
            acc += std::norm(at(it, j)) * wr[j];
    return acc * dt();
}

bool SpacetimeField::same_grid(const SpacetimeField& o, double tol) const {
    if (n_t != o.n_t || r.size() != o.r.size()) return false;
    if (std::abs(t_period - o.t_period) > tol * (1.0 + std::abs(t_period))) return false;
    for (std::size_t j = 0; j < r.size(); ++j)
        if (std::abs(r[j] - o.r[j]) > tol * (1.0 + std::abs(r[j]))) return false;
    return true;
}

void write_field_csv(const SpacetimeField& u, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f, "t,r,re,im\n");
    for (std::size_t it = 0; it < u.n_t; ++it)
        for (std::size_t j = 0; j < u.n_r(); ++j)
            std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", u.t(it), u.r[j],
                         u.at(it, j).real(), u.at(it, j).imag());
    std::fclose(f);
}

void write_field_binary(const SpacetimeField& u, const std::string& json_path,
                        const std::string& bin_path) {
    {
        std::ofstream js(json_path);
        if (!js) throw std::runtime_error("cannot open " + json_path);
        js << "{\n"
           << "  \"format\": \"cosmon-field-v1\",\n"
           << "  \"n_t\": " << u.n_t << ",\n"
           << "  \"n_r\": " << u.n_r() << ",\n"
           << "  \"t_period\": " << u.t_period << ",\n"
           << "  \"r_first\": " << (u.r.empty() ? 0.0 : u.r.front()) << ",\n"
           << "  \"r_last\": " << (u.r.empty() ? 0.0 : u.r.back()) << ",\n"
           << "  \"layout\": \"t-major, interleaved re,im, float64 little-endian; "
              "preceded by the r grid as n_r float64\"\n"
           << "}\n";
    }
    std::ofstream bin(bin_path, std::ios::binary);
    if (!bin) throw std::runtime_error("cannot open " + bin_path);
    bin.write(reinterpret_cast<const char*>(u.r.data()),
              static_cast<std::streamsize>(u.r.size() * sizeof(double)));
    for (const cplx& v : u.values) {
        const double re = v.real(), im = v.imag();
        bin.write(reinterpret_cast<const char*>(&re), sizeof(double));
        bin.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
}

} // namespace cosmon

#pragma once
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cosmon {

using cplx = std::complex<double>;

// Complex field u(t, r) for one angular mode on a tensor-product grid.
// t is uniform with period t_period (t_j = j * dt); r is strictly increasing
// and positive.  The L2 weight is r dr dt throughout (the 2*pi angular factor
// is dropped as an overall constant).
struct SpacetimeField {
    double t_period = 0.0;
    std::size_t n_t = 0;
    std::vector<double> r;
    std::vector<cplx> values; // row-major, values[it * n_r + ir]

    std::size_t n_r() const { return r.size(); }
    double dt() const { return t_period / static_cast<double>(n_t); }
    double t(std::size_t it) const { return dt() * static_cast<double>(it); }

    cplx& at(std::size_t it, std::size_t ir) { return values[it * r.size() + ir]; }
    const cplx& at(std::size_t it, std::size_t ir) const { return values[it * r.size() + ir]; }

    static SpacetimeField zeros(double t_period, std::size_t n_t, std::vector<double> r_grid);

    // staggered uniform grid r_j = (j + offset) * dr covering (0, r_max)
    static std::vector<double> staggered_grid(double r_max, std::size_t n_r, double offset = 0.5);
    bool is_staggered_uniform(double tol = 1e-12) const;
    double dr() const; // throws unless staggered uniform

    // sum |u|^2 r dr dt (midpoint in r, exact lattice sum in t)
    double weighted_norm_sq() const;

    bool same_grid(const SpacetimeField& other, double tol = 1e-12) const;
};

struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSV with header t,r,re,im
void write_field_csv(const SpacetimeField& u, const std::string& path);

// JSON header + little-endian float64 binary (re,im interleaved, t-major)
void write_field_binary(const SpacetimeField& u, const std::string& json_path,
                        const std::string& bin_path);

} // namespace cosmon

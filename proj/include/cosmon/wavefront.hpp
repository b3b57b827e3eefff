#pragma once
#include <string>
#include <vector>

#include "cosmon/background.hpp"
#include "cosmon/modes.hpp"
#include "cosmon/rays.hpp"

namespace cosmon::wavefront {

// Gaussian window for the time-frequency energy map; widths in physical
// units, centers every `stride` grid points.
struct WindowSpec {
    double sigma_t = 1.0;
    double sigma_r = 0.375;
    std::size_t stride_t = 16;
    std::size_t stride_r = 32;
    double cell_floor_rel = 1e-7; // cells below this fraction of the max are dropped
};

struct PhaseCell {
    double t, r, lambda, xi;
    double energy;
};

struct PhaseEnergyMap {
    WindowSpec window;
    std::vector<PhaseCell> cells;   // above-floor cells only
    double total_energy = 0.0;      // all cells, before the floor
    double max_cell_energy = 0.0;
    std::vector<double> t_centers, r_centers;
    std::vector<std::string> warnings;
};

// Windowed-Fourier energy of sqrt(r) u (flat-measure Parseval then equals the
// r dr dt norm): Gaussian window, per-center 2-d FFT, frame-normalized so the
// cell energies sum to |u|^2 within the frame-bound tolerance (about 2%) for
// fields supported away from the radial edges.  OpenMP across centers; the
// serial variant is the reference implementation.
PhaseEnergyMap phase_energy(const SpacetimeField& u, const WindowSpec& window);
PhaseEnergyMap phase_energy_serial(const SpacetimeField& u, const WindowSpec& window);

void write_phase_map_csv(const PhaseEnergyMap& map, const std::string& path);
// one heat-map panel per t-center: energy over (r, lambda), summed over xi
void write_phase_map_svg(const PhaseEnergyMap& map, const std::string& path,
                         std::size_t max_panels = 8);

struct Region {
    double t_lo, t_hi; // wrapped t interval (t_lo may exceed t_hi)
    double r_lo, r_hi;
    bool contains(double t, double r, double period) const;
};

struct FlowoutThresholds {
    double rel_threshold = 1e-3;   // classify cells above this fraction of the classified max
    double lambda_min = 0.0;       // additionally require |lambda| > max(5|k|, lambda_min)
    double r_max_classify = 0.0;   // restrict the verdict to r below this (the K region)
    double tube_pos_mult = 3.0;    // position tube radius in window widths
    double tube_angle_deg = 15.0;  // direction tolerance in the (lambda, xi) plane
};

struct FlowoutVerdict {
    double off_fraction = 1.0; // off-flowout energy share among classified cells
    double on_energy = 0.0, off_energy = 0.0;
    std::size_t n_on = 0, n_off = 0;
    bool vacuous = false; // nothing above threshold to classify
    std::vector<std::string> warnings;
};

// Classify above-threshold cells of u's map (outside the forcing region,
// conic tube around the forward flowout rays).  Cells inside the forcing
// region are excluded rather than classified: there the map cannot separate
// u's energy from f's.
FlowoutVerdict flowout_consistency(const PhaseEnergyMap& map, double t_period, int k,
                                   const std::vector<rays::RayPath>& flowout,
                                   const Region& f_support, const FlowoutThresholds& thresholds);

// Seeds on Sigma from the above-threshold cells of f's phase-energy map:
// keeps cells within the direction tolerance of the cone and snaps xi onto it.
std::vector<PhasePoint> seeds_from_map(const PhaseEnergyMap& map, const BackgroundParams& bg,
                                       const FlowoutThresholds& thresholds,
                                       const Region& f_support, double t_period);

struct EllipticProbeReport {
    double mass_fraction = 0.0; // |u|^2 share in { r < a (1 - delta) }
    std::vector<double> t_profile; // per-t elliptic mass
    modes::UniqueContinuationReport uc; // contrapositive ODE check on a lambda slice
};

EllipticProbeReport elliptic_support_probe(const SpacetimeField& u, const BackgroundParams& bg,
                                           const ModeParams& mode, double delta,
                                           double lambda_slice = 1.0);

// wave packet envelope * e^{i (lambda0 t + xi0 r)} on the grid of `like`
SpacetimeField make_packet(const SpacetimeField& like, double t0, double r0, double sigma_t,
                           double sigma_r, double lambda0, double xi0);

} // namespace cosmon::wavefront

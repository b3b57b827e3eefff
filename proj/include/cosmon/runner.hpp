#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "cosmon/background.hpp"
#include "cosmon/modes.hpp"
#include "cosmon/solver.hpp"
#include "cosmon/wavefront.hpp"

namespace cosmon::runner {

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// exit statuses of the batch front end
enum ExitStatus : int {
    kOk = 0,
    kInvariantFailure = 1,
    kSchemaViolation = 2,
    kNumericalFailure = 3,
};

struct TraceConfig {
    std::vector<PhasePoint> seeds;
    double s_max = 10.0;
    int n_samples = 81;
};

struct EscapeConfig {
    rays::EscapeBox K{-0.5, 0.5, 0.5, 1.5};
    double R = 2.0;
};

struct ModeExperimentConfig {
    double lambda = 1.0;
    double r_lo = 0.1, r_hi = 10.0;
    int draws = 50;
    int uc_trials = 100;
};

struct SourceConfig {
    double t0 = 8.0, r0 = 2.0;
    double half_t = 0.22, half_r = 0.22; // compact bump half-widths
};

struct WavefrontConfig {
    // calibrated against the default 512 x 512 solve and then frozen
    wavefront::WindowSpec window{1.2, 0.5, 16, 32, 1e-7};
    wavefront::FlowoutThresholds thresholds{1e-3, 15.0, 0.0, 3.0, 15.0};
    double control_t_offset = -8.0;
    double control_r0 = 2.5;
    double control_lambda = -18.84955592153876; // -2 pi 96 / 32, on the default lattice
};

struct RunConfig {
    BackgroundParams bg{1.0};
    ModeParams mode{0, 0.0};
    solver::GridSpec grid{32.0, 512, 6.0, 512};
    double absorber_R = 3.3;
    double r0_source = 2.5;
    uint64_t seed = 12345;

    double ray_tol = 1e-10;
    double ode_tol = 1e-12;
    double residual_tol = 1e-4;
    double elliptic_mass_min = 1e-3;
    double off_flowout_max = 0.05;

    TraceConfig trace;
    EscapeConfig escape;
    ModeExperimentConfig mode_exp;
    modes::CounterexampleGrids cex_grids{200, 96, 60.0, 1024, 3};
    int coercivity_trials = 100;
    SourceConfig source;
    WavefrontConfig wf;
};

RunConfig load_config(const std::string& path); // throws SchemaError

struct Check {
    std::string name;
    bool pass;
    double value;
    double threshold;
};

struct RunResult {
    std::vector<Check> checks;
    int status = kOk;
    bool all_pass() const {
        for (const Check& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Dispatch one experiment (trace | escape | mode | counterexample | coercivity |
// solve | wavefront | all), writing artifacts and report.json under out_dir.
int run(const std::string& experiment, const std::string& config_path,
        const std::string& out_dir, int threads, std::optional<uint64_t> seed_override);

} // namespace cosmon::runner

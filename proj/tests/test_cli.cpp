#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cosmon/runner.hpp"

using namespace cosmon;
using namespace cosmon::runner;
namespace fs = std::filesystem;

namespace {

fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream(p) << body;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSmallConfig = R"json({
  "background": {"a_rot": 1.0},
  "mode": {"k": 0, "m": 0.0},
  "grid": {"t_period": 32.0, "n_t": 64, "n_r": 192, "r_max": 6.0},
  "absorber": {"R": 3.3, "r0_source": 2.5},
  "seed": 777,
  "trace": {"seeds": [[0, 1, 0, 1, 0, 0]], "s_max": 2.0, "n_samples": 9},
  "escape": {"K": {"t_lo": 0.0, "t_hi": 0.0, "r_lo": 1.0, "r_hi": 1.0}, "R": 2.0},
  "mode_experiment": {"draws": 5, "uc_trials": 5},
  "coercivity": {"trials": 5}
})json";

} // namespace

TEST_CASE("missing or malformed configs are schema violations") {
    CHECK(run("trace", "/nonexistent/config.json", "/tmp/cosmon_test_out", 1, {}) ==
          kSchemaViolation);
    const fs::path bad = write_config("cosmon_bad.json", "{ not json");
    CHECK(run("trace", bad.string(), "/tmp/cosmon_test_out", 1, {}) == kSchemaViolation);
    const fs::path wrong = write_config("cosmon_wrong.json", R"({"grid": {"n_t": 100}})");
    CHECK(run("trace", wrong.string(), "/tmp/cosmon_test_out", 1, {}) == kSchemaViolation);
    CHECK(run("not-an-experiment", write_config("cosmon_ok0.json", "{}").string(),
              "/tmp/cosmon_test_out", 1, {}) == kSchemaViolation);
}

TEST_CASE("cross-field constraints are revalidated at load") {
    // R too small for 1 - a^2/R^2 > 9/10
    const fs::path p1 =
        write_config("cosmon_c1.json", R"({"absorber": {"R": 3.0, "r0_source": 2.0}})");
    CHECK_THROWS_AS(load_config(p1.string()), SchemaError);
    // bump leaking past r0_source
    const fs::path p2 = write_config(
        "cosmon_c2.json", R"({"solve": {"source": {"r0": 2.45, "half_r": 0.2}}})");
    CHECK_THROWS_AS(load_config(p2.string()), SchemaError);
    // r_max must clear R + 2
    const fs::path p3 = write_config("cosmon_c3.json", R"({"grid": {"r_max": 5.0}})");
    CHECK_THROWS_AS(load_config(p3.string()), SchemaError);
}

TEST_CASE("trace experiment writes rays.csv with the documented seed row") {
    const fs::path cfg = write_config("cosmon_trace.json", kSmallConfig);
    const fs::path out = fs::temp_directory_path() / "cosmon_trace_out";
    fs::remove_all(out);
    CHECK(run("trace", cfg.string(), out.string(), 1, {}) == kOk);
    CHECK(fs::exists(out / "rays.csv"));
    CHECK(fs::exists(out / "report.json"));
    const std::string rays = slurp(out / "rays.csv");
    CHECK(rays.rfind("s,t,r,phi,lambda,xi,eta\n", 0) == 0);
    // r(1) = sqrt(5) for the documented seed
    CHECK(rays.find("2.2360679") != std::string::npos);
}

TEST_CASE("escape, mode and coercivity experiments run green on the small config") {
    const fs::path cfg = write_config("cosmon_small.json", kSmallConfig);
    const fs::path out = fs::temp_directory_path() / "cosmon_small_out";
    fs::remove_all(out);
    CHECK(run("escape", cfg.string(), out.string(), 1, {}) == kOk);
    CHECK(run("mode", cfg.string(), out.string(), 1, {}) == kOk);
    CHECK(run("coercivity", cfg.string(), out.string(), 1, {}) == kOk);
    CHECK(fs::exists(out / "escape.json"));
    CHECK(fs::exists(out / "mode_profile.csv"));
    CHECK(fs::exists(out / "coercivity.json"));
}

TEST_CASE("identical config and seed give byte-identical outputs") {
    const fs::path cfg = write_config("cosmon_det.json", kSmallConfig);
    const fs::path out1 = fs::temp_directory_path() / "cosmon_det_1";
    const fs::path out2 = fs::temp_directory_path() / "cosmon_det_2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    CHECK(run("trace", cfg.string(), out1.string(), 1, {}) == kOk);
    CHECK(run("trace", cfg.string(), out2.string(), 2, {}) == kOk); // thread count must not matter
    for (const auto& e : fs::directory_iterator(out1)) {
        const fs::path other = out2 / e.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(slurp(e.path()) == slurp(other));
    }
}

TEST_CASE("seed override changes randomized artifacts deterministically") {
    const fs::path cfg = write_config("cosmon_seed.json", kSmallConfig);
    const fs::path o1 = fs::temp_directory_path() / "cosmon_seed_1";
    const fs::path o2 = fs::temp_directory_path() / "cosmon_seed_2";
    const fs::path o3 = fs::temp_directory_path() / "cosmon_seed_3";
    for (const auto& o : {o1, o2, o3}) fs::remove_all(o);
    CHECK(run("mode", cfg.string(), o1.string(), 1, uint64_t{42}) == kOk);
    CHECK(run("mode", cfg.string(), o2.string(), 1, uint64_t{43}) == kOk);
    CHECK(run("mode", cfg.string(), o3.string(), 1, uint64_t{42}) == kOk);
    CHECK(slurp(o1 / "mode.json") == slurp(o3 / "mode.json"));
    CHECK(slurp(o1 / "mode.json") != slurp(o2 / "mode.json"));
}

TEST_CASE("shipped configs parse and the schema document exists") {
    for (const char* name : {"configs/all.json", "configs/trace.json", "configs/solve.json",
                             "configs/small.json"}) {
        CAPTURE(name);
        CHECK_NOTHROW(load_config((fs::path(COSMON_SOURCE_DIR) / name).string()));
    }
    CHECK(fs::exists(fs::path(COSMON_SOURCE_DIR) / "docs/config.schema.json"));
}

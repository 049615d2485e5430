#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "wavefront/cli_commands.hpp"
#include "wavefront/io.hpp"

using namespace wavefront;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json kpp_doc() {
    return json::parse(R"({
      "model": {
        "type": "scalar",
        "f": {"name": "linear", "a": 1.0},
        "g": {"name": "saturating", "a": 2.0},
        "kernel": {"family": "point_mass", "h": 0.0, "a": 0.0}
      },
      "command": {
        "c": 2.5,
        "speeds": [1.0, 1.5],
        "grid": {"T": 40.0, "h": 0.05},
        "solver": {"tol": 1e-8, "max_iter": 3000}
      },
      "seed": 7
    })");
}

std::string write_temp(const json& doc, const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "wavefront_lab_tests";
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream out(path);
    out << doc.dump(2);
    return path.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("config round-trips through its canonical form") {
    const RunConfig cfg = parse_config(kpp_doc());
    const json once = to_json(cfg);
    const RunConfig cfg2 = parse_config(once);
    const json twice = to_json(cfg2);
    CHECK(once.dump() == twice.dump());
    CHECK(cfg.seed == 7);
    CHECK(cfg.command.c == doctest::Approx(2.5));
    CHECK(cfg.command.grid.T == doctest::Approx(40.0));
    CHECK(cfg.command.solver.max_iter == 3000);
}

TEST_CASE("config diagnostics name the offending path") {
    json missing = kpp_doc();
    missing["model"].erase("kernel");
    CHECK_THROWS_WITH_AS(parse_config(missing),
                         doctest::Contains("$.model.kernel"), ConfigError);

    json unknown = kpp_doc();
    unknown["model"]["kernel"]["extra"] = 1;
    CHECK_THROWS_WITH_AS(parse_config(unknown),
                         doctest::Contains("$.model.kernel.extra"), ConfigError);

    json badmix = kpp_doc();
    badmix["model"]["kernel"] = {
        {"family", "mixture"},
        {"components",
         {{{"weight", 0.5}, {"kernel", {{"family", "point_mass"}, {"h", 0.0}, {"a", 0.0}}}},
          {{"weight", 0.4}, {"kernel", {{"family", "point_mass"}, {"h", 1.0}, {"a", 0.0}}}}}}};
    CHECK_THROWS_WITH_AS(parse_config(badmix), doctest::Contains("sum to 1"), ConfigError);

    json unsorted = kpp_doc();
    unsorted["command"]["speeds"] = {2.0, 1.0};
    CHECK_THROWS_AS(parse_config(unsorted), ConfigError);
}

TEST_CASE("epidemic and population configs build their models") {
    const json epi = json::parse(R"({
      "model": {
        "type": "epidemic",
        "alpha": 1.0,
        "P": {"type": "point_mass", "tau": 0.0},
        "spatial": {"type": "gaussian", "variance": 0.5, "mean": 0.0},
        "f": {"name": "linear", "a": 1.0},
        "g": {"name": "saturating", "a": 4.0}
      },
      "seed": 0
    })");
    const RunConfig ecfg = parse_config(epi);
    const EpidemicModel em = ecfg.epidemic_model();
    CHECK(em.alpha == doctest::Approx(1.0));
    CHECK(analysis_model(ecfg).g.gprime0 == doctest::Approx(4.0));  // g/alpha

    const json pop = json::parse(R"({
      "model": {
        "type": "population",
        "D": 1.0, "gamma": 2.0,
        "kernel": {"family": "delta_time", "h": 1.0,
                   "spatial": {"type": "gaussian", "variance": 1.0, "mean": 0.0}},
        "f": {"name": "linear", "a": 1.0},
        "g": {"name": "saturating", "a": 2.0}
      },
      "seed": 0
    })");
    const RunConfig pcfg = parse_config(pop);
    CHECK(pcfg.population_model().gamma == doctest::Approx(2.0));
}

TEST_CASE("speeds command writes the report pair") {
    json doc = kpp_doc();
    doc["command"]["speeds"] = {1.0, 2.5, 3.0};
    const RunConfig cfg = parse_config(doc);
    const std::string out = (fs::temp_directory_path() / "wavefront_lab_tests" / "speeds").string();
    fs::remove_all(out);
    CHECK(run_speeds(cfg, out) == kExitOk);
    CHECK(fs::exists(out + "/report.csv"));
    CHECK(fs::exists(out + "/report.json"));
    const std::string csv = slurp(out + "/report.csv");
    CHECK(csv.find("c,gamma_sharp,gamma_K,lambda1,lambda2,lambda1_L,lambda2_L,verdict") !=
          std::string::npos);
    CHECK(csv.find("NonExistent") != std::string::npos);
    CHECK(csv.find("UniqueIfExists") != std::string::npos);
    const json rep = json::parse(slurp(out + "/report.json"));
    CHECK(rep["c_star"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("sweep outputs are deterministic for a fixed config and seed") {
    json doc = kpp_doc();
    doc["command"].erase("c");
    doc["command"]["speeds"] = {2.5};
    doc["command"]["grid"]["T"] = 60.0;
    const RunConfig cfg = parse_config(doc);
    const fs::path base = fs::temp_directory_path() / "wavefront_lab_tests";
    const std::string out1 = (base / "sweep1").string();
    const std::string out2 = (base / "sweep2").string();
    fs::remove_all(out1);
    fs::remove_all(out2);
    CHECK(run_sweep(cfg, out1) == kExitOk);
    CHECK(run_sweep(cfg, out2) == kExitOk);
    CHECK(slurp(out1 + "/report.csv") == slurp(out2 + "/report.csv"));
    CHECK(slurp(out1 + "/profile_c2.5.csv") == slurp(out2 + "/profile_c2.5.csv"));
}

TEST_CASE("solve command writes profile artifacts and verdicts") {
    json doc = kpp_doc();
    doc["command"]["grid"]["T"] = 60.0;  // the slow right relaxation needs room
    const RunConfig cfg = parse_config(doc);
    const std::string out = (fs::temp_directory_path() / "wavefront_lab_tests" / "solve").string();
    fs::remove_all(out);
    CHECK(run_solve(cfg, out) == kExitOk);
    CHECK(fs::exists(out + "/profile_c2.5.csv"));
    const json meta = json::parse(slurp(out + "/profile_c2.5.meta.json"));
    CHECK(meta["status"] == "Converged");
    CHECK(meta["verdict"] == "UniqueIfExists");
    CHECK(meta["residual"].get<double>() < 1e-3);
    CHECK(meta["decay_fit"]["rate"].get<double>() == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("verify downgrades to experimental when the Lipschitz claim fails") {
    // understated L: g(u) = u^2 with L = 1 violates the bound near u = 2
    const json doc = json::parse(R"({
      "model": {
        "type": "scalar",
        "f": {"name": "linear", "a": 0.5},
        "g": {"name": "quadratic", "a": 0.0, "b": 1.0, "L": 1.0},
        "kernel": {"family": "point_mass", "h": 0.0, "a": 0.0}
      },
      "command": {"c": 1.0, "grid": {"T": 30.0, "h": 0.05},
                  "solver": {"max_iter": 2000}},
      "seed": 2
    })");
    const RunConfig cfg = parse_config(doc);
    const std::string out =
        (fs::temp_directory_path() / "wavefront_lab_tests" / "verify_exp").string();
    fs::remove_all(out);
    // the superlinear g blows the iteration up, so the seeds do not converge
    CHECK(run_verify(cfg, out) == kExitNotConverged);
    const json rep = json::parse(slurp(out + "/report.json"));
    CHECK(rep["verdict"] == "Experimental");
    CHECK_FALSE(rep["hypotheses"]["lipschitz_ok"].get<bool>());
    CHECK(rep["hypotheses"]["lipschitz_violations"].get<int>() > 0);
}

#ifdef WAVEFRONT_LAB_BINARY
TEST_CASE("binary exit codes follow the contract") {
    const fs::path base = fs::temp_directory_path() / "wavefront_lab_tests";
    fs::create_directories(base);
    auto run = [&](const std::string& args) {
        const std::string cmd = std::string(WAVEFRONT_LAB_BINARY) + " " + args + " >/dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        return WEXITSTATUS(rc);
    };

    // exit 0: a well-formed speeds run
    json ok = kpp_doc();
    ok["command"]["speeds"] = {1.0, 3.0};
    const std::string ok_path = write_temp(ok, "ok.json");
    CHECK(run("speeds --config " + ok_path + " --out " + (base / "cli_ok").string()) == 0);

    // exit 1: config with a missing kernel
    json broken = kpp_doc();
    broken["model"].erase("kernel");
    const std::string broken_path = write_temp(broken, "broken.json");
    CHECK(run("solve --config " + broken_path + " --out " + (base / "cli_b").string()) == 1);

    // exit 3: iteration budget too small to converge
    json slow = kpp_doc();
    slow["command"]["grid"]["T"] = 30.0;
    slow["command"]["solver"]["max_iter"] = 2;
    const std::string slow_path = write_temp(slow, "slow.json");
    CHECK(run("solve --config " + slow_path + " --out " + (base / "cli_s").string()) == 3);

    // exit 2: numeric failure (grid cannot resolve the decay scale)
    json coarse = kpp_doc();
    coarse["command"]["grid"]["h"] = 0.6;
    const std::string coarse_path = write_temp(coarse, "coarse.json");
    CHECK(run("solve --config " + coarse_path + " --out " + (base / "cli_c").string()) == 2);
}
#endif

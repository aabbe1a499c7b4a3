#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef LMEM_CLI_PATH
#error "LMEM_CLI_PATH must point at the command line binary"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// work area shared by every case; a persistent kernel cache keeps the many
// invocations cheap
const fs::path& work_root() {
    static const fs::path root = [] {
        const fs::path r = fs::temp_directory_path() / "lmem_cli_tests";
        fs::remove_all(r);
        fs::create_directories(r / "cache");
        return r;
    }();
    return root;
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
    fs::create_directories(dir);
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    std::string cmd = "cd '" + dir.string() + "' && LAMBDA_MEMORY_CACHE_DIR='" +
                      (work_root() / "cache").string() + "' '" + LMEM_CLI_PATH + "' " +
                      args + " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.out = slurp(out);
    r.err = slurp(err);
    if (status != -1 && WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    return r;
}

const std::string small = " --nt 80 --nz 160";

} // namespace

TEST_CASE("help text and subcommand requirement") {
    const RunResult help = run_cli("--help", work_root() / "help");
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("write") != std::string::npos);
    CHECK(help.out.find("retrieve") != std::string::npos);

    const RunResult bare = run_cli("", work_root() / "bare");
    CHECK(bare.exit_code == 2);
}

TEST_CASE("write: reduced-units run produces the documented files") {
    const fs::path dir = work_root() / "write_basic";
    const RunResult r = run_cli("write --L-tilde 10.3 --Tw-tilde 4.2" + small, dir);
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir / "write_solution.csv"));
    CHECK(fs::exists(dir / "write_summary.json"));

    const json summary = json::parse(r.out);
    CHECK(summary.at("L_tilde").get<double>() == doctest::Approx(10.3));
    CHECK(summary.at("Tw_tilde").get<double>() == doctest::Approx(4.2));
    const double loss = summary.at("loss_percent").get<double>();
    CHECK(loss > 0.0);
    CHECK(loss < 100.0);
    // the file carries the same summary as stdout
    CHECK(json::parse(slurp(dir / "write_summary.json")) == summary);
}

TEST_CASE("write: argument groups are enforced") {
    CHECK(run_cli("write", work_root() / "w_none").exit_code == 2);
    CHECK(run_cli("write --L-tilde 10.3", work_root() / "w_half").exit_code == 2);
    const RunResult both = run_cli(
        "write --L-tilde 10.3 --Tw-tilde 4.2 --params p.json --Tw-seconds 1e-8",
        work_root() / "w_both");
    CHECK(both.exit_code == 2);
    CHECK(run_cli("write --L-tilde -3 --Tw-tilde 4.2", work_root() / "w_neg")
              .exit_code == 2);
}

TEST_CASE("write: physical parameters engage the unit reduction") {
    const fs::path dir = work_root() / "write_phys";
    fs::create_directories(dir);
    {
        std::ofstream p(dir / "params.json");
        p << R"({"coupling_g": 7.0711e-4, "density_N": 1.0e18,
                 "rabi_omega_abs": 1.0e9, "length_L": 1.03e-2,
                 "gamma": 1.0e6, "k_signal": 7.9e6, "area_S": 1.0e-4})";
    }
    const RunResult r =
        run_cli("write --params params.json --Tw-seconds 4.2e-9" + small, dir);
    REQUIRE(r.exit_code == 0);
    const json summary = json::parse(r.out);
    // |Omega| Tw = 4.2; 2 g^2 N / |Omega| * L = 10.3 for these numbers
    CHECK(summary.at("Tw_tilde").get<double>() == doctest::Approx(4.2).epsilon(1e-6));
    CHECK(summary.at("L_tilde").get<double>() == doctest::Approx(10.3).epsilon(1e-3));
    CHECK(r.err.find("regime") == std::string::npos);

    // a long pulse leaves the fast-storage regime and warns on stderr
    const RunResult slow =
        run_cli("write --params params.json --Tw-seconds 4.2e-7" + small,
                work_root() / "write_slow");
    REQUIRE(slow.exit_code == 0);
    CHECK(slow.err.find("regime") != std::string::npos);
}

TEST_CASE("write: reruns are byte-identical") {
    const fs::path d1 = work_root() / "det1";
    const fs::path d2 = work_root() / "det2";
    REQUIRE(run_cli("write --L-tilde 7.0 --Tw-tilde 2.8" + small, d1).exit_code == 0);
    REQUIRE(run_cli("write --L-tilde 7.0 --Tw-tilde 2.8" + small, d2).exit_code == 0);
    CHECK(slurp(d1 / "write_solution.csv") == slurp(d2 / "write_solution.csv"));
    CHECK(slurp(d1 / "write_summary.json") == slurp(d2 / "write_summary.json"));
}

TEST_CASE("the kernel cache directory is honoured") {
    int files = 0;
    for (const auto& e : fs::directory_iterator(work_root() / "cache")) {
        CHECK(e.path().filename().string().rfind("kernel_", 0) == 0);
        ++files;
    }
    CHECK(files > 0);
}

TEST_CASE("config files merge under the command line") {
    const fs::path dir = work_root() / "config";
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "cfg.json");
        f << R"({"L-tilde": 6.0, "Tw-tilde": 2.0, "nt": 80, "nz": 160})";
    }
    const RunResult file_only = run_cli("write --config cfg.json", dir);
    REQUIRE(file_only.exit_code == 0);
    CHECK(json::parse(file_only.out).at("Tw_tilde").get<double>() ==
          doctest::Approx(2.0));

    // flags override the file
    const RunResult overridden = run_cli("write --config cfg.json --Tw-tilde 1.5", dir);
    REQUIRE(overridden.exit_code == 0);
    CHECK(json::parse(overridden.out).at("Tw_tilde").get<double>() ==
          doctest::Approx(1.5));

    // unknown keys, malformed files and missing files are rejected
    {
        std::ofstream f(dir / "bad_key.json");
        f << R"({"L-tilde": 6.0, "bogus-key": 1.0})";
    }
    const RunResult bad_key = run_cli("write --config bad_key.json", dir);
    CHECK(bad_key.exit_code == 2);
    CHECK(bad_key.err.find("bogus-key") != std::string::npos);

    {
        std::ofstream f(dir / "not_json.json");
        f << "not json at all";
    }
    CHECK(run_cli("write --config not_json.json", dir).exit_code == 2);
    CHECK(run_cli("write --config missing.json", dir).exit_code == 2);

    // config may satisfy a required choice entirely
    {
        std::ofstream f(dir / "retrieve.json");
        f << R"({"L-tilde": 6.0, "Tw-tilde": 2.0, "Tr-mult": 1.0,
                 "direction": "backward", "nt": 80, "nz": 160})";
    }
    const RunResult ret = run_cli("retrieve --config retrieve.json", dir);
    REQUIRE(ret.exit_code == 0);
    CHECK(json::parse(ret.out).at("direction").get<std::string>() == "backward");
}

TEST_CASE("retrieve: both window spellings work and disagree loudly") {
    const fs::path dir = work_root() / "retrieve";
    const RunResult mult = run_cli(
        "retrieve --L-tilde 6.0 --Tw-tilde 2.0 --Tr-mult 1.0 --direction backward" +
            small,
        dir);
    REQUIRE(mult.exit_code == 0);
    CHECK(fs::exists(dir / "retrieval.csv"));
    CHECK(fs::exists(dir / "retrieval_summary.json"));
    const json summary = json::parse(mult.out);
    CHECK(summary.at("Tr_tilde").get<double>() == doctest::Approx(2.0));
    const double eff = summary.at("eff_percent").get<double>();
    CHECK(eff > 0.0);
    CHECK(eff < 100.0);

    const RunResult tilde = run_cli(
        "retrieve --L-tilde 6.0 --Tw-tilde 2.0 --Tr-tilde 2.0 --direction backward" +
            small,
        work_root() / "retrieve_t");
    REQUIRE(tilde.exit_code == 0);
    CHECK(json::parse(tilde.out).at("eff_percent").get<double>() ==
          doctest::Approx(eff).epsilon(1e-12));

    CHECK(run_cli("retrieve --L-tilde 6.0 --Tw-tilde 2.0 --Tr-tilde 2.0 "
                  "--Tr-mult 1.0 --direction backward",
                  work_root() / "retrieve_both")
              .exit_code == 2);
    CHECK(run_cli("retrieve --L-tilde 6.0 --Tw-tilde 2.0 --Tr-tilde 2.0 "
                  "--direction sideways",
                  work_root() / "retrieve_dir")
              .exit_code == 2);
    CHECK(run_cli("retrieve --L-tilde 6.0 --Tw-tilde 2.0 --Tr-tilde 2.0",
                  work_root() / "retrieve_nodir")
              .exit_code == 2);
}

TEST_CASE("retrieve: a non-paraxial mode warns") {
    const RunResult r = run_cli(
        "retrieve --L-tilde 6.0 --Tw-tilde 2.0 --Tr-mult 1.0 --direction backward "
        "--qx 1.0 --k-signal 1.0 --L-meters 1.0" +
            small,
        work_root() / "retrieve_parax");
    REQUIRE(r.exit_code == 0);
    CHECK(r.err.find("paraxial") != std::string::npos);
}

TEST_CASE("optimize emits a scan and a summary") {
    const fs::path dir = work_root() / "optimize";
    const RunResult r = run_cli("optimize --L-tilde 10.3 --nt 60 --nz 100", dir);
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir / "optimize_scan.csv"));
    const json summary = json::parse(slurp(dir / "optimize_summary.json"));
    const double tw = summary.at("Tw_opt").get<double>();
    CHECK(tw > 3.9);
    CHECK(tw < 4.5);
    CHECK(summary.at("converged").get<bool>());
    CHECK(run_cli("optimize", work_root() / "optimize_none").exit_code == 2);
}

TEST_CASE("capacity reports the geometric identities") {
    const fs::path dir = work_root() / "capacity";
    const RunResult r =
        run_cli("capacity --S 1e-4 --lambda 7.95e-7 --L 1e-2", dir);
    REQUIRE(r.exit_code == 0);
    const json summary = json::parse(slurp(dir / "capacity.json"));
    const double fresnel = summary.at("fresnel").get<double>();
    CHECK(std::abs(fresnel - 12578.616352201258) <= 1e-9 * fresnel);
    CHECK(summary.at("n_max_forward").get<double>() ==
          doctest::Approx(fresnel * fresnel).epsilon(1e-12));
    // default grain is the diffraction scale sqrt(L lambda)
    CHECK(summary.at("grain_d").get<double>() ==
          doctest::Approx(8.9162772500635045e-05).epsilon(1e-12));

    CHECK(run_cli("capacity --S 1e-4 --lambda 7.95e-7", work_root() / "cap_missing")
              .exit_code == 2);
    CHECK(run_cli("capacity --S 1e-4 --lambda 7.95e-7 --L 1e-2 --grain-d 2e-2",
                  work_root() / "cap_big_grain")
              .exit_code == 2);
}

TEST_CASE("figure names are validated") {
    CHECK(run_cli("figure fig7", work_root() / "fig_bad").exit_code == 2);
    CHECK(run_cli("figure nonsense", work_root() / "fig_bad2").exit_code == 2);
}

TEST_CASE("the length-sweep figure is strictly decreasing") {
    const fs::path dir = work_root() / "fig8";
    const RunResult r = run_cli("figure fig8", dir);
    REQUIRE(r.exit_code == 0);
    std::ifstream csv(dir / "fig8.csv");
    std::string line;
    std::getline(csv, line);
    CHECK(line == "L_tilde,loss_percent");
    double prev_loss = 1e9;
    int rows = 0;
    while (std::getline(csv, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        const double loss = std::stod(line.substr(comma + 1));
        CHECK(loss < prev_loss);
        prev_loss = loss;
        ++rows;
    }
    CHECK(rows == 40);
    CHECK(fs::exists(dir / "fig8_description.txt"));
}


#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(ISK_CLI_PATH) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 512> buf;
    while (fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST_CASE("classify prints the case label as json") {
    auto r = run("classify --family pn --n 2 --k 1 --alpha 1.2 --beta 2");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["case"] == "CurrentBlowup");
    CHECK(j["detail"] == "Obstacle");
    CHECK(double(j["lambda"]) == doctest::Approx(1.07335).epsilon(1e-5));
    CHECK(j["schema_version"] == 1);

    auto s = run("classify --family pn --n 2 --k 1 --alpha 3 --beta 2");
    CHECK(s.code == 0);
    CHECK(nlohmann::json::parse(s.out)["case"] == "Smooth");

    auto x = run("classify --family xmn --m 0 --n 1 --k 1 --b 0.1 --bprime 2");
    CHECK(x.code == 0);
    auto jx = nlohmann::json::parse(x.out);
    CHECK(jx["case"] == "CurrentBlowup");
    CHECK(double(jx["c_k"]) == doctest::Approx(0.575));
}

TEST_CASE("lambda prints the algebraic root") {
    auto r = run("lambda --family pn --n 2 --k 1 --alpha 1.2 --beta 2");
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(1.0733500838582586).epsilon(1e-12));
}

TEST_CASE("evolve writes its artifact set") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "isk_cli_evolve_test";
    fs::remove_all(dir);
    auto r = run("evolve --family pn --n 2 --k 1 --alpha 1.2 --beta 2 "
                 "--points 150 --theta 1 --exec serial --steady-tol 1e-6 "
                 "--outdir " + dir.string());
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "profile.csv"));
    CHECK(fs::exists(dir / "snapshots.csv"));

    std::ifstream in(dir / "summary.json");
    auto j = nlohmann::json::parse(in);
    CHECK(j["converged"] == true);
    CHECK(double(j["sup_dist_analytic"]) < 2e-2);
    CHECK(double(j["lambda_flow"]) ==
          doctest::Approx(double(j["lambda_algebraic"])).epsilon(5e-3));

    std::ifstream prof(dir / "profile.csv");
    std::string header;
    std::getline(prof, header);
    CHECK(header == "x,f0,f_final,f_analytic,sigma");
    fs::remove_all(dir);
}

TEST_CASE("obstacle writes a csv and reports the contact point") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "isk_cli_obstacle_test";
    fs::remove_all(dir);
    auto r = run("obstacle --family pn --n 2 --k 1 --alpha 1.2 --beta 2 "
                 "--points 400 --outdir " + dir.string());
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "obstacle.csv"));
    CHECK(r.out.find("contact_point") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("invalid parameters exit with code 1") {
    CHECK(run("classify --family pn --n 2 --k 1 --alpha -1 --beta 2").code == 1);
    CHECK(run("lambda --family pn --n 2 --k 3 --alpha 1.2 --beta 2").code == 1);
}

TEST_CASE("options can come from a config file") {
    namespace fs = std::filesystem;
    fs::path cfg = fs::temp_directory_path() / "isk_cli_test.ini";
    {
        std::ofstream out(cfg);
        out << "family=pn\nn=2\nk=1\nalpha=1.2\nbeta=2\n";
    }
    auto r = run("lambda --config " + cfg.string());
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(1.07335).epsilon(1e-5));
    fs::remove(cfg);
}

#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string& args) {
    const std::string cmd = std::string(LPOINT_CLI) + " " + args + " 2>&1";
    Result r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string tmpdir(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("lpoint_cli_" + name);
    fs::remove_all(d);
    return d.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("dots --side-nm 5 prints the table row") {
    const auto out = tmpdir("dots");
    const auto r = run("dots --side-nm 5 --out " + out);
    CHECK(r.code == 0);
    CHECK(r.out.find("781/781/1562") != std::string::npos);
    const auto m = nlohmann::json::parse(slurp(fs::path(out) / "manifest.json"));
    CHECK(m["status"] == "pass");
    CHECK(m["config"]["dots.side_nm"] == 5.0);
    CHECK(m["error"].is_null());
}

TEST_CASE("spinorbit --check dso-lambda passes with zero residual") {
    const auto out = tmpdir("so");
    const auto r = run("spinorbit --check dso-lambda --out " + out);
    CHECK(r.code == 0);
    CHECK(r.out.find("pass dso-lambda max residual 0 ") != std::string::npos);
    CHECK(fs::exists(fs::path(out) / "spinorbit_checks.csv"));
}

TEST_CASE("unknown config key exits 2 and names the key in the manifest") {
    const auto out = tmpdir("badkey");
    const auto r = run("dots --set dots.sides_nm=3 --out " + out);
    CHECK(r.code == 2);
    CHECK(r.out.find("dots.sides_nm") != std::string::npos);
    const auto m = nlohmann::json::parse(slurp(fs::path(out) / "manifest.json"));
    CHECK(m["exit_code"] == 2);
    CHECK(m["error"]["message"].get<std::string>().find("dots.sides_nm") != std::string::npos);
}

TEST_CASE("bad flag exits 2, help exits 0 and lists outputs") {
    CHECK(run("dots --no-such-flag").code == 2);
    CHECK(run("").code == 2);
    const auto h = run("inject --help");
    CHECK(h.code == 0);
    CHECK(h.out.find("events.csv") != std::string::npos);
    CHECK(h.out.find("--p-l") != std::string::npos);
}

TEST_CASE("same seed gives byte-identical inject outputs") {
    const auto a = tmpdir("inj_a"), b = tmpdir("inj_b");
    CHECK(run("inject --seed 9 --trials 500 --p-l 0.5 --out " + a).code == 0);
    CHECK(run("inject --trials 500 --p-l 0.5 --out " + b + " --seed 9").code == 0);
    for (const char* f : {"events.csv", "summary.json", "mc_stats.csv"})
        CHECK(slurp(fs::path(a) / f) == slurp(fs::path(b) / f));
    const auto m = nlohmann::json::parse(slurp(fs::path(a) / "manifest.json"));
    CHECK(m["config"]["inject.seed"] == 9);
    CHECK(m["config"]["so.seed"] == 9);
}

TEST_CASE("group, valleys, poisson and bands write their outputs") {
    const auto out = tmpdir("misc");
    const auto g = run("group --decompose 'L3*D12' --out " + out);
    CHECK(g.code == 0);
    CHECK(g.out.find("Λ4 ⊕ Λ5 ⊕ Λ6") != std::string::npos);
    const auto v = run("valleys --family L --growth 111 --out " + out);
    CHECK(v.code == 0);
    CHECK(v.out.find("ground degeneracy 1") != std::string::npos);
    CHECK(run("poisson --variant protruding --w-nm 3 --out " + out).code == 0);
    for (const char* f : {"potential.csv", "contour.csv", "contour.pgm", "metrics.json"}) CHECK(fs::exists(fs::path(out) / f));
    CHECK(run("bands --samples 30 --out " + out).code == 0);
    CHECK(slurp(fs::path(out) / "bands.csv").rfind("s,k_label,band_index,energy_ev\n", 0) == 0);
    CHECK(slurp(fs::path(out) / "fractions.csv").rfind("band_index,k_index,s,p,pz,sstar\n", 0) == 0);
    CHECK(slurp(fs::path(out) / "kpath.csv").rfind("s,kx,ky,kz\n", 0) == 0);
}

TEST_CASE("config file plus flags, flags win") {
    const auto dir = tmpdir("cfg");
    fs::create_directories(dir);
    {
        std::ofstream f(fs::path(dir) / "c.json");
        f << R"({"dots": {"side_nm": 2.0}})";
    }
    const auto a = run("dots --config " + (fs::path(dir) / "c.json").string() + " --out " + dir);
    CHECK(a.out.find("50/50/100") != std::string::npos);
    const auto b = run("dots --config " + (fs::path(dir) / "c.json").string() + " --side-nm 1 --out " + dir);
    CHECK(b.out.find("6/6/12") != std::string::npos);
}

TEST_CASE("unknown irrep in the expression is a usage error") {
    const auto out = tmpdir("grp_bad");
    CHECK(run("group --decompose L9 --out " + out).code == 2);
}

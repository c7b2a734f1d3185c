// Acceptance criteria 1..11. Criteria 1..10 run in-process; 11 runs the
// command-line verify_all twice and compares every output file except the
// manifest (which carries the timestamp).

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lpoint/verify.hpp"

namespace fs = std::filesystem;
using namespace lpoint;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

CriterionResult determinism() {
    CriterionResult r;
    r.id = 11;
    r.name = criterion_name(11);
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path base = fs::temp_directory_path() / "lpoint_acceptance";
    fs::remove_all(base);
    int codes[2];
    for (int i = 0; i < 2; ++i) {
        const std::string cmd = std::string(LPOINT_CLI) + " verify_all --seed 1 --out " + (base / std::to_string(i)).string() +
                                " > " + (base.string() + "_log" + std::to_string(i)) + " 2>&1";
        codes[i] = std::system(cmd.c_str());
    }
    int files = 0, same = 0;
    for (const auto& e : fs::directory_iterator(base / "0")) {
        const auto name = e.path().filename();
        if (name == "manifest.json") continue;
        ++files;
        const fs::path other = base / "1" / name;
        same += fs::exists(other) && slurp(e.path()) == slurp(other);
    }
    r.pass = codes[0] == 0 && codes[1] == 0 && files > 0 && files == same;
    r.measured = std::to_string(same) + "/" + std::to_string(files) + " files byte-identical across two verify_all runs, exit codes " +
                 std::to_string(codes[0]) + ", " + std::to_string(codes[1]);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace

int main() {
    VerifyOptions opts;
    bool all = true;
    for (int id = 1; id <= 10; ++id) {
        const auto r = run_criterion(id, opts);
        std::cout << format_result_line(r) << std::endl;
        all = all && r.pass;
    }
    const auto r11 = determinism();
    std::cout << format_result_line(r11) << std::endl;
    all = all && r11.pass;
    std::cout << (all ? "all acceptance criteria pass" : "acceptance FAILED") << std::endl;
    return all ? 0 : 1;
}

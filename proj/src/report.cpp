#include "lpoint/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "lpoint/error.hpp"

namespace lpoint {

using nlohmann::json;

std::string fmt_num(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    std::string s(buf);
    if (s == "-0") s = "0";
    return s;
}

void write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + p.parent_path().string() + ": " + ec.message());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << content;
    f.close();
    if (!f) throw IoError("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_kpath_csv(std::ostream& os, const KPath& path) {
    os << "s,kx,ky,kz\n";
    for (const auto& p : path.points())
        os << fmt_num(p.s) << ',' << fmt_num(p.k.kx) << ',' << fmt_num(p.k.ky) << ',' << fmt_num(p.k.kz) << '\n';
}

void write_bands_csv(std::ostream& os, const BandSet& bands) {
    os << "s,k_label,band_index,energy_ev\n";
    for (int b = 0; b < bands.bands(); ++b)
        for (std::size_t i = 0; i < bands.size(); ++i)
            os << fmt_num(bands.kpoints[i].s) << ',' << bands.kpoints[i].label << ',' << b << ','
               << fmt_num(bands.connected_energy(b, i)) << '\n';
}

void write_fractions_csv(std::ostream& os, const BandSet& bands) {
    os << "band_index,k_index,s,p,pz,sstar\n";
    for (int b = 0; b < bands.bands(); ++b)
        for (std::size_t i = 0; i < bands.size(); ++i) {
            const auto f = orbital_fractions(bands, b, i);
            os << b << ',' << i << ',' << fmt_num(f.s) << ',' << fmt_num(f.p) << ',' << fmt_num(f.pz) << ','
               << fmt_num(f.sstar) << '\n';
        }
}

void write_checks_csv(std::ostream& os, const std::vector<CheckResult>& checks) {
    os << "name,max_residual,threshold,pass\n";
    for (const auto& c : checks)
        os << c.name << ',' << fmt_num(c.max_residual) << ',' << fmt_num(c.threshold) << ',' << (c.pass ? "pass" : "fail")
           << '\n';
}

json checks_json(const std::vector<CheckResult>& checks) {
    json arr = json::array();
    for (const auto& c : checks)
        arr.push_back({{"name", c.name},
                       {"max_residual", c.max_residual},
                       {"threshold", c.threshold},
                       {"pass", c.pass},
                       {"detail", c.detail}});
    return arr;
}

namespace {

std::string gauss_str(GaussInt g) {
    if (g.im == 0) return std::to_string(g.re);
    if (g.re == 0) return (g.im == 1 ? "i" : g.im == -1 ? "-i" : std::to_string(g.im) + "i");
    return std::to_string(g.re) + (g.im > 0 ? "+" : "") + std::to_string(g.im) + "i";
}

}  // namespace

std::string format_character_table(const CharacterTable& table) {
    std::ostringstream os;
    os << std::left << std::setw(6) << "";
    for (const auto& c : table.classes()) os << std::setw(10) << (std::to_string(c.size) + " " + c.label);
    os << '\n';
    for (const auto& ir : table.irreps()) {
        // Λ is two bytes in UTF-8, pad by hand
        os << ir.name << std::string(ir.name.size() < 7 ? 7 - ir.name.size() : 1, ' ');
        for (const auto& ch : ir.characters) os << std::setw(10) << gauss_str(ch);
        os << '\n';
    }
    return os.str();
}

json character_table_json(const CharacterTable& table) {
    json classes = json::array();
    for (const auto& c : table.classes()) classes.push_back({{"label", c.label}, {"size", c.size}});
    json irreps = json::array();
    for (const auto& ir : table.irreps()) {
        json chars = json::array();
        for (const auto& ch : ir.characters) chars.push_back(gauss_str(ch));
        irreps.push_back({{"name", ir.name}, {"spinor", ir.spinor}, {"characters", chars}});
    }
    return {{"order", table.order()}, {"classes", classes}, {"irreps", irreps}};
}

std::string format_splitting(const SplittingReport& rep) {
    std::ostringstream os;
    os << std::left << std::setw(8) << "level" << std::setw(14) << "m_z (m0)" << std::setw(8) << "deg"
       << "energy (eV)\n";
    for (std::size_t i = 0; i < rep.groups.size(); ++i) {
        const auto& g = rep.groups[i];
        os << std::setw(8) << i << std::setw(14) << fmt_num(g.mass, 6) << std::setw(8) << g.degeneracy
           << fmt_num(g.energy_ev, 6) << '\n';
    }
    os << "ground degeneracy " << rep.ground_degeneracy << ", splitting " << fmt_num(rep.splitting_ev(), 6) << " eV\n";
    return os.str();
}

json splitting_json(const SplittingReport& rep) {
    json groups = json::array();
    for (const auto& g : rep.groups)
        groups.push_back({{"mass", g.mass}, {"degeneracy", g.degeneracy}, {"energy_ev", g.energy_ev}, {"members", g.members}});
    return {{"groups", groups}, {"ground_degeneracy", rep.ground_degeneracy}, {"splitting_ev", rep.splitting_ev()}};
}

json topology_json(const BandTopology& t) {
    return {{"vbm_ev", t.vbm},
            {"k0", t.k0},
            {"e_x0_ev", t.e_x0},
            {"e_l_ev", t.e_l},
            {"gap_ev", t.gap},
            {"e_l_minus_vbm_ev", t.e_l_rel},
            {"e_l_minus_x0_ev", t.l_minus_x0},
            {"s_frac_lambda", t.s_frac_lambda},
            {"s_frac_delta", t.s_frac_delta},
            {"pz_frac_delta", t.pz_frac_delta}};
}

}  // namespace lpoint

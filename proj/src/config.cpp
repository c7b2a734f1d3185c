#include "lpoint/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lpoint {

using nlohmann::json;

std::string ConfigKey::flag() const {
    std::string last = name.substr(name.rfind('.') + 1);
    std::replace(last.begin(), last.end(), '_', '-');
    return "--" + last;
}

namespace {

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

std::vector<ConfigKey> build_schema() {
    const TBParams tb;
    const MultipoleField so;
    const ProtocolConfig pc;
    const FinDimensions fd;
    const BoundarySpec bc;
    const SolveOptions sol;
    const std::vector<std::string> bands{"bands"};
    const std::vector<std::string> tbcmds{"bands", "spinorbit"};
    const std::vector<std::string> socmd{"spinorbit"};
    const std::vector<std::string> val{"valleys"};
    const std::vector<std::string> inj{"inject"};
    const std::vector<std::string> poi{"poisson"};
    using VT = ValueType;
    return {
        {"lattice.a_nm", VT::real, 0.543, "lattice constant (nm)", {"dots"}},

        {"tb.es", VT::real, tb.es, "s on-site energy (eV)", tbcmds},
        {"tb.ep", VT::real, tb.ep, "p on-site energy (eV)", tbcmds},
        {"tb.esstar", VT::real, tb.esstar, "s* on-site energy (eV)", tbcmds},
        {"tb.vss", VT::real, tb.vss, "V(s,s) (eV)", tbcmds},
        {"tb.vxx", VT::real, tb.vxx, "V(x,x) (eV)", tbcmds},
        {"tb.vxy", VT::real, tb.vxy, "V(x,y) (eV)", tbcmds},
        {"tb.vsp", VT::real, tb.vsp, "V(s,p) (eV)", tbcmds},
        {"tb.vsstarp", VT::real, tb.vsstarp, "V(s*,p) (eV)", tbcmds},
        {"tb.soc_lambda", VT::real, tb.soc_lambda, "on-site spin-orbit lambda (eV), split-off = 1.5 lambda", tbcmds},

        {"bands.path", VT::string, "G-D-X,G-L-L", "comma list of G-D-X, G-L-L, K-L", bands},
        {"bands.samples", VT::integer, 200, "k-points per segment", bands},
        {"bands.threads", VT::integer, 0, "worker threads, 0 = all cores", bands},

        {"so.check", VT::string, "all", "dso-lambda, p-equality, hermitian, time-reversal, trace-decomposition, bsvsp or all", socmd},
        {"so.samples", VT::integer, 1000, "random draws per check", socmd},
        {"so.seed", VT::uint64, 1, "seed for random fields", socmd},
        {"so.q0", VT::real, so.q0, "Q0 free-electron coefficient", socmd},
        {"so.q_dip", VT::vec3, vec(Vec3(0.05, 0.05, 0.05)), "electric dipole Q (BSVSP field)", socmd},
        {"so.m_dip", VT::vec3, vec(so.m_dip), "magnetic dipole M", socmd},
        {"so.t_dip", VT::vec3, vec(so.t_dip), "toroidal dipole T", socmd},
        {"so.g0", VT::real, so.g0, "electric toroidal monopole G0", socmd},
        {"so.q_xyz", VT::real, so.q_xyz, "electric octupole Q_xyz", socmd},
        {"so.stark_coupling", VT::real, 1.0, "sublattice potential per unit Q (BSVSP)", socmd},

        {"group.decompose", VT::string, "L3*D12", "representation product to decompose", {"group"}},

        {"valleys.family", VT::string, "L", "X0 or L", val},
        {"valleys.growth", VT::string, "111", "growth axis, e.g. 001, 111 or x,y,z", val},
        {"valleys.x0_ml", VT::real, 0.916, "X0 longitudinal mass (m0)", val},
        {"valleys.x0_mt", VT::real, 0.190, "X0 transverse mass (m0)", val},
        {"valleys.l_ml", VT::real, 1.588, "L longitudinal mass (m0)", val},
        {"valleys.l_mt", VT::real, 0.0815, "L transverse mass (m0)", val},
        {"valleys.width_nm", VT::real, 5.0, "well width (nm)", val},

        {"dots.side_nm", VT::real, 5.0, "cube edge (nm)", {"dots"}},
        {"dots.rounding", VT::string, "nearest", "nearest or floor", {"dots"}},

        {"inject.p_l", VT::real, pc.params.p_l, "probability of landing on L", inj},
        {"inject.seed", VT::uint64, 1, "protocol seed", inj},
        {"inject.max_retries", VT::integer, pc.max_retries, "retry budget", inj},
        {"inject.u_ev", VT::real, 0.0, "charging energy U (eV)", inj},
        {"inject.levels", VT::integer, 6, "orbital levels per dot", inj},
        {"inject.l_index", VT::integer, 4, "1-based index of the L level", inj},
        {"inject.delta_e_l_gamma_ev", VT::real, pc.delta_e_l_gamma, "gap above the L level (eV)", inj},
        {"inject.level_spacing_ev", VT::real, 0.01, "orbital level spacing (eV)", inj},
        {"inject.mu_s_ev", VT::nullable_real, nullptr, "source potential (eV), null = centre of stop window", inj},
        {"inject.mu_d_ev", VT::real, pc.mu_d, "drain potential (eV)", inj},
        {"inject.trials", VT::integer, 10000, "Monte Carlo trials (0 = none)", inj},
        {"inject.threads", VT::integer, 0, "Monte Carlo threads, 0 = all cores", inj},

        {"poisson.variant", VT::string, "planarized", "planarized or protruding", poi},
        {"poisson.w_nm", VT::real, 5.0, "fin and gate width (nm)", poi},
        {"poisson.h_nm", VT::real, 1.0, "cell size (nm)", poi},
        {"poisson.vgate", VT::real, bc.gate_voltage, "gate voltage (V)", poi},
        {"poisson.vsub", VT::real, bc.substrate_voltage, "back-contact voltage (V)", poi},
        {"poisson.interface_mode", VT::string, "dielectric_continuity", "dielectric_continuity or fixed_potential", poi},
        {"poisson.interface_potential", VT::real, bc.interface_potential, "Si/oxide potential in fixed_potential mode (V)", poi},
        {"poisson.eps_si", VT::real, bc.eps_si, "Si relative permittivity", poi},
        {"poisson.eps_ox", VT::real, bc.eps_ox, "oxide relative permittivity", poi},
        {"poisson.tol", VT::real, sol.tol, "relative residual tolerance", poi},
        {"poisson.max_iter", VT::integer, sol.max_iter, "iteration limit", poi},
        {"poisson.fin_height_nm", VT::real, fd.fin_height_nm, "fin height (nm)", poi},
        {"poisson.sti_nm", VT::real, fd.sti_nm, "isolation oxide thickness (nm)", poi},
        {"poisson.gate_oxide_nm", VT::real, fd.gate_oxide_nm, "gate oxide thickness (nm)", poi},
        {"poisson.gate_nm", VT::real, fd.gate_nm, "gate electrode thickness (nm)", poi},
        {"poisson.substrate_nm", VT::real, fd.substrate_nm, "substrate depth (nm)", poi},
        {"poisson.margin_nm", VT::real, fd.margin_nm, "lateral margin (nm)", poi},
        {"poisson.top_nm", VT::real, fd.top_nm, "vacuum above the gate (nm)", poi},
        {"poisson.levels", VT::integer, 10, "contour levels", poi},
    };
}

const char* type_name(ValueType t) {
    switch (t) {
        case ValueType::real: return "number";
        case ValueType::integer: return "integer";
        case ValueType::uint64: return "unsigned integer";
        case ValueType::string: return "string";
        case ValueType::vec3: return "3-vector";
        case ValueType::nullable_real: return "number or null";
    }
    return "?";
}

json coerce(const ConfigKey& k, const json& v) {
    auto bad = [&] {
        return ConfigError("config key " + k.name + ": expected " + type_name(k.type) + ", got " + v.dump());
    };
    switch (k.type) {
        case ValueType::real:
            if (!v.is_number() || !std::isfinite(v.get<double>())) throw bad();
            return v.get<double>();
        case ValueType::nullable_real:
            if (v.is_null()) return nullptr;
            if (!v.is_number() || !std::isfinite(v.get<double>())) throw bad();
            return v.get<double>();
        case ValueType::integer:
            if (v.is_number_integer()) return v.get<long long>();
            if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) return static_cast<long long>(v.get<double>());
            throw bad();
        case ValueType::uint64:
            if (v.is_number_unsigned()) return v.get<std::uint64_t>();
            if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
            throw bad();
        case ValueType::string:
            if (!v.is_string()) throw bad();
            return v;
        case ValueType::vec3:
            if (!v.is_array() || v.size() != 3) throw bad();
            for (const auto& x : v)
                if (!x.is_number()) throw bad();
            return json::array({v[0].get<double>(), v[1].get<double>(), v[2].get<double>()});
    }
    throw bad();
}

void flatten_into(const json& j, const std::string& prefix, json& out) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object()) {
            flatten_into(*it, key, out);
        } else {
            out[key] = *it;
        }
    }
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
    static const std::vector<ConfigKey> schema = build_schema();
    return schema;
}

const ConfigKey* find_key(std::string_view name) {
    for (const auto& k : config_schema())
        if (k.name == name) return &k;
    return nullptr;
}

std::string data_dir() {
#ifdef LPOINT_DATA_DIR
    return LPOINT_DATA_DIR;
#else
    return "data";
#endif
}

nlohmann::json flatten_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    json out = json::object();
    flatten_into(j, "", out);
    return out;
}

Config::Config() {
    for (const auto& k : config_schema()) values_[k.name] = k.default_value;
}

void Config::merge_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    merge_json(j);
}

void Config::merge_json(const nlohmann::json& j) {
    const json flat = flatten_config(j);
    for (auto it = flat.begin(); it != flat.end(); ++it) set(it.key(), *it);
}

void Config::set(std::string_view key, const nlohmann::json& value) {
    const ConfigKey* k = find_key(key);
    if (!k) throw ConfigError("unknown config key: " + std::string(key));
    values_[k->name] = coerce(*k, value);
}

void Config::set_text(std::string_view key, std::string_view text) {
    const ConfigKey* k = find_key(key);
    if (!k) throw ConfigError("unknown config key: " + std::string(key));
    const std::string t(text);
    json v;
    try {
        switch (k->type) {
            case ValueType::string: v = t; break;
            case ValueType::vec3: {
                std::string s = t;
                std::replace(s.begin(), s.end(), ',', ' ');
                std::istringstream is(s);
                double x, y, z;
                std::string rest;
                if (!(is >> x >> y >> z) || (is >> rest)) throw ConfigError("");
                v = json::array({x, y, z});
                break;
            }
            case ValueType::nullable_real:
                if (t == "null" || t == "auto") {
                    v = nullptr;
                    break;
                }
                [[fallthrough]];
            default: v = json::parse(t); break;
        }
    } catch (const std::exception&) {
        throw ConfigError("config key " + k->name + ": cannot parse '" + t + "' as " + type_name(k->type));
    }
    set(key, v);
}

const nlohmann::json& Config::get(std::string_view key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key: " + std::string(key));
    return it->second;
}

double Config::real(std::string_view key) const { return get(key).get<double>(); }
long long Config::integer(std::string_view key) const { return get(key).get<long long>(); }
std::uint64_t Config::uint64(std::string_view key) const { return get(key).get<std::uint64_t>(); }
std::string Config::string(std::string_view key) const { return get(key).get<std::string>(); }
bool Config::is_null(std::string_view key) const { return get(key).is_null(); }

Vec3 Config::vec3(std::string_view key) const {
    const auto& v = get(key);
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

nlohmann::json Config::to_json() const {
    json out = json::object();
    for (const auto& [k, v] : values_) out[k] = v;
    return out;
}

LatticeSpec Config::lattice() const {
    LatticeSpec s;
    s.a_nm = real("lattice.a_nm");
    s.validate();
    return s;
}

TBParams Config::tb_params() const {
    TBParams p;
    p.es = real("tb.es");
    p.ep = real("tb.ep");
    p.esstar = real("tb.esstar");
    p.vss = real("tb.vss");
    p.vxx = real("tb.vxx");
    p.vxy = real("tb.vxy");
    p.vsp = real("tb.vsp");
    p.vsstarp = real("tb.vsstarp");
    p.soc_lambda = real("tb.soc_lambda");
    p.validate();
    return p;
}

MultipoleField Config::multipole_field() const {
    MultipoleField f;
    f.q0 = real("so.q0");
    f.q_dip = vec3("so.q_dip");
    f.m_dip = vec3("so.m_dip");
    f.t_dip = vec3("so.t_dip");
    f.g0 = real("so.g0");
    f.q_xyz = real("so.q_xyz");
    f.validate();
    return f;
}

ProtocolConfig Config::protocol() const {
    ProtocolConfig c;
    c.delta_e_l_gamma = real("inject.delta_e_l_gamma_ev");
    c.spec = default_dot_spec(static_cast<int>(integer("inject.levels")), static_cast<int>(integer("inject.l_index")),
                              real("inject.level_spacing_ev"), c.delta_e_l_gamma, real("inject.u_ev"));
    c.mu_s = is_null("inject.mu_s_ev") ? NAN : real("inject.mu_s_ev");
    c.mu_d = real("inject.mu_d_ev");
    c.params.p_l = real("inject.p_l");
    c.params.seed = uint64("inject.seed");
    c.params.validate();
    c.max_retries = static_cast<int>(integer("inject.max_retries"));
    return c;
}

FinDimensions Config::fin_dimensions() const {
    FinDimensions d;
    d.fin_height_nm = real("poisson.fin_height_nm");
    d.sti_nm = real("poisson.sti_nm");
    d.gate_oxide_nm = real("poisson.gate_oxide_nm");
    d.gate_nm = real("poisson.gate_nm");
    d.substrate_nm = real("poisson.substrate_nm");
    d.margin_nm = real("poisson.margin_nm");
    d.top_nm = real("poisson.top_nm");
    return d;
}

BoundarySpec Config::boundary() const {
    BoundarySpec b;
    b.gate_voltage = real("poisson.vgate");
    b.substrate_voltage = real("poisson.vsub");
    b.interface_mode = parse_interface_mode(string("poisson.interface_mode"));
    b.interface_potential = real("poisson.interface_potential");
    b.eps_si = real("poisson.eps_si");
    b.eps_ox = real("poisson.eps_ox");
    b.validate();
    return b;
}

SolveOptions Config::solve_options() const {
    SolveOptions o;
    o.tol = real("poisson.tol");
    o.max_iter = static_cast<int>(integer("poisson.max_iter"));
    return o;
}

}  // namespace lpoint

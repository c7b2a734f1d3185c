#pragma once

// Flat dotted-key run configuration with a single schema that drives
// validation, defaults, CLI flags and help text.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lpoint/electrostatics.hpp"
#include "lpoint/error.hpp"
#include "lpoint/injection.hpp"
#include "lpoint/spinorbit.hpp"
#include "lpoint/tightbinding.hpp"
#include "lpoint/valleys.hpp"

namespace lpoint {

class ConfigError : public Error {
public:
    using Error::Error;
};

enum class ValueType { real, integer, uint64, string, vec3, nullable_real };

struct ConfigKey {
    std::string name;  // e.g. "tb.es"
    ValueType type = ValueType::real;
    nlohmann::json default_value;
    std::string help;
    std::vector<std::string> subcommands;  // which subcommands expose it as a flag

    std::string flag() const;  // "--es" style, last component with '_' -> '-'
};

const std::vector<ConfigKey>& config_schema();
const ConfigKey* find_key(std::string_view name);

// Directory with the shipped parameter files.
std::string data_dir();

class Config {
public:
    Config();  // all schema defaults

    // Merges a JSON file; nested objects are flattened to dotted keys.
    // Unknown keys and type mismatches throw ConfigError naming the key.
    void merge_file(const std::string& path);
    void merge_json(const nlohmann::json& j);
    // Parses a textual value according to the key's type.
    void set_text(std::string_view key, std::string_view text);
    void set(std::string_view key, const nlohmann::json& value);

    const nlohmann::json& get(std::string_view key) const;
    double real(std::string_view key) const;
    long long integer(std::string_view key) const;
    std::uint64_t uint64(std::string_view key) const;
    std::string string(std::string_view key) const;
    Vec3 vec3(std::string_view key) const;
    bool is_null(std::string_view key) const;

    // Resolved config as a flat JSON object, keys sorted.
    nlohmann::json to_json() const;

    LatticeSpec lattice() const;
    TBParams tb_params() const;
    MultipoleField multipole_field() const;
    ProtocolConfig protocol() const;
    FinDimensions fin_dimensions() const;
    BoundarySpec boundary() const;
    SolveOptions solve_options() const;

private:
    std::map<std::string, nlohmann::json, std::less<>> values_;
};

nlohmann::json flatten_config(const nlohmann::json& j);

}  // namespace lpoint

#pragma once

// Plain-text writers shared by the command-line tool and the verification
// suite. Numbers are printed with a fixed format so reruns are
// byte-identical.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpoint/grouptheory.hpp"
#include "lpoint/lattice.hpp"
#include "lpoint/spinorbit.hpp"
#include "lpoint/tightbinding.hpp"
#include "lpoint/valleys.hpp"

namespace lpoint {

// "%.10g"
std::string fmt_num(double v, int digits = 10);

// Creates parent directories; throws IoError.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

void write_kpath_csv(std::ostream& os, const KPath& path);
// s,k_label,band_index,energy_ev over the connected bands.
void write_bands_csv(std::ostream& os, const BandSet& bands);
// band_index,k_index,s,p,pz,sstar for every energy-ranked band.
void write_fractions_csv(std::ostream& os, const BandSet& bands);

void write_checks_csv(std::ostream& os, const std::vector<CheckResult>& checks);
nlohmann::json checks_json(const std::vector<CheckResult>& checks);

std::string format_character_table(const CharacterTable& table);
nlohmann::json character_table_json(const CharacterTable& table);

std::string format_splitting(const SplittingReport& rep);
nlohmann::json splitting_json(const SplittingReport& rep);

nlohmann::json topology_json(const BandTopology& top);

}  // namespace lpoint

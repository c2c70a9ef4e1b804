#pragma once

// Scenario files: INI text with sections [geometry], [propagation], [l2s],
// [reuse], [scheduler] and [run]. Keys are the config field names. Unknown
// sections or keys are errors. Comments are whole lines starting with ';' or '#'.

#include <filesystem>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dsnsim/engine.hpp"

namespace dsnsim {

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& message, std::string field = {}, int line = 0)
        : std::runtime_error(message), field_(std::move(field)), line_(line) {}

    const std::string& field() const { return field_; }
    int line() const { return line_; }

  private:
    std::string field_;
    int line_ = 0;
};

/// The reference deployment: 19 tri-sector sites (57 sectors), 3420 UEs,
/// 10 MHz, reuse 1, round robin, 250 TTIs.
Scenario reference_scenario();

/// Every "section.key" the parser accepts, in file order.
std::vector<std::string> scenario_keys();

/// Sets one field from text, e.g. ("geometry.n_ues", "100").
void set_scenario_field(Scenario& scenario, std::string_view key, std::string_view value);
std::string get_scenario_field(const Scenario& scenario, std::string_view key);

/// Applies "section.key=value".
void apply_override(Scenario& scenario, std::string_view assignment);

/// Parses on top of the reference defaults, applies `overrides` in order,
/// then validates. Errors come out as ParseError.
Scenario parse_scenario(std::istream& in, std::span<const std::string> overrides = {},
                        const std::string& source = "<input>");
Scenario load_scenario(const std::filesystem::path& path, std::span<const std::string> overrides = {});

/// Full resolved configuration as scenario-file text. Re-parsing it gives
/// back an identical Scenario.
std::string render_scenario(const Scenario& scenario);

}  // namespace dsnsim

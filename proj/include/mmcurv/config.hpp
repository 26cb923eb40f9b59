#pragma once

#include "mmcurv/catalog.hpp"
#include "mmcurv/stencil.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmcurv {

struct IniEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct IniSection {
  std::string name;
  int line = 0;
  std::vector<IniEntry> entries;

  const IniEntry* find(const std::string& key) const;
};

/// Key-value text with [section] headers. '#' and ';' start comments;
/// values are trimmed. Errors carry "source:line".
struct IniFile {
  std::string source;
  std::vector<IniSection> sections;

  const IniSection* section(const std::string& name) const;
};

IniFile parse_ini(std::string_view text, const std::string& source = "<config>");
IniFile load_ini(const std::string& path);

enum class OutputFormat { Human, Json, Csv };

OutputFormat parse_format(const std::string& name);

struct RunConfig {
  /// Catalog id, or "custom" for an example defined in the [example] section.
  std::string example;
  Params params;
  IniSection example_section;
  std::string config_source = "<config>";
  DifferentiationConfig diff;
  int grid = 64;
  std::optional<double> tolerance;
  std::size_t points = 25;
  std::size_t base_points = 10;
  std::uint64_t seed = 1;
  OutputFormat format = OutputFormat::Human;
  std::string out_path;
  std::optional<double> q;
  std::vector<Point> explicit_points;
};

/// Applies [example], [differentiation], [quadrature] and [output].
/// Unknown sections or keys throw ConfigError naming the line.
void apply_config(RunConfig& rc, const IniFile& ini);

/// Builds the configured example (catalog or custom).
CatalogObject build_example(const RunConfig& rc);

/// Builds a user example from an [example] section with kind = manifold,
/// weighted or submersion; see the README for the key names.
CatalogObject build_custom(const IniSection& section, const Params& overrides,
                           const std::string& source = "<config>");

/// Splits "a, b, c" (commas and/or whitespace) into trimmed tokens.
std::vector<std::string> split_list(std::string_view text);

}  // namespace mmcurv

#pragma once

#include "cone/config.hpp"
#include "cone/field.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cone::cli {

enum ExitCode : int { ok = 0, trend_violation = 1, numerical_failure = 2, config_error = 3 };

// Parses argv (program name first), runs one subcommand and writes its
// artifacts. Never throws; failures map to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Fills every tunable key the subcommand reads with its default, leaving
// explicit settings alone. The result is what the manifest echoes.
void apply_defaults(Config& cfg, const std::string& subcommand);

// Datum block: profile = gaussian | bump | csv, center, width, path, and
// modes = `slot:amplitude, ...`. Certifies tails and rejects bumps that reach
// the tip.
ModeField load_datum(const Config& cfg, TablePtr table, GridPtr grid);

// CSV with header `slot,r,re,im`, one row per node of every active slot.
void save_field_csv(const FieldData& field, const std::string& path);
ModeField load_field_csv(const std::string& path, TablePtr table, GridPtr grid);

}  // namespace cone::cli

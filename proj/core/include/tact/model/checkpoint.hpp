#pragma once

#include <filesystem>
#include <iosfwd>

#include "tact/model/network.hpp"

namespace tact {

/// JSON container: {"format":"tact-checkpoint","version":1,"config":{...},
/// "parameters":[{"name":..,"shape":[..],"values":[..]}]}. Values are written
/// with 17 significant digits so a save/load cycle is exact.
void save_checkpoint(std::ostream& out, const Network& net);
void save_checkpoint(const std::filesystem::path& path, const Network& net);

/// Throws ValidationError for a malformed file or a parameter mismatch.
Network load_checkpoint(std::istream& in);
Network load_checkpoint(const std::filesystem::path& path);

}  // namespace tact

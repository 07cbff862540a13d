#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphct/adam.hpp"

namespace graphct {

/// Binary weight container: magic, format version, then ordered
/// (name, shape, flat f64 little-endian data) records. Saving what was
/// loaded reproduces the file byte for byte.
std::vector<std::uint8_t> serialize_weights(const std::vector<ParamRef>& params);

void save_weights(const std::string& path, const std::vector<ParamRef>& params);

/// Loads into an existing parameter list; names, order and shapes must match
/// the file exactly.
void load_weights(const std::string& path, const std::vector<ParamRef>& params);
void deserialize_weights(const std::vector<std::uint8_t>& bytes,
                         const std::vector<ParamRef>& params);

} // namespace graphct

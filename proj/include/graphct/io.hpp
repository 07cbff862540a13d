#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "graphct/tensor.hpp"

namespace graphct {

/// Writes `content` to `path` atomically: a temp file in the same directory
/// is renamed over the final name, so partial outputs never appear under
/// final names.
void atomic_write_file(const std::string& path, const std::string& content);
void atomic_write_binary(const std::string& path,
                         const std::function<std::string()>& produce);

/// Flat binary f64 container with a small textual header:
///   GCTBIN v1
///   kind <sinogram|image|tensor>
///   shape <d0> <d1> ...
///   geom <16 hex digits>
///   end
/// followed by the raw row-major doubles. Round-trips byte-identically.
void write_tensor_file(const std::string& path, const Tensor& tensor, const std::string& kind,
                       std::uint64_t geometry_hash);
Tensor read_tensor_file(const std::string& path, std::string* kind = nullptr,
                        std::uint64_t* geometry_hash = nullptr);

/// 8-bit binary PGM (P5) export, min-max normalized.
void write_pgm(const std::string& path, const Tensor& image);

/// Formats a double with enough digits to round-trip exactly.
std::string format_double(double value);

} // namespace graphct

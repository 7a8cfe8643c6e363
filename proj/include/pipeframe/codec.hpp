#pragma once

#include <filesystem>

#include "pipeframe/image.hpp"

namespace pipeframe {

// Decodes a PNG (8-bit gray or RGB) or binary PGM (P5) file, dispatching on
// the magic bytes. Anything else raises DecodeError.
Image8 read_image(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const Image8& img);
void write_pgm(const std::filesystem::path& path, const Image8& img); // gray only

void write_png(const std::filesystem::path& path, const Frame& frame);

} // namespace pipeframe

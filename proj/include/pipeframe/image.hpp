#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pipeframe {

// Interleaved 8-bit image, 1 (gray) or 3 (RGB) channels. Used by the codec
// layer and the quality metrics; the processing pipeline runs on Frame.
struct Image8 {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> pixels; // row-major, interleaved

  std::uint8_t at(int x, int y, int c = 0) const {
    return pixels[(std::size_t(y) * width + x) * channels + c];
  }
  std::uint8_t& at(int x, int y, int c = 0) {
    return pixels[(std::size_t(y) * width + x) * channels + c];
  }
  bool same_shape(const Image8& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
};

// One grayscale frame of a sequence. Pixels are row-major intensities in
// [0, 255]; index is the 0-based temporal ordinal within the sequence.
struct Frame {
  int index = 0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
};

struct FrameSequence {
  std::vector<Frame> frames;
  std::string source;

  int size() const { return int(frames.size()); }
  int width() const { return frames.empty() ? 0 : frames.front().width; }
  int height() const { return frames.empty() ? 0 : frames.front().height; }
};

// Level 0 is full resolution; level k+1 is the 2x2 box downsample of level k.
struct Pyramid {
  std::vector<Frame> levels;

  int level_count() const { return int(levels.size()); }
};

// BT.601 luma, rounded to nearest integer.
std::uint8_t luma_from_rgb(std::uint8_t r, std::uint8_t g, std::uint8_t b);

Frame to_gray(const Image8& img, int index = 0);

// Loads all files under `dir` whose filename matches `pattern` (glob with
// * and ?), ordered by the natural numeric sort of their names. Accepts
// 8-bit gray/RGB PNG and binary PGM (P5).
FrameSequence load_sequence(const std::filesystem::path& dir, const std::string& pattern = "*");

// 2x2 box-filter downsample with floor halving; sums rounded to nearest.
Frame downsample_2x2(const Frame& frame);

Pyramid build_pyramid(const Frame& frame, int level_count);

} // namespace pipeframe

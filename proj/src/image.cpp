#include "pipeframe/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "pipeframe/codec.hpp"
#include "pipeframe/error.hpp"

namespace pipeframe {

namespace {

bool glob_match(const std::string& pattern, const std::string& name) {
  std::size_t p = 0, n = 0, star = std::string::npos, star_n = 0;
  while (n < name.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
      ++p;
      ++n;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      star_n = n;
    } else if (star != std::string::npos) {
      p = star + 1;
      n = ++star_n;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

// Natural sort: digit runs compare numerically, everything else byte-wise.
bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = bool(std::isdigit(static_cast<unsigned char>(a[i])));
    const bool db = bool(std::isdigit(static_cast<unsigned char>(b[j])));
    if (da && db) {
      std::size_t ia = i, jb = j;
      while (ia < a.size() && std::isdigit(static_cast<unsigned char>(a[ia]))) ++ia;
      while (jb < b.size() && std::isdigit(static_cast<unsigned char>(b[jb]))) ++jb;
      std::size_t sa = i, sb = j;
      while (sa < ia - 1 && a[sa] == '0') ++sa; // skip leading zeros
      while (sb < jb - 1 && b[sb] == '0') ++sb;
      const std::size_t la = ia - sa, lb = jb - sb;
      if (la != lb) return la < lb;
      const int cmp = a.compare(sa, la, b, sb, lb);
      if (cmp != 0) return cmp < 0;
      i = ia;
      j = jb;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() < b.size() || (a.size() == b.size() && a < b);
}

} // namespace

std::uint8_t luma_from_rgb(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return std::uint8_t(std::lround(y));
}

Frame to_gray(const Image8& img, int index) {
  Frame f;
  f.index = index;
  f.width = img.width;
  f.height = img.height;
  f.pixels.resize(std::size_t(img.width) * img.height);
  if (img.channels == 1) {
    f.pixels = img.pixels;
  } else {
    for (std::size_t i = 0; i < f.pixels.size(); ++i) {
      const std::uint8_t* px = &img.pixels[i * 3];
      f.pixels[i] = luma_from_rgb(px[0], px[1], px[2]);
    }
  }
  return f;
}

FrameSequence load_sequence(const std::filesystem::path& dir, const std::string& pattern) {
  if (!std::filesystem::is_directory(dir))
    throw Error(Errc::io_error, "not a directory: " + dir.string());

  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    if (ext != ".png" && ext != ".pgm") continue;
    if (!glob_match(pattern, name)) continue;
    names.push_back(name);
  }
  if (names.size() < 2)
    throw Error(Errc::empty_sequence,
                "need at least 2 frames matching '" + pattern + "' in " + dir.string());

  std::sort(names.begin(), names.end(), natural_less);

  FrameSequence seq;
  seq.source = dir.string();
  seq.frames.reserve(names.size());
  for (std::size_t k = 0; k < names.size(); ++k) {
    Image8 img = read_image(dir / names[k]);
    seq.frames.push_back(to_gray(img, int(k)));
  }

  const int w = seq.frames.front().width, h = seq.frames.front().height;
  for (const Frame& f : seq.frames) {
    if (f.width != w || f.height != h)
      throw Error(Errc::dimension_mismatch, "frame sizes differ in " + dir.string());
  }
  if (w < 32 || h < 32)
    throw Error(Errc::dimension_mismatch, "frames must be at least 32x32");
  return seq;
}

Frame downsample_2x2(const Frame& frame) {
  Frame out;
  out.index = frame.index;
  out.width = frame.width / 2;
  out.height = frame.height / 2;
  out.pixels.resize(std::size_t(out.width) * out.height);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      const unsigned sum = unsigned(frame.at(2 * x, 2 * y)) + frame.at(2 * x + 1, 2 * y) +
                           frame.at(2 * x, 2 * y + 1) + frame.at(2 * x + 1, 2 * y + 1);
      out.at(x, y) = std::uint8_t((sum + 2) / 4); // round to nearest
    }
  }
  return out;
}

Pyramid build_pyramid(const Frame& frame, int level_count) {
  if (level_count < 1) throw Error(Errc::too_many_levels, "level_count must be >= 1");
  const int top_w = frame.width >> (level_count - 1);
  const int top_h = frame.height >> (level_count - 1);
  if (top_w < 8 || top_h < 8)
    throw Error(Errc::too_many_levels, "coarsest level would be smaller than 8x8");

  Pyramid pyr;
  pyr.levels.reserve(std::size_t(level_count));
  pyr.levels.push_back(frame);
  for (int k = 1; k < level_count; ++k) pyr.levels.push_back(downsample_2x2(pyr.levels.back()));
  return pyr;
}

} // namespace pipeframe

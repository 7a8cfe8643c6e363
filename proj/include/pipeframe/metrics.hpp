#pragma once

#include <string>

#include "pipeframe/image.hpp"

namespace pipeframe {

// Peak signal-to-noise ratio in dB over all pixels and channels;
// +infinity when the images are identical.
double psnr(const Image8& a, const Image8& b, double max_value = 255.0);
double psnr(const Frame& a, const Frame& b);

// Mean SSIM index with the standard 11x11 Gaussian window (sigma 1.5),
// C1 = (0.01*255)^2, C2 = (0.03*255)^2, over all fully-valid window
// positions. RGB inputs score as the mean of the per-channel indices.
double ssim(const Frame& a, const Frame& b);
double ssim(const Image8& a, const Image8& b);

struct MetricReport {
  double psnr = 0.0; // may be +infinity
  double ssim = 0.0;
  std::string ref_id;
  std::string test_id;
};

} // namespace pipeframe

#include "pipeframe/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "pipeframe/error.hpp"

namespace pipeframe {

namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

std::vector<double> gaussian_kernel() {
  std::vector<double> k(kSsimWindow);
  const int half = kSsimWindow / 2;
  double sum = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - half;
    k[std::size_t(i)] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    sum += k[std::size_t(i)];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable valid-region convolution with the 1D kernel in both directions.
// Output is (w - 10) x (h - 10).
std::vector<double> gauss_filter_valid(const std::vector<double>& img, int w, int h, int& ow,
                                       int& oh) {
  static const std::vector<double> k = gaussian_kernel();
  const int half = kSsimWindow / 2;
  ow = w - 2 * half;
  oh = h - 2 * half;

  std::vector<double> horiz(std::size_t(ow) * h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < kSsimWindow; ++i) acc += k[std::size_t(i)] * img[std::size_t(y) * w + x + i];
      horiz[std::size_t(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(std::size_t(ow) * oh, 0.0);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < kSsimWindow; ++i) acc += k[std::size_t(i)] * horiz[std::size_t(y + i) * ow + x];
      out[std::size_t(y) * ow + x] = acc;
    }
  }
  return out;
}

double ssim_plane(const std::vector<double>& a, const std::vector<double>& b, int w, int h) {
  const std::size_t n = a.size();
  std::vector<double> aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  int ow = 0, oh = 0;
  const std::vector<double> mu_a = gauss_filter_valid(a, w, h, ow, oh);
  const std::vector<double> mu_b = gauss_filter_valid(b, w, h, ow, oh);
  const std::vector<double> m_aa = gauss_filter_valid(aa, w, h, ow, oh);
  const std::vector<double> m_bb = gauss_filter_valid(bb, w, h, ow, oh);
  const std::vector<double> m_ab = gauss_filter_valid(ab, w, h, ow, oh);

  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double var_a = m_aa[i] - mu_a[i] * mu_a[i];
    const double var_b = m_bb[i] - mu_b[i] * mu_b[i];
    const double cov = m_ab[i] - mu_a[i] * mu_b[i];
    total += ((2.0 * mu_a[i] * mu_b[i] + kC1) * (2.0 * cov + kC2)) /
             ((mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + kC1) * (var_a + var_b + kC2));
  }
  return total / double(mu_a.size());
}

} // namespace

double psnr(const Image8& a, const Image8& b, double max_value) {
  if (!a.same_shape(b)) throw Error(Errc::dimension_mismatch, "psnr: images differ in shape");
  if (a.pixels.empty()) throw Error(Errc::dimension_mismatch, "psnr: empty images");
  double mse = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = double(a.pixels[i]) - double(b.pixels[i]);
    mse += d * d;
  }
  mse /= double(a.pixels.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(max_value * max_value / mse);
}

double psnr(const Frame& a, const Frame& b) {
  Image8 ia{a.width, a.height, 1, a.pixels};
  Image8 ib{b.width, b.height, 1, b.pixels};
  return psnr(ia, ib);
}

double ssim(const Frame& a, const Frame& b) {
  Image8 ia{a.width, a.height, 1, a.pixels};
  Image8 ib{b.width, b.height, 1, b.pixels};
  return ssim(ia, ib);
}

double ssim(const Image8& a, const Image8& b) {
  if (!a.same_shape(b)) throw Error(Errc::dimension_mismatch, "ssim: images differ in shape");
  if (a.width < kSsimWindow || a.height < kSsimWindow)
    throw Error(Errc::size_mismatch, "ssim: images must be at least 11x11");

  double total = 0.0;
  const std::size_t plane = std::size_t(a.width) * a.height;
  std::vector<double> pa(plane), pb(plane);
  for (int c = 0; c < a.channels; ++c) {
    for (std::size_t i = 0; i < plane; ++i) {
      pa[i] = a.pixels[i * std::size_t(a.channels) + std::size_t(c)];
      pb[i] = b.pixels[i * std::size_t(b.channels) + std::size_t(c)];
    }
    total += ssim_plane(pa, pb, a.width, a.height);
  }
  return total / a.channels;
}

} // namespace pipeframe

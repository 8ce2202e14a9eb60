// Copyright 2026 The ccvq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ccvq/rng.hpp"

namespace ccvq {

// Tag values are part of the checkpoint and raw-image file formats; do not
// reorder.
enum class ColourSpace : std::uint8_t {
  Srgb = 0,       // display-referred, gamma-encoded
  LinearRgb = 1,  // scene-linear sRGB primaries
  Lms = 2,        // cone excitations, D65-normalised
  Lab = 3,        // CIE L*a*b*, D65 white
  Dkl = 4,        // opponent axes over LMS, D65 grey origin
  Hsv = 5,        // hexcone over the linear RGB cube
};

inline const char* to_string(ColourSpace s) {
  switch (s) {
    case ColourSpace::Srgb: return "srgb";
    case ColourSpace::LinearRgb: return "linear_rgb";
    case ColourSpace::Lms: return "lms";
    case ColourSpace::Lab: return "lab";
    case ColourSpace::Dkl: return "dkl";
    case ColourSpace::Hsv: return "hsv";
  }
  throw std::invalid_argument("unknown colour space tag");
}

inline std::optional<ColourSpace> parse_colour_space(std::string_view name) {
  if (name == "srgb" || name == "rgb") return ColourSpace::Srgb;
  if (name == "linear_rgb" || name == "linear") return ColourSpace::LinearRgb;
  if (name == "lms") return ColourSpace::Lms;
  if (name == "lab") return ColourSpace::Lab;
  if (name == "dkl") return ColourSpace::Dkl;
  if (name == "hsv") return ColourSpace::Hsv;
  return std::nullopt;
}

inline ColourSpace colour_space_from_tag(std::uint8_t tag) {
  if (tag > 5) throw std::invalid_argument("invalid colour space tag byte");
  return static_cast<ColourSpace>(tag);
}

struct ColourTriplet {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  ColourSpace space = ColourSpace::Srgb;
};

// Sticky out-of-range indicators. Conversions never clamp mid-pipeline
// (that would break invertibility); clamping happens only at image export.
struct ConversionFlags {
  bool clamped_input = false;  // sRGB decode saw channels outside [0,1]
  bool out_of_gamut = false;   // an inverse transform left the RGB cube
};

namespace detail {

using Vec3 = std::array<double, 3>;

struct Mat3 {
  // row-major
  std::array<double, 9> m{};

  Vec3 operator*(const Vec3& v) const {
    return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
            m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
            m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
  }

  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += m[i * 3 + k] * o.m[k * 3 + j];
        r.m[i * 3 + j] = s;
      }
    return r;
  }

  Mat3 inverse() const {
    const double a = m[0], b = m[1], c = m[2];
    const double d = m[3], e = m[4], f = m[5];
    const double g = m[6], h = m[7], i = m[8];
    const double A = e * i - f * h, B = c * h - b * i, C = b * f - c * e;
    const double D = f * g - d * i, E = a * i - c * g, F = c * d - a * f;
    const double G = d * h - e * g, H = b * g - a * h, I = a * e - b * d;
    const double det = a * A + b * D + c * G;
    if (det == 0.0) throw std::runtime_error("singular conversion matrix");
    const double s = 1.0 / det;
    return Mat3{{A * s, B * s, C * s, D * s, E * s, F * s, G * s, H * s, I * s}};
  }
};

// All fixed conversion matrices, derived once from two published bases:
//  - linear sRGB -> CIE XYZ with the D65 white point (IEC 61966-2-1
//    primaries); the white is taken as the exact row sums so that
//    rgb(1,1,1) maps to L*a*b* (100,0,0) with no residual.
//  - Hunt-Pointer-Estevez cone fundamentals XYZ -> LMS, rescaled so the
//    D65 white gives cone excitations (1,1,1).
// The opponent transform puts the achromatic axis at (L+M)/2 with
// chromatic axes (L-M)/2 and S-(L+M)/2 (zero on the grey axis), each
// chromatic axis rescaled by its extreme over the RGB cube corners so
// every in-gamut colour lands in [-1,1].
struct ConversionTables {
  Mat3 rgb_to_xyz, xyz_to_rgb;
  Vec3 white_xyz;
  Mat3 rgb_to_lms, lms_to_rgb;
  Mat3 rgb_to_dkl, dkl_to_rgb;

  ConversionTables() {
    rgb_to_xyz = Mat3{{0.4124564, 0.3575761, 0.1804375,
                       0.2126729, 0.7151522, 0.0721750,
                       0.0193339, 0.1191920, 0.9503041}};
    xyz_to_rgb = rgb_to_xyz.inverse();
    white_xyz = rgb_to_xyz * Vec3{1.0, 1.0, 1.0};

    const Mat3 hpe{{0.38971, 0.68898, -0.07868,
                    -0.22981, 1.18340, 0.04641,
                    0.00000, 0.00000, 1.00000}};
    const Vec3 white_lms = hpe * white_xyz;
    Mat3 lms_unscaled = hpe * rgb_to_xyz;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) lms_unscaled.m[r * 3 + c] /= white_lms[r];
    rgb_to_lms = lms_unscaled;
    lms_to_rgb = rgb_to_lms.inverse();

    const Mat3 opponent{{0.5, 0.5, 0.0,
                         0.5, -0.5, 0.0,
                         -0.5, -0.5, 1.0}};
    Mat3 dkl_raw = opponent * rgb_to_lms;
    double rg_max = 0.0, yv_max = 0.0;
    for (int corner = 0; corner < 8; ++corner) {
      const Vec3 rgb{static_cast<double>(corner & 1),
                     static_cast<double>((corner >> 1) & 1),
                     static_cast<double>((corner >> 2) & 1)};
      const Vec3 d = dkl_raw * rgb;
      rg_max = std::max(rg_max, std::abs(d[1]));
      yv_max = std::max(yv_max, std::abs(d[2]));
    }
    for (int c = 0; c < 3; ++c) {
      dkl_raw.m[3 + c] /= rg_max;
      dkl_raw.m[6 + c] /= yv_max;
    }
    rgb_to_dkl = dkl_raw;
    dkl_to_rgb = rgb_to_dkl.inverse();
  }
};

inline const ConversionTables& tables() {
  static const ConversionTables t;
  return t;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scalar transfer functions

inline double srgb_decode_channel(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double srgb_encode_channel(double c) {
  return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

// ---------------------------------------------------------------------------
// Triplet conversions

inline ColourTriplet srgb_decode(const ColourTriplet& t,
                                 ConversionFlags* flags = nullptr) {
  if (t.space != ColourSpace::Srgb)
    throw std::invalid_argument("srgb_decode expects an sRGB triplet");
  auto prep = [&](double c) {
    if (c < 0.0 || c > 1.0) {
      if (flags) flags->clamped_input = true;
      c = std::clamp(c, 0.0, 1.0);
    }
    return c;
  };
  return {srgb_decode_channel(prep(t.c0)), srgb_decode_channel(prep(t.c1)),
          srgb_decode_channel(prep(t.c2)), ColourSpace::LinearRgb};
}

inline ColourTriplet srgb_encode(const ColourTriplet& t,
                                 ConversionFlags* flags = nullptr) {
  if (t.space != ColourSpace::LinearRgb)
    throw std::invalid_argument("srgb_encode expects a linear RGB triplet");
  if (flags && (t.c0 < 0.0 || t.c0 > 1.0 || t.c1 < 0.0 || t.c1 > 1.0 ||
                t.c2 < 0.0 || t.c2 > 1.0))
    flags->out_of_gamut = true;
  return {srgb_encode_channel(t.c0), srgb_encode_channel(t.c1),
          srgb_encode_channel(t.c2), ColourSpace::Srgb};
}

namespace detail {

inline double lab_f(double t) {
  constexpr double kDelta = 6.0 / 29.0;
  constexpr double kDelta3 = kDelta * kDelta * kDelta;
  return t > kDelta3 ? std::cbrt(t) : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

inline double lab_f_inv(double t) {
  constexpr double kDelta = 6.0 / 29.0;
  return t > kDelta ? t * t * t : 3.0 * kDelta * kDelta * (t - 4.0 / 29.0);
}

}  // namespace detail

inline ColourTriplet rgb_to_lab(const ColourTriplet& t) {
  if (t.space != ColourSpace::LinearRgb)
    throw std::invalid_argument("rgb_to_lab expects linear RGB");
  const auto& tb = detail::tables();
  const auto xyz = tb.rgb_to_xyz * detail::Vec3{t.c0, t.c1, t.c2};
  const double fx = detail::lab_f(xyz[0] / tb.white_xyz[0]);
  const double fy = detail::lab_f(xyz[1] / tb.white_xyz[1]);
  const double fz = detail::lab_f(xyz[2] / tb.white_xyz[2]);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz),
          ColourSpace::Lab};
}

inline ColourTriplet lab_to_rgb(const ColourTriplet& t,
                                ConversionFlags* flags = nullptr) {
  if (t.space != ColourSpace::Lab)
    throw std::invalid_argument("lab_to_rgb expects L*a*b*");
  const auto& tb = detail::tables();
  const double fy = (t.c0 + 16.0) / 116.0;
  const double fx = fy + t.c1 / 500.0;
  const double fz = fy - t.c2 / 200.0;
  const detail::Vec3 xyz{detail::lab_f_inv(fx) * tb.white_xyz[0],
                         detail::lab_f_inv(fy) * tb.white_xyz[1],
                         detail::lab_f_inv(fz) * tb.white_xyz[2]};
  const auto rgb = tb.xyz_to_rgb * xyz;
  if (flags && (rgb[0] < 0.0 || rgb[0] > 1.0 || rgb[1] < 0.0 || rgb[1] > 1.0 ||
                rgb[2] < 0.0 || rgb[2] > 1.0))
    flags->out_of_gamut = true;
  return {rgb[0], rgb[1], rgb[2], ColourSpace::LinearRgb};
}

inline ColourTriplet rgb_to_lms(const ColourTriplet& t) {
  if (t.space != ColourSpace::LinearRgb)
    throw std::invalid_argument("rgb_to_lms expects linear RGB");
  const auto v = detail::tables().rgb_to_lms * detail::Vec3{t.c0, t.c1, t.c2};
  return {v[0], v[1], v[2], ColourSpace::Lms};
}

inline ColourTriplet lms_to_rgb(const ColourTriplet& t,
                                ConversionFlags* flags = nullptr) {
  if (t.space != ColourSpace::Lms)
    throw std::invalid_argument("lms_to_rgb expects LMS");
  const auto v = detail::tables().lms_to_rgb * detail::Vec3{t.c0, t.c1, t.c2};
  if (flags && (v[0] < 0.0 || v[0] > 1.0 || v[1] < 0.0 || v[1] > 1.0 ||
                v[2] < 0.0 || v[2] > 1.0))
    flags->out_of_gamut = true;
  return {v[0], v[1], v[2], ColourSpace::LinearRgb};
}

inline ColourTriplet rgb_to_dkl(const ColourTriplet& t) {
  if (t.space != ColourSpace::LinearRgb)
    throw std::invalid_argument("rgb_to_dkl expects linear RGB");
  const auto v = detail::tables().rgb_to_dkl * detail::Vec3{t.c0, t.c1, t.c2};
  return {v[0], v[1], v[2], ColourSpace::Dkl};
}

inline ColourTriplet dkl_to_rgb(const ColourTriplet& t,
                                ConversionFlags* flags = nullptr) {
  if (t.space != ColourSpace::Dkl)
    throw std::invalid_argument("dkl_to_rgb expects DKL");
  const auto v = detail::tables().dkl_to_rgb * detail::Vec3{t.c0, t.c1, t.c2};
  if (flags && (v[0] < 0.0 || v[0] > 1.0 || v[1] < 0.0 || v[1] > 1.0 ||
                v[2] < 0.0 || v[2] > 1.0))
    flags->out_of_gamut = true;
  return {v[0], v[1], v[2], ColourSpace::LinearRgb};
}

// Hexcone over the linear RGB cube. Hue is reported as 0 at zero
// saturation, which removes the singularity on the achromatic axis.
inline ColourTriplet rgb_to_hsv(const ColourTriplet& t) {
  if (t.space != ColourSpace::LinearRgb)
    throw std::invalid_argument("rgb_to_hsv expects linear RGB");
  const double mx = std::max({t.c0, t.c1, t.c2});
  const double mn = std::min({t.c0, t.c1, t.c2});
  const double delta = mx - mn;
  double h = 0.0;
  if (delta > 0.0) {
    if (mx == t.c0)
      h = 60.0 * std::fmod((t.c1 - t.c2) / delta + 6.0, 6.0);
    else if (mx == t.c1)
      h = 60.0 * ((t.c2 - t.c0) / delta + 2.0);
    else
      h = 60.0 * ((t.c0 - t.c1) / delta + 4.0);
  }
  const double s = mx > 0.0 ? delta / mx : 0.0;
  if (s == 0.0) h = 0.0;
  return {h, s, mx, ColourSpace::Hsv};
}

inline ColourTriplet hsv_to_rgb(const ColourTriplet& t) {
  if (t.space != ColourSpace::Hsv)
    throw std::invalid_argument("hsv_to_rgb expects HSV");
  const double h = std::fmod(std::fmod(t.c0, 360.0) + 360.0, 360.0) / 60.0;
  const double s = t.c1, v = t.c2;
  const int sector = static_cast<int>(h) % 6;
  const double f = h - std::floor(h);
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double u = v * (1.0 - s * (1.0 - f));
  double r, g, b;
  switch (sector) {
    case 0: r = v; g = u; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = u; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = u; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
  return {r, g, b, ColourSpace::LinearRgb};
}

// ---------------------------------------------------------------------------
// Generic routing, linear RGB as the hub

inline ColourTriplet to_linear_rgb(const ColourTriplet& t,
                                   ConversionFlags* flags = nullptr) {
  switch (t.space) {
    case ColourSpace::LinearRgb: return t;
    case ColourSpace::Srgb: return srgb_decode(t, flags);
    case ColourSpace::Lms: return lms_to_rgb(t, flags);
    case ColourSpace::Lab: return lab_to_rgb(t, flags);
    case ColourSpace::Dkl: return dkl_to_rgb(t, flags);
    case ColourSpace::Hsv: return hsv_to_rgb(t);
  }
  throw std::invalid_argument("unknown colour space tag");
}

inline ColourTriplet from_linear_rgb(const ColourTriplet& t, ColourSpace dst,
                                     ConversionFlags* flags = nullptr) {
  switch (dst) {
    case ColourSpace::LinearRgb: return t;
    case ColourSpace::Srgb: return srgb_encode(t, flags);
    case ColourSpace::Lms: return rgb_to_lms(t);
    case ColourSpace::Lab: return rgb_to_lab(t);
    case ColourSpace::Dkl: return rgb_to_dkl(t);
    case ColourSpace::Hsv: return rgb_to_hsv(t);
  }
  throw std::invalid_argument("unknown colour space tag");
}

inline ColourTriplet convert(const ColourTriplet& t, ColourSpace dst,
                             ConversionFlags* flags = nullptr) {
  if (t.space == dst) return t;
  return from_linear_rgb(to_linear_rgb(t, flags), dst, flags);
}

// ---------------------------------------------------------------------------
// Images

struct ImageBuffer {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> data;  // row-major H x W x 3
  ColourSpace space = ColourSpace::Srgb;

  ImageBuffer() = default;
  ImageBuffer(std::size_t h, std::size_t w, ColourSpace s)
      : height(h), width(w), data(h * w * 3, 0.0), space(s) {
    if (h < 1 || w < 1) throw std::invalid_argument("image must be at least 1x1");
  }

  std::size_t pixel_count() const { return height * width; }

  ColourTriplet pixel(std::size_t y, std::size_t x) const {
    const std::size_t i = (y * width + x) * 3;
    return {data[i], data[i + 1], data[i + 2], space};
  }
  ColourTriplet pixel(std::size_t p) const {
    const std::size_t i = p * 3;
    return {data[i], data[i + 1], data[i + 2], space};
  }
  void set_pixel(std::size_t y, std::size_t x, const ColourTriplet& t) {
    const std::size_t i = (y * width + x) * 3;
    data[i] = t.c0;
    data[i + 1] = t.c1;
    data[i + 2] = t.c2;
  }
  void set_pixel(std::size_t p, const ColourTriplet& t) {
    const std::size_t i = p * 3;
    data[i] = t.c0;
    data[i + 1] = t.c1;
    data[i + 2] = t.c2;
  }
};

inline ImageBuffer convert_image(const ImageBuffer& img, ColourSpace dst,
                                 ConversionFlags* flags = nullptr) {
  if (img.space == dst) return img;
  ImageBuffer out(img.height, img.width, dst);
  const std::size_t n = img.pixel_count();
  for (std::size_t p = 0; p < n; ++p) {
    out.set_pixel(p, convert(img.pixel(p), dst, flags));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Network-range normalisation

struct ChannelBounds {
  double lo, hi;
};

// Normative gamut bounds per space (also published as docs/gamut_bounds.csv).
inline std::array<ChannelBounds, 3> gamut_bounds(ColourSpace s) {
  switch (s) {
    case ColourSpace::Srgb:
    case ColourSpace::LinearRgb:
    case ColourSpace::Lms:
      return {{{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}}};
    case ColourSpace::Lab:
      return {{{0.0, 100.0}, {-128.0, 128.0}, {-128.0, 128.0}}};
    case ColourSpace::Dkl:
      return {{{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}};
    case ColourSpace::Hsv:
      return {{{0.0, 360.0}, {0.0, 1.0}, {0.0, 1.0}}};
  }
  throw std::invalid_argument("unknown colour space tag");
}

inline ImageBuffer normalize_for_network(const ImageBuffer& img) {
  const auto b = gamut_bounds(img.space);
  ImageBuffer out(img.height, img.width, img.space);
  const std::size_t n = img.data.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ch = b[i % 3];
    out.data[i] = (img.data[i] - ch.lo) / (ch.hi - ch.lo);
  }
  return out;
}

inline ImageBuffer denormalize_from_network(const ImageBuffer& img) {
  const auto b = gamut_bounds(img.space);
  ImageBuffer out(img.height, img.width, img.space);
  const std::size_t n = img.data.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ch = b[i % 3];
    out.data[i] = img.data[i] * (ch.hi - ch.lo) + ch.lo;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Channel correlation statistics

struct CorrelationReport {
  ColourSpace space = ColourSpace::Srgb;
  double r01 = 0.0, r02 = 0.0, r12 = 0.0;
  bool degenerate01 = false, degenerate02 = false, degenerate12 = false;
  std::size_t sample_count = 0;
};

namespace detail {

struct MomentSums {
  std::uint64_t order_key = 0;  // content hash; fixes the reduction order
  double n = 0.0;
  Vec3 sum{}, sum_sq{};
  Vec3 sum_cross{};  // c0*c1, c0*c2, c1*c2
};

}  // namespace detail

// Pearson correlations between channel pairs over a pooled random sample
// (pixels_per_image draws per image, with replacement), measured after
// conversion to `space`. Each image's sampling stream is derived from the
// seed and the image content, and partial sums are reduced in content-hash
// order, so the report is invariant under reordering of the image list.
inline CorrelationReport channel_correlations(
    const std::vector<ImageBuffer>& images, ColourSpace space,
    std::size_t pixels_per_image, std::uint64_t seed) {
  if (images.empty())
    throw std::invalid_argument("channel_correlations needs at least one image");
  if (pixels_per_image < 2)
    throw std::invalid_argument("channel_correlations needs >= 2 pixels per image");

  std::vector<detail::MomentSums> partials;
  partials.reserve(images.size());
  for (const auto& img : images) {
    detail::MomentSums ms;
    std::uint64_t h = fnv1a64(img.data.data(), img.data.size() * sizeof(double));
    h = fnv1a64(&img.height, sizeof(img.height), h);
    h = fnv1a64(&img.width, sizeof(img.width), h);
    ms.order_key = h;
    Rng rng(combine_seed(seed, h));
    for (std::size_t i = 0; i < pixels_per_image; ++i) {
      const auto p = img.pixel(rng.uniform_int(img.pixel_count()));
      const auto t = convert(p, space);
      ms.n += 1.0;
      ms.sum[0] += t.c0;
      ms.sum[1] += t.c1;
      ms.sum[2] += t.c2;
      ms.sum_sq[0] += t.c0 * t.c0;
      ms.sum_sq[1] += t.c1 * t.c1;
      ms.sum_sq[2] += t.c2 * t.c2;
      ms.sum_cross[0] += t.c0 * t.c1;
      ms.sum_cross[1] += t.c0 * t.c2;
      ms.sum_cross[2] += t.c1 * t.c2;
    }
    partials.push_back(ms);
  }
  std::sort(partials.begin(), partials.end(),
            [](const detail::MomentSums& a, const detail::MomentSums& b) {
              return a.order_key < b.order_key;
            });

  detail::MomentSums total;
  for (const auto& ms : partials) {
    total.n += ms.n;
    for (int c = 0; c < 3; ++c) {
      total.sum[c] += ms.sum[c];
      total.sum_sq[c] += ms.sum_sq[c];
      total.sum_cross[c] += ms.sum_cross[c];
    }
  }

  CorrelationReport rep;
  rep.space = space;
  rep.sample_count = static_cast<std::size_t>(total.n);
  auto pearson = [&](int a, int b, int cross, double& r, bool& degenerate) {
    const double n = total.n;
    const double var_a = n * total.sum_sq[a] - total.sum[a] * total.sum[a];
    const double var_b = n * total.sum_sq[b] - total.sum[b] * total.sum[b];
    const double cov = n * total.sum_cross[cross] - total.sum[a] * total.sum[b];
    // A channel that is constant up to rounding noise has no correlation to
    // report; the threshold is relative to the channel mean so that exact
    // zeros produced through matrix chains still count as constant.
    auto constant = [&](int c, double var) {
      const double sd = std::sqrt(std::max(var, 0.0)) / n;
      return sd <= 1e-12 * (1.0 + std::abs(total.sum[c] / n));
    };
    if (constant(a, var_a) || constant(b, var_b)) {
      r = 0.0;
      degenerate = true;
      return;
    }
    r = std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
  };
  pearson(0, 1, 0, rep.r01, rep.degenerate01);
  pearson(0, 2, 1, rep.r02, rep.degenerate02);
  pearson(1, 2, 2, rep.r12, rep.degenerate12);
  return rep;
}

}  // namespace ccvq

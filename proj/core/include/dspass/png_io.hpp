#pragma once

#include <string>

#include "dspass/segmentation_map.hpp"
#include "dspass/tensor.hpp"

namespace dspass {

/// Loads an 8-bit PNG as a 3xHxW raster scaled to [0,1]. Palette and
/// gray images are expanded to RGB; alpha is dropped.
Raster load_rgb_png(const std::string& path);

/// Writes a 3xHxW raster in [0,1] as an 8-bit RGB PNG. Values are clamped.
void save_rgb_png(const Raster& img, const std::string& path);

/// Loads a single-channel 8-bit PNG of class ids. Anything other than an
/// 8-bit grayscale image is rejected.
SegmentationMap load_label_png(const std::string& path);

/// Writes class ids as an 8-bit grayscale PNG. Output bytes depend only on
/// the pixel data, so identical maps produce identical files.
void save_label_png(const SegmentationMap& seg, const std::string& path);

}  // namespace dspass

#pragma once

#include "dspass/camera_model.hpp"
#include "dspass/segmentation_map.hpp"
#include "dspass/tensor.hpp"

namespace dspass {

enum class ResampleMode { kNearest, kBilinear };

/// Unfolds the raw annular image into a horizontally periodic panorama.
/// Output column j corresponds to azimuth azimuth_offset + 2*pi*j/out_width;
/// row i to v = i/(out_height-1). Samples are bilinear; source coordinates
/// outside the image produce `fill`.
Raster unfold(const Raster& annular, const AnnularCameraModel& model,
              int out_width, int out_height, float fill = 0.0f);

/// Projects a panorama back onto the raw annular geometry. Pixels outside
/// the ring [r_inner, r_outer] are set to `outside`.
Raster fold_back(const Raster& panorama, const AnnularCameraModel& model,
                 ResampleMode mode, float outside = 0.0f);

/// Fold-back for class-id rasters. Ids are nominal, so the resampling is
/// nearest-neighbor; requesting bilinear is an invalid input. Pixels outside
/// the ring get the ignore id.
SegmentationMap fold_back_labels(const SegmentationMap& panorama,
                                 const AnnularCameraModel& model,
                                 ResampleMode mode = ResampleMode::kNearest,
                                 std::uint8_t outside = kIgnoreId);

/// Nearest pixel index for a continuous coordinate; exact half ties resolve
/// toward the lower index.
int nearest_index(double coord);

}  // namespace dspass

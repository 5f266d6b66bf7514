#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dspass {

/// Geometry of the annular lens image: ring center, radial range, and the
/// optional radial polynomial a0..a4 mapping the normalized panorama row
/// v in [0,1] to a radius in pixels. Without the polynomial the mapping is
/// linear, r(v) = r_outer - v * (r_outer - r_inner), so row 0 samples the
/// outer radius; invert_rows flips the row direction.
struct AnnularCameraModel {
  double center_x = 0.0;
  double center_y = 0.0;
  double r_inner = 0.0;
  double r_outer = 0.0;
  int source_width = 0;
  int source_height = 0;
  double azimuth_offset = 0.0;
  bool invert_rows = false;
  std::optional<std::vector<double>> radial_poly;  ///< a0..a4

  /// Radius for normalized row coordinate v in [0,1].
  double radius_at(double v) const;

  /// Inverts radius_at on [0,1]. Linear mapping inverts in closed form; the
  /// polynomial is inverted by bisection and must be monotonic over [0,1].
  double v_at_radius(double r) const;

  /// Throws InvalidInput when radii are out of order or any field is
  /// non-finite.
  void validate() const;

  static AnnularCameraModel load_json(const std::string& path);
  void save_json(const std::string& path) const;
};

}  // namespace dspass

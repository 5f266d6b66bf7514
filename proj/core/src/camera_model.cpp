#include "dspass/camera_model.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "dspass/error.hpp"

namespace dspass {

double AnnularCameraModel::radius_at(double v) const {
  double u = invert_rows ? 1.0 - v : v;
  if (radial_poly) {
    double r = 0.0;
    for (auto it = radial_poly->rbegin(); it != radial_poly->rend(); ++it) {
      r = r * u + *it;
    }
    return r;
  }
  return r_outer - u * (r_outer - r_inner);
}

double AnnularCameraModel::v_at_radius(double r) const {
  if (!radial_poly) {
    double u = (r_outer - r) / (r_outer - r_inner);
    return invert_rows ? 1.0 - u : u;
  }
  // Bisection on u in [0,1]; assumes monotonic polynomial over the interval.
  auto eval = [&](double u) {
    double acc = 0.0;
    for (auto it = radial_poly->rbegin(); it != radial_poly->rend(); ++it) {
      acc = acc * u + *it;
    }
    return acc;
  };
  double lo = 0.0, hi = 1.0;
  bool decreasing = eval(0.0) > eval(1.0);
  for (int i = 0; i < 64; ++i) {
    double mid = 0.5 * (lo + hi);
    double rm = eval(mid);
    if ((rm > r) == decreasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double u = 0.5 * (lo + hi);
  return invert_rows ? 1.0 - u : u;
}

void AnnularCameraModel::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(center_x) || !finite(center_y) || !finite(r_inner) ||
      !finite(r_outer) || !finite(azimuth_offset)) {
    throw InvalidInput("camera model has non-finite parameters");
  }
  if (radial_poly) {
    for (double a : *radial_poly) {
      if (!finite(a)) throw InvalidInput("radial_poly has non-finite entries");
    }
    if (radial_poly->empty() || radial_poly->size() > 5) {
      throw InvalidInput("radial_poly must hold 1..5 coefficients (a0..a4)");
    }
  }
  if (!(0.0 <= r_inner && r_inner < r_outer)) {
    throw InvalidInput("camera model requires 0 <= r_inner < r_outer");
  }
  if (source_width <= 0 || source_height <= 0) {
    throw InvalidInput("camera model source dimensions must be positive");
  }
}

AnnularCameraModel AnnularCameraModel::load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open camera model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("camera model JSON parse failure in " + path + ": " +
                          e.what(),
                      0);
  }
  AnnularCameraModel m;
  try {
    m.center_x = j.at("center_x").get<double>();
    m.center_y = j.at("center_y").get<double>();
    m.r_inner = j.at("r_inner").get<double>();
    m.r_outer = j.at("r_outer").get<double>();
    m.source_width = j.at("source_width").get<int>();
    m.source_height = j.at("source_height").get<int>();
    m.azimuth_offset = j.value("azimuth_offset", 0.0);
    m.invert_rows = j.value("invert_rows", false);
    if (j.contains("radial_poly") && !j["radial_poly"].is_null()) {
      m.radial_poly = j["radial_poly"].get<std::vector<double>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("camera model file " + path +
                       " missing or mistyped field: " + e.what());
  }
  m.validate();
  return m;
}

void AnnularCameraModel::save_json(const std::string& path) const {
  nlohmann::json j{{"center_x", center_x},
                   {"center_y", center_y},
                   {"r_inner", r_inner},
                   {"r_outer", r_outer},
                   {"source_width", source_width},
                   {"source_height", source_height},
                   {"azimuth_offset", azimuth_offset},
                   {"invert_rows", invert_rows}};
  if (radial_poly) j["radial_poly"] = *radial_poly;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write camera model file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace dspass

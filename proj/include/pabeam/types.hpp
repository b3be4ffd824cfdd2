#pragma once

#include <span>
#include <vector>

#include "pabeam/error.hpp"

namespace pabeam {

// Linear transducer array along the lateral (x) axis at axial z = 0,
// element centers symmetric about the lateral origin. SI units throughout.
class ArrayGeometry {
 public:
  ArrayGeometry(int num_elements, double pitch);

  int num_elements() const { return num_elements_; }
  double pitch() const { return pitch_; }

  // position(i) = (i - (M-1)/2) * pitch, strictly increasing, odd-symmetric.
  double position(int i) const {
    return (static_cast<double>(i) - 0.5 * (num_elements_ - 1)) * pitch_;
  }
  std::vector<double> element_positions() const;

 private:
  int num_elements_;
  double pitch_;
};

// Rectangular reconstruction grid. Lateral x along the array, axial z = depth
// into the medium. Pixel counts are floor(span/step)+1 with a small relative
// tolerance so exact-ratio spans (60 mm / 0.1 mm) are not lost to rounding.
class ImagingGrid {
 public:
  ImagingGrid(double lateral_min, double lateral_max, double axial_min,
              double axial_max, double lateral_step, double axial_step);

  double lateral_min() const { return lateral_min_; }
  double lateral_max() const { return lateral_max_; }
  double axial_min() const { return axial_min_; }
  double axial_max() const { return axial_max_; }
  double lateral_step() const { return lateral_step_; }
  double axial_step() const { return axial_step_; }

  int n_lateral() const { return n_lateral_; }
  int n_axial() const { return n_axial_; }

  double lateral(int i) const { return lateral_min_ + i * lateral_step_; }
  double axial(int j) const { return axial_min_ + j * axial_step_; }

  int nearest_lateral_index(double x) const;
  int nearest_axial_index(double z) const;

  // Pixel centers in row-major order: axial outer, lateral inner; the first
  // pixel is (lateral_min, axial_min).
  std::vector<std::pair<double, double>> pixels() const;

 private:
  double lateral_min_, lateral_max_, axial_min_, axial_max_;
  double lateral_step_, axial_step_;
  int n_lateral_, n_axial_;
};

struct MediumModel {
  double sound_speed;  // m/s

  explicit MediumModel(double c) : sound_speed(c) {
    if (!(c > 0.0)) throw Error("domain_error", "sound_speed must be > 0");
  }
};

// Multichannel time-sampled pressure data: row i is channel i's time series.
class RfFrame {
 public:
  RfFrame(int num_elements, int num_samples, double sample_rate,
          double start_time, std::vector<double> data);

  int num_elements() const { return num_elements_; }
  int num_samples() const { return num_samples_; }
  double sample_rate() const { return sample_rate_; }
  double start_time() const { return start_time_; }

  std::span<const double> channel(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * num_samples_,
            static_cast<std::size_t>(num_samples_)};
  }
  const std::vector<double>& data() const { return data_; }

 private:
  int num_elements_;
  int num_samples_;
  double sample_rate_;
  double start_time_;
  std::vector<double> data_;  // row-major, channel-major
};

// Dense real image on an ImagingGrid, row-major with rows = axial lines
// (index = axial * n_lateral + lateral), matching the tabular file layout.
struct Image2D {
  int n_lateral = 0;
  int n_axial = 0;
  std::vector<double> values;

  Image2D() = default;
  Image2D(int nl, int na)
      : n_lateral(nl), n_axial(na),
        values(static_cast<std::size_t>(nl) * na, 0.0) {}

  double& at(int axial, int lateral) {
    return values[static_cast<std::size_t>(axial) * n_lateral + lateral];
  }
  double at(int axial, int lateral) const {
    return values[static_cast<std::size_t>(axial) * n_lateral + lateral];
  }
  std::span<const double> row(int axial) const {
    return {values.data() + static_cast<std::size_t>(axial) * n_lateral,
            static_cast<std::size_t>(n_lateral)};
  }
};

}  // namespace pabeam

#include "pabeam/types.hpp"

#include <cmath>

namespace pabeam {

ArrayGeometry::ArrayGeometry(int num_elements, double pitch)
    : num_elements_(num_elements), pitch_(pitch) {
  if (num_elements < 1)
    throw Error("domain_error", "num_elements must be >= 1");
  if (!(pitch > 0.0)) throw Error("domain_error", "pitch must be > 0");
}

std::vector<double> ArrayGeometry::element_positions() const {
  std::vector<double> pos(num_elements_);
  for (int i = 0; i < num_elements_; ++i) pos[i] = position(i);
  return pos;
}

namespace {

int axis_count(double min, double max, double step) {
  // floor(span/step)+1 with tolerance for exact-ratio spans.
  return static_cast<int>(std::floor((max - min) / step + 1e-9)) + 1;
}

int nearest_index(double v, double min, double step, int n) {
  int i = static_cast<int>(std::lround((v - min) / step));
  if (i < 0) i = 0;
  if (i > n - 1) i = n - 1;
  return i;
}

}  // namespace

ImagingGrid::ImagingGrid(double lateral_min, double lateral_max,
                         double axial_min, double axial_max,
                         double lateral_step, double axial_step)
    : lateral_min_(lateral_min), lateral_max_(lateral_max),
      axial_min_(axial_min), axial_max_(axial_max),
      lateral_step_(lateral_step), axial_step_(axial_step) {
  if (!(lateral_max > lateral_min))
    throw Error("domain_error", "lateral_max must exceed lateral_min");
  if (!(axial_max > axial_min))
    throw Error("domain_error", "axial_max must exceed axial_min");
  if (!(axial_min >= 0.0)) throw Error("domain_error", "axial_min must be >= 0");
  if (!(lateral_step > 0.0) || !(axial_step > 0.0))
    throw Error("domain_error", "grid steps must be > 0");
  n_lateral_ = axis_count(lateral_min, lateral_max, lateral_step);
  n_axial_ = axis_count(axial_min, axial_max, axial_step);
}

int ImagingGrid::nearest_lateral_index(double x) const {
  return nearest_index(x, lateral_min_, lateral_step_, n_lateral_);
}

int ImagingGrid::nearest_axial_index(double z) const {
  return nearest_index(z, axial_min_, axial_step_, n_axial_);
}

std::vector<std::pair<double, double>> ImagingGrid::pixels() const {
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(n_lateral_) * n_axial_);
  for (int j = 0; j < n_axial_; ++j)
    for (int i = 0; i < n_lateral_; ++i)
      out.emplace_back(lateral(i), axial(j));
  return out;
}

RfFrame::RfFrame(int num_elements, int num_samples, double sample_rate,
                 double start_time, std::vector<double> data)
    : num_elements_(num_elements), num_samples_(num_samples),
      sample_rate_(sample_rate), start_time_(start_time),
      data_(std::move(data)) {
  if (num_elements < 1 || num_samples < 1)
    throw Error("domain_error", "RfFrame dimensions must be positive");
  if (!(sample_rate > 0.0))
    throw Error("domain_error", "sample_rate must be > 0");
  if (data_.size() != static_cast<std::size_t>(num_elements) * num_samples)
    throw Error("domain_error", "RfFrame data size does not match M*N");
  for (double v : data_)
    if (!std::isfinite(v))
      throw Error("domain_error", "RfFrame contains non-finite samples");
}

}  // namespace pabeam

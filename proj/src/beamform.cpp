#include "pabeam/beamform.hpp"

#include <cmath>

#include "pabeam/pipeline.hpp"

namespace pabeam {

Method parse_method(const std::string& name) {
  if (name == "das") return Method::kDas;
  if (name == "dmas") return Method::kDmas;
  if (name == "dsdmas") return Method::kDsdmas;
  throw Error("config_invalid", "unknown method '" + name + "'");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kDas: return "das";
    case Method::kDmas: return "dmas";
    case Method::kDsdmas: return "dsdmas";
  }
  return "?";
}

KernelMode parse_mode(const std::string& name) {
  if (name == "naive") return KernelMode::kNaive;
  if (name == "fast") return KernelMode::kFast;
  throw Error("config_invalid", "unknown mode '" + name + "'");
}

std::string mode_name(KernelMode m) {
  return m == KernelMode::kNaive ? "naive" : "fast";
}

double compute_delay(double pixel_lateral, double pixel_axial,
                     double element_position, double c_bf, double fs,
                     double t0) {
  const double dx = pixel_lateral - element_position;
  const double r = std::sqrt(dx * dx + pixel_axial * pixel_axial);
  return (r / c_bf - t0) * fs;
}

namespace {

template <typename T>
T sample_linear(const T* ch, int n, double delta) {
  if (delta < 0.0 || delta > n - 1) return T{};
  const int k = static_cast<int>(delta);
  if (k >= n - 1) return ch[n - 1];
  const double frac = delta - k;
  return ch[k] * (1.0 - frac) + ch[k + 1] * frac;
}

template <typename T>
T sample_nn(const T* ch, int n, double delta) {
  if (delta < 0.0 || delta > n - 1) return T{};
  return ch[static_cast<int>(std::lround(delta))];
}

void check_method(Method method, int m) {
  if (method == Method::kDmas && m < 2)
    throw Error("domain_error", "DMAS requires at least 2 elements");
  if (method == Method::kDsdmas && m < 3)
    throw Error("domain_error", "DS-DMAS requires at least 3 elements");
}

// Shared pixel loop; Emit(j, i, y) receives the kernel output for the pixel
// at axial row j, lateral column i.
template <typename T, typename Emit>
void beamform_grid(const T* data, int m, int n, double fs, double t0,
                   const ImagingGrid& grid, const ArrayGeometry& geometry,
                   const BeamformConfig& cfg, bool parallel, Emit&& emit) {
  check_method(cfg.method, m);
  const int nl = grid.n_lateral();
  const int na = grid.n_axial();
  const std::vector<double> xe = geometry.element_positions();
  const double inv_c = 1.0 / cfg.sound_speed;
  const bool linear = cfg.interpolation == Interpolation::kLinear;

#pragma omp parallel if (parallel)
  {
    std::vector<T> delayed(m);
    std::vector<T> scratch(m > 1 ? m - 1 : 1);
#pragma omp for schedule(static)
    for (int j = 0; j < na; ++j) {
      const double z = grid.axial(j);
      const double z2 = z * z;
      for (int i = 0; i < nl; ++i) {
        const double x = grid.lateral(i);
        for (int e = 0; e < m; ++e) {
          const double dx = x - xe[e];
          const double delta =
              (std::sqrt(dx * dx + z2) * inv_c - t0) * fs;
          delayed[e] = linear ? sample_linear(data + std::size_t(e) * n, n,
                                              delta)
                              : sample_nn(data + std::size_t(e) * n, n, delta);
        }
        std::span<const T> d(delayed);
        T y{};
        switch (cfg.method) {
          case Method::kDas:
            y = das_pixel(d);
            break;
          case Method::kDmas:
            y = cfg.mode == KernelMode::kNaive ? dmas_pixel_naive(d)
                                               : dmas_pixel_fast(d);
            break;
          case Method::kDsdmas:
            y = cfg.mode == KernelMode::kNaive
                    ? dsdmas_pixel_naive(d)
                    : dsdmas_pixel_fast(d, std::span<T>(scratch));
            break;
        }
        emit(j, i, y);
      }
    }
  }
}

Image2D beamform_real(const RfFrame& frame, const ImagingGrid& grid,
                      const ArrayGeometry& geometry,
                      const BeamformConfig& cfg, bool parallel) {
  if (frame.num_elements() != geometry.num_elements())
    throw Error("domain_error", "frame/geometry element count mismatch");
  Image2D out(grid.n_lateral(), grid.n_axial());
  beamform_grid<double>(frame.data().data(), frame.num_elements(),
                        frame.num_samples(), frame.sample_rate(),
                        frame.start_time(), grid, geometry, cfg, parallel,
                        [&](int j, int i, double y) { out.at(j, i) = y; });
  return out;
}

AnalyticBeamform beamform_complex(const RfFrame& frame,
                                  const ImagingGrid& grid,
                                  const ArrayGeometry& geometry,
                                  const BeamformConfig& cfg, bool parallel) {
  if (frame.num_elements() != geometry.num_elements())
    throw Error("domain_error", "frame/geometry element count mismatch");
  const int m = frame.num_elements();
  const int n = frame.num_samples();
  std::vector<std::complex<double>> channels(std::size_t(m) * n);
  for (int e = 0; e < m; ++e) {
    auto a = analytic_signal(frame.channel(e));
    std::copy(a.begin(), a.end(), channels.begin() + std::size_t(e) * n);
  }
  AnalyticBeamform out;
  out.raw = Image2D(grid.n_lateral(), grid.n_axial());
  out.envelope = Image2D(grid.n_lateral(), grid.n_axial());
  beamform_grid<std::complex<double>>(
      channels.data(), m, n, frame.sample_rate(), frame.start_time(), grid,
      geometry, cfg, parallel, [&](int j, int i, std::complex<double> y) {
        out.raw.at(j, i) = y.real();
        out.envelope.at(j, i) = std::abs(y);
      });
  return out;
}

}  // namespace

double sample_at(std::span<const double> channel, double delta) {
  if (channel.empty()) throw Error("domain_error", "empty channel");
  return sample_linear(channel.data(), static_cast<int>(channel.size()),
                       delta);
}

std::complex<double> sample_at(std::span<const std::complex<double>> channel,
                               double delta) {
  if (channel.empty()) throw Error("domain_error", "empty channel");
  return sample_linear(channel.data(), static_cast<int>(channel.size()),
                       delta);
}

double sample_at_nearest(std::span<const double> channel, double delta) {
  if (channel.empty()) throw Error("domain_error", "empty channel");
  return sample_nn(channel.data(), static_cast<int>(channel.size()), delta);
}

Image2D beamform_image(const RfFrame& frame, const ImagingGrid& grid,
                       const ArrayGeometry& geometry,
                       const BeamformConfig& config) {
  return beamform_real(frame, grid, geometry, config, true);
}

Image2D beamform_image_serial(const RfFrame& frame, const ImagingGrid& grid,
                              const ArrayGeometry& geometry,
                              const BeamformConfig& config) {
  return beamform_real(frame, grid, geometry, config, false);
}

AnalyticBeamform beamform_analytic(const RfFrame& frame,
                                   const ImagingGrid& grid,
                                   const ArrayGeometry& geometry,
                                   const BeamformConfig& config) {
  return beamform_complex(frame, grid, geometry, config, true);
}

AnalyticBeamform beamform_analytic_serial(const RfFrame& frame,
                                          const ImagingGrid& grid,
                                          const ArrayGeometry& geometry,
                                          const BeamformConfig& config) {
  return beamform_complex(frame, grid, geometry, config, false);
}

}  // namespace pabeam

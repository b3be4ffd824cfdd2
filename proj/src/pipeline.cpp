#include "pabeam/pipeline.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace pabeam {

namespace {

std::mutex g_fftw_plan_mutex;  // FFTW plan creation is not thread-safe

// Complex-to-complex DFT pair of a fixed length with owned buffers. Each
// instance is single-threaded; construction is serialized internally.
class Dft {
 public:
  explicit Dft(int n) : n_(n) {
    buf_ = fftw_alloc_complex(n);
    spec_ = fftw_alloc_complex(n);
    std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
    fwd_ = fftw_plan_dft_1d(n, buf_, spec_, FFTW_FORWARD, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_1d(n, spec_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Dft() {
    std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(buf_);
    fftw_free(spec_);
  }
  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;

  // Fills `out` (length n) with the analytic signal of `in` (length n).
  void analytic(const double* in, std::complex<double>* out) {
    for (int k = 0; k < n_; ++k) {
      buf_[k][0] = in[k];
      buf_[k][1] = 0.0;
    }
    fftw_execute(fwd_);
    const int half = n_ / 2;
    for (int k = 1; k < n_; ++k) {
      double w;
      if (n_ % 2 == 0 && k == half)
        w = 1.0;  // Nyquist
      else if (k < (n_ + 1) / 2)
        w = 2.0;  // strictly positive frequencies
      else
        w = 0.0;  // negative frequencies
      spec_[k][0] *= w;
      spec_[k][1] *= w;
    }
    fftw_execute(inv_);
    const double scale = 1.0 / n_;
    for (int k = 0; k < n_; ++k)
      out[k] = {buf_[k][0] * scale, buf_[k][1] * scale};
  }

 private:
  int n_;
  fftw_complex* buf_;
  fftw_complex* spec_;
  fftw_plan fwd_;
  fftw_plan inv_;
};

}  // namespace

std::vector<std::complex<double>> analytic_signal(
    std::span<const double> line) {
  if (line.size() < 2)
    throw Error("domain_error", "analytic signal needs at least 2 samples");
  Dft dft(static_cast<int>(line.size()));
  std::vector<std::complex<double>> out(line.size());
  dft.analytic(line.data(), out.data());
  return out;
}

std::vector<double> hilbert_envelope(std::span<const double> line) {
  auto a = analytic_signal(line);
  std::vector<double> env(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) env[k] = std::abs(a[k]);
  return env;
}

double image_max(const Image2D& image) {
  double mx = 0.0;
  for (double v : image.values) mx = std::max(mx, v);
  return mx;
}

Image2D log_compress(const Image2D& envelope, double dynamic_range,
                     double global_max) {
  if (!(dynamic_range > 0.0))
    throw Error("domain_error", "dynamic_range must be > 0");
  const double mx = global_max > 0.0 ? global_max : image_max(envelope);
  if (mx <= 0.0)
    throw Error("zero_envelope", "cannot log-compress an all-zero envelope");
  Image2D db(envelope.n_lateral, envelope.n_axial);
  for (std::size_t i = 0; i < envelope.values.size(); ++i) {
    double v = envelope.values[i];
    db.values[i] = v > 0.0
                       ? std::max(20.0 * std::log10(v / mx), -dynamic_range)
                       : -dynamic_range;
  }
  return db;
}

Image2D envelope_image(const Image2D& raw) {
  const int nl = raw.n_lateral;
  const int na = raw.n_axial;
  Image2D env(nl, na);
  std::vector<double> col(na);
  std::vector<std::complex<double>> an(na);
  Dft dft(na);
  for (int i = 0; i < nl; ++i) {
    for (int j = 0; j < na; ++j) col[j] = raw.at(j, i);
    dft.analytic(col.data(), an.data());
    for (int j = 0; j < na; ++j) env.at(j, i) = std::abs(an[j]);
  }
  return env;
}

BeamformedImage form_image(const Image2D& raw, double dynamic_range,
                           double global_max) {
  BeamformedImage out;
  out.raw = raw;
  out.envelope = envelope_image(raw);
  out.db = log_compress(out.envelope, dynamic_range, global_max);
  out.dynamic_range = dynamic_range;
  return out;
}

BeamformedImage form_image_from_envelope(Image2D raw, Image2D envelope,
                                         double dynamic_range,
                                         double global_max) {
  BeamformedImage out;
  out.raw = std::move(raw);
  out.db = log_compress(envelope, dynamic_range, global_max);
  out.envelope = std::move(envelope);
  out.dynamic_range = dynamic_range;
  return out;
}

}  // namespace pabeam

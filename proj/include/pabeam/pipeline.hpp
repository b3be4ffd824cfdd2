#pragma once

#include <complex>
#include <span>
#include <vector>

#include "pabeam/types.hpp"

namespace pabeam {

// Analytic signal of a real series: forward DFT, zero the negative-frequency
// bins, double the strictly positive bins (DC and Nyquist kept at unit
// weight), inverse DFT. Arbitrary lengths, no padding.
std::vector<std::complex<double>> analytic_signal(std::span<const double> line);

// Magnitude of the analytic signal.
std::vector<double> hilbert_envelope(std::span<const double> line);

// db = max(20*log10(env / global_max), -dynamic_range). Errors on an all-zero
// envelope. `global_max` overrides the image's own maximum when normalizing a
// method set jointly.
Image2D log_compress(const Image2D& envelope, double dynamic_range,
                     double global_max = 0.0);

double image_max(const Image2D& image);

// Envelope detection along depth for every lateral column of a raw
// beamformed grid.
Image2D envelope_image(const Image2D& raw);

struct BeamformedImage {
  Image2D raw;       // beamformer output (pre-envelope)
  Image2D envelope;  // nonnegative magnitude
  Image2D db;        // log-compressed, max = 0 dB
  double dynamic_range = 60.0;
};

// Per-column Hilbert envelope over depth, then global log compression.
BeamformedImage form_image(const Image2D& raw, double dynamic_range,
                           double global_max = 0.0);

// Same compression applied to an envelope produced directly by the analytic
// beamforming path.
BeamformedImage form_image_from_envelope(Image2D raw, Image2D envelope,
                                         double dynamic_range,
                                         double global_max = 0.0);

}  // namespace pabeam

#pragma once

#include <span>
#include <vector>

#include "adtrack/array2d.hpp"

namespace adtrack {

// Unnormalized forward 2-D DFT; the inverse carries the 1/(rows*cols) factor.
// Plans are cached per (size, direction) and shared across threads.
SpectrumMap fft2(const RealMap& x);
SpectrumMap fft2(const SpectrumMap& x);
SpectrumMap ifft2(const SpectrumMap& X);
RealMap ifft2_real(const SpectrumMap& X);

std::vector<SpectrumMap> fft2_all(std::span<const RealMap> channels);

/// Circularly shifts so that index (0,0) moves to (rows/2, cols/2).
RealMap fftshift(const RealMap& x);
/// Inverse of fftshift.
RealMap ifftshift(const RealMap& x);

}  // namespace adtrack

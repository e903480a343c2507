#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lifeprof/ingest.hpp"

namespace lifeprof {

inline constexpr std::size_t kDefaultRhythmBins = 12;

/// Share of the day's travel distance falling in each of k equal time bins.
struct MobilityRhythm {
  std::vector<double> bins;
  bool stationary = false;  // no travel at all; bins are then all zero
};

/// One-sided DFT magnitudes |X_f| for f = 0..k/2.
struct Spectrum {
  std::vector<double> amplitudes;
};

struct TemporalFeature {
  double lfer = 0.0;
  double dcfr = 0.5;
  bool stationary = false;
};

/// Each segment's haversine length goes to the bin holding the segment's
/// midpoint time, in local time `t + utc_offset_s`.
MobilityRhythm mobility_rhythm(const CleanTrajectory& trajectory, std::size_t k = kDefaultRhythmBins,
                               std::int64_t utc_offset_s = 0);

/// X_f = sum_j x_j exp(-2 pi i f j / k). Magnitudes below the round-off
/// floor of the input (1e-12 of its L1 norm) are reported as exactly zero.
Spectrum dft_amplitudes(std::span<const double> series);

/// Low-frequency energy ratio: (amp_1^2 + amp_2^2) over the energy of
/// f = 1..k/2. Zero when that energy vanishes.
double lfer(const Spectrum& spectrum);

/// Diurnal cycle frequency ratio amp_2 / (amp_1 + amp_2); 0.5 when both vanish.
double dcfr(const Spectrum& spectrum);

TemporalFeature temporal_feature(const MobilityRhythm& rhythm);

}  // namespace lifeprof

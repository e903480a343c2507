#include "lifeprof/rhythm.hpp"

#include <cmath>
#include <numbers>

#include "lifeprof/error.hpp"

namespace lifeprof {

namespace {
constexpr std::int64_t kSecondsPerDay = 86400;
}

MobilityRhythm mobility_rhythm(const CleanTrajectory& trajectory, std::size_t k, std::int64_t utc_offset_s) {
  if (k == 0) {
    throw Error("rhythm needs at least one bin");
  }
  MobilityRhythm rhythm{std::vector<double>(k, 0.0), false};
  double total = 0.0;
  const auto& pts = trajectory.points;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d = haversine_m(pts[i - 1].cell.center(), pts[i].cell.center());
    if (d == 0.0) {
      continue;
    }
    // midpoint in local seconds-of-day, computed in integer half-seconds
    const std::int64_t twice_mid = pts[i - 1].t + pts[i].t + 2 * utc_offset_s;
    const std::int64_t twice_sod = ((twice_mid % (2 * kSecondsPerDay)) + 2 * kSecondsPerDay) % (2 * kSecondsPerDay);
    auto bin = static_cast<std::size_t>(static_cast<double>(twice_sod) * static_cast<double>(k) /
                                        static_cast<double>(2 * kSecondsPerDay));
    bin = std::min(bin, k - 1);
    rhythm.bins[bin] += d;
    total += d;
  }
  if (total == 0.0) {
    rhythm.stationary = true;
    return rhythm;
  }
  for (double& b : rhythm.bins) {
    b /= total;
  }
  return rhythm;
}

Spectrum dft_amplitudes(std::span<const double> series) {
  const std::size_t k = series.size();
  Spectrum spectrum;
  if (k == 0) {
    return spectrum;
  }
  double l1 = 0.0;
  for (double x : series) {
    l1 += std::abs(x);
  }
  const double floor = 1e-12 * l1;
  spectrum.amplitudes.resize(k / 2 + 1);
  // Goertzel recurrence, one pass per frequency.
  for (std::size_t f = 0; f <= k / 2; ++f) {
    const double omega = 2.0 * std::numbers::pi * static_cast<double>(f) / static_cast<double>(k);
    const double c = std::cos(omega);
    const double s = std::sin(omega);
    double s1 = 0.0;
    double s2 = 0.0;
    for (double x : series) {
      const double s0 = x + 2.0 * c * s1 - s2;
      s2 = s1;
      s1 = s0;
    }
    const double re = s1 - c * s2;
    const double im = s * s2;
    const double amp = std::hypot(re, im);
    spectrum.amplitudes[f] = amp <= floor ? 0.0 : amp;
  }
  return spectrum;
}

double lfer(const Spectrum& spectrum) {
  const auto& a = spectrum.amplitudes;
  double energy = 0.0;
  for (std::size_t f = 1; f < a.size(); ++f) {
    energy += a[f] * a[f];
  }
  if (energy == 0.0) {
    return 0.0;
  }
  const double a1 = a.size() > 1 ? a[1] : 0.0;
  const double a2 = a.size() > 2 ? a[2] : 0.0;
  return std::min(1.0, (a1 * a1 + a2 * a2) / energy);
}

double dcfr(const Spectrum& spectrum) {
  const auto& a = spectrum.amplitudes;
  const double a1 = a.size() > 1 ? a[1] : 0.0;
  const double a2 = a.size() > 2 ? a[2] : 0.0;
  if (a1 + a2 == 0.0) {
    return 0.5;
  }
  return a2 / (a1 + a2);
}

TemporalFeature temporal_feature(const MobilityRhythm& rhythm) {
  const Spectrum spectrum = dft_amplitudes(rhythm.bins);
  return {lfer(spectrum), dcfr(spectrum), rhythm.stationary};
}

}  // namespace lifeprof

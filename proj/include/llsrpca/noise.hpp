#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "llsrpca/hsi.hpp"

namespace llsrpca {

/// Zero-mean i.i.d. Gaussian noise of the given variance on every pixel.
struct GaussianNoise {
    double variance = 0.0;
};

/// Per-band Gaussian noise with a target SNR drawn uniformly per band.
struct GaussianSnrNoise {
    double snr_db_min = 0.0;
    double snr_db_max = 0.0;
};

/// Per band inside [band_lo, band_hi] (inclusive, zero-based): a random
/// number of whole columns, each offset by one constant draw.
struct StripeNoise {
    int band_lo = 0;
    int band_hi = 0;
    int cols_min = 0;
    int cols_max = 0;
    double offset_lo = 0.0;
    double offset_hi = 0.0;
};

/// Salt-and-pepper impulses: per band, an exact count of pixels set to the
/// band maximum plus an amplitude (salt) or the band minimum minus it,
/// clamped at 0 (pepper), with even polarity odds.
struct SaltPepperNoise {
    double fraction = 0.0;
    double intensity_lo = 0.0;
    double intensity_hi = 0.0;
};

using NoiseComponent =
    std::variant<GaussianNoise, GaussianSnrNoise, StripeNoise, SaltPepperNoise>;

/// Declarative mixed-noise protocol: components applied in order, each with a
/// sub-seed derived from `seed` and its position.
struct NoiseSpec {
    std::uint64_t seed = 0;
    std::vector<NoiseComponent> components;
};

/// JSON schema: {"seed": N, "components": [{"type": "gaussian", ...}, ...]}.
/// See the README for the per-type fields.
NoiseSpec parse_noise_spec(const std::string& json_text);
NoiseSpec load_noise_spec(const std::filesystem::path& path);
std::string noise_spec_to_json(const NoiseSpec& spec);

HsiCube add_gaussian(const HsiCube& cube, double variance, std::uint64_t seed);

struct SnrBandReport {
    double target_snr_db = 0.0;
    double noise_variance = 0.0;
    bool skipped = false;  // band had zero signal power
};

struct GaussianSnrResult {
    HsiCube cube;
    std::vector<SnrBandReport> bands;
    double mean_target_snr_db = 0.0;  // over non-skipped bands
};

GaussianSnrResult add_gaussian_snr(const HsiCube& cube, double snr_db_min, double snr_db_max,
                                   std::uint64_t seed);

HsiCube add_stripes(const HsiCube& cube, int band_lo, int band_hi, int cols_min, int cols_max,
                    double offset_lo, double offset_hi, std::uint64_t seed);

HsiCube add_salt_pepper(const HsiCube& cube, double fraction, double intensity_lo,
                        double intensity_hi, std::uint64_t seed);

/// Applies spec.components in order. Never mutates the input cube.
HsiCube apply_spec(const HsiCube& cube, const NoiseSpec& spec);

}  // namespace llsrpca

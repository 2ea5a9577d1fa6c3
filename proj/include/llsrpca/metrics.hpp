#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "llsrpca/hsi.hpp"

namespace llsrpca {

/// Peak signal-to-noise ratio in dB: 10*log10(peak^2 / MSE), capped at 99 dB
/// (identical inputs report exactly 99). peak defaults to 1 for unit-scale
/// data; throws on shape mismatch or nonpositive peak.
double psnr(const DataMatrix& reference, const DataMatrix& test, double peak = 1.0);

struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 1.0;
};

/// Mean local structural similarity over all fully-interior sliding windows,
/// Gaussian-weighted. Throws if the band is smaller than the window.
double ssim(const DataMatrix& reference, const DataMatrix& test, const SsimParams& params = {});

struct ErgasResult {
    double value = 0.0;
    std::vector<int> excluded_bands;  // reference bands with zero mean
};

/// ERGAS with resolution ratio 1: 100 * sqrt(mean over included bands of
/// (RMSE_b / mean_b)^2).
ErgasResult ergas(const HsiCube& reference, const HsiCube& test);

struct MetricReport {
    std::vector<double> per_band_psnr;
    std::vector<double> per_band_ssim;
    double mpsnr = 0.0;
    double mssim = 0.0;
    double ergas = 0.0;
    std::vector<int> ergas_excluded_bands;
    double peak = 1.0;             // taken from the reference cube maximum
    double elapsed_seconds = 0.0;  // metric computation time
};

/// Per-band PSNR/SSIM plus ERGAS, aggregated by unweighted means. The PSNR
/// peak is the reference cube's maximum value (1 when nonpositive), which is
/// the one asymmetry between the two arguments.
MetricReport evaluate(const HsiCube& reference, const HsiCube& test);

std::string metric_report_to_json(const MetricReport& report);
std::string metric_report_table(const MetricReport& report);

/// Writes <base>.json and <base>.txt.
void write_metric_report(const MetricReport& report, const std::filesystem::path& base);

}  // namespace llsrpca

#include "llsrpca/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace llsrpca {

double psnr(const DataMatrix& reference, const DataMatrix& test, double peak) {
    if (reference.rows() != test.rows() || reference.cols() != test.cols())
        throw std::invalid_argument("psnr: shape mismatch");
    if (!(peak > 0.0)) throw std::invalid_argument("psnr: peak must be positive");
    const double mse = (reference - test).squaredNorm() / static_cast<double>(reference.size());
    if (mse == 0.0) return 99.0;
    return std::min(10.0 * std::log10(peak * peak / mse), 99.0);
}

namespace {

Eigen::VectorXd gaussian_kernel_1d(int window, double sigma) {
    Eigen::VectorXd g(window);
    const double center = (window - 1) / 2.0;
    for (int i = 0; i < window; ++i)
        g(i) = std::exp(-(i - center) * (i - center) / (2.0 * sigma * sigma));
    return g / g.sum();
}

/// Separable valid-mode Gaussian filter: rows then columns.
DataMatrix gaussian_filter_valid(const DataMatrix& m, const Eigen::VectorXd& g) {
    const int w = static_cast<int>(g.size());
    DataMatrix rows(m.rows(), m.cols() - w + 1);
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j + w <= m.cols(); ++j)
            rows(i, j) = m.row(i).segment(j, w).dot(g);
    DataMatrix out(m.rows() - w + 1, rows.cols());
    for (Index j = 0; j < rows.cols(); ++j)
        for (Index i = 0; i + w <= rows.rows(); ++i)
            out(i, j) = rows.col(j).segment(i, w).dot(g);
    return out;
}

}  // namespace

double ssim(const DataMatrix& reference, const DataMatrix& test, const SsimParams& params) {
    if (reference.rows() != test.rows() || reference.cols() != test.cols())
        throw std::invalid_argument("ssim: shape mismatch");
    if (reference.rows() < params.window || reference.cols() < params.window)
        throw std::invalid_argument("ssim: band smaller than the window");

    const Eigen::VectorXd g = gaussian_kernel_1d(params.window, params.sigma);
    const DataMatrix mu_x = gaussian_filter_valid(reference, g);
    const DataMatrix mu_y = gaussian_filter_valid(test, g);
    const DataMatrix xx = gaussian_filter_valid(reference.cwiseProduct(reference), g);
    const DataMatrix yy = gaussian_filter_valid(test.cwiseProduct(test), g);
    const DataMatrix xy = gaussian_filter_valid(reference.cwiseProduct(test), g);

    const double c1 = params.k1 * params.dynamic_range * params.k1 * params.dynamic_range;
    const double c2 = params.k2 * params.dynamic_range * params.k2 * params.dynamic_range;

    double sum = 0.0;
    for (Index i = 0; i < mu_x.rows(); ++i)
        for (Index j = 0; j < mu_x.cols(); ++j) {
            const double mx = mu_x(i, j), my = mu_y(i, j);
            const double var_x = xx(i, j) - mx * mx;
            const double var_y = yy(i, j) - my * my;
            const double cov = xy(i, j) - mx * my;
            sum += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
                   ((mx * mx + my * my + c1) * (var_x + var_y + c2));
        }
    return sum / static_cast<double>(mu_x.size());
}

ErgasResult ergas(const HsiCube& reference, const HsiCube& test) {
    if (reference.rows != test.rows || reference.cols != test.cols ||
        reference.bands != test.bands)
        throw std::invalid_argument("ergas: shape mismatch");
    ErgasResult result;
    const std::size_t plane = static_cast<std::size_t>(reference.rows) * reference.cols;
    double sum = 0.0;
    int included = 0;
    for (int b = 0; b < reference.bands; ++b) {
        const double* r = reference.values.data() + plane * b;
        const double* t = test.values.data() + plane * b;
        double mean = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < plane; ++i) {
            mean += r[i];
            const double d = r[i] - t[i];
            sq += d * d;
        }
        mean /= static_cast<double>(plane);
        if (mean == 0.0) {
            result.excluded_bands.push_back(b);
            continue;
        }
        const double rmse = std::sqrt(sq / static_cast<double>(plane));
        sum += (rmse / mean) * (rmse / mean);
        ++included;
    }
    result.value = included ? 100.0 * std::sqrt(sum / included) : 0.0;
    return result;
}

MetricReport evaluate(const HsiCube& reference, const HsiCube& test) {
    const auto start = std::chrono::steady_clock::now();
    MetricReport report;
    const double ref_max = reference.values.empty()
                               ? 0.0
                               : *std::max_element(reference.values.begin(), reference.values.end());
    report.peak = ref_max > 0.0 ? ref_max : 1.0;
    for (int b = 0; b < reference.bands; ++b) {
        const DataMatrix rb = band_as_matrix(reference, b);
        const DataMatrix tb = band_as_matrix(test, b);
        report.per_band_psnr.push_back(psnr(rb, tb, report.peak));
        report.per_band_ssim.push_back(ssim(rb, tb));
    }
    const auto mean = [](const std::vector<double>& v) {
        return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    };
    report.mpsnr = mean(report.per_band_psnr);
    report.mssim = mean(report.per_band_ssim);
    const ErgasResult e = ergas(reference, test);
    report.ergas = e.value;
    report.ergas_excluded_bands = e.excluded_bands;
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string metric_report_to_json(const MetricReport& report) {
    nlohmann::json doc;
    doc["schema"] = "llsrpca-metric-report/1";
    doc["bands"] = report.per_band_psnr.size();
    doc["peak"] = report.peak;
    doc["mpsnr_db"] = report.mpsnr;
    doc["mssim"] = report.mssim;
    doc["ergas"] = report.ergas;
    doc["ergas_excluded_bands"] = report.ergas_excluded_bands;
    doc["elapsed_seconds"] = report.elapsed_seconds;
    doc["per_band"] = nlohmann::json::array();
    for (std::size_t b = 0; b < report.per_band_psnr.size(); ++b)
        doc["per_band"].push_back({{"band", b},
                                   {"psnr_db", report.per_band_psnr[b]},
                                   {"ssim", report.per_band_ssim[b]}});
    return doc.dump(2) + "\n";
}

std::string metric_report_table(const MetricReport& report) {
    std::ostringstream out;
    char line[128];
    std::snprintf(line, sizeof line, "%-6s %12s %10s\n", "band", "PSNR(dB)", "SSIM");
    out << line;
    for (std::size_t b = 0; b < report.per_band_psnr.size(); ++b) {
        std::snprintf(line, sizeof line, "%-6zu %12.4f %10.6f\n", b, report.per_band_psnr[b],
                      report.per_band_ssim[b]);
        out << line;
    }
    std::snprintf(line, sizeof line, "%-6s %12.4f %10.6f\n", "mean", report.mpsnr, report.mssim);
    out << line;
    std::snprintf(line, sizeof line, "ERGAS  %12.4f\n", report.ergas);
    out << line;
    return out.str();
}

void write_metric_report(const MetricReport& report, const std::filesystem::path& base) {
    {
        std::ofstream out(base.string() + ".json", std::ios::trunc);
        if (!out) throw IoError("write_metric_report: cannot open " + base.string() + ".json");
        out << metric_report_to_json(report);
    }
    std::ofstream out(base.string() + ".txt", std::ios::trunc);
    if (!out) throw IoError("write_metric_report: cannot open " + base.string() + ".txt");
    out << metric_report_table(report);
}

}  // namespace llsrpca

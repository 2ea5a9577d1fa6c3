#include "llsrpca/noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "llsrpca/rng.hpp"

namespace llsrpca {

namespace {

using nlohmann::json;

double band_min(const HsiCube& cube, int b) {
    const std::size_t plane = static_cast<std::size_t>(cube.rows) * cube.cols;
    const double* p = cube.values.data() + plane * b;
    return *std::min_element(p, p + plane);
}

double band_max(const HsiCube& cube, int b) {
    const std::size_t plane = static_cast<std::size_t>(cube.rows) * cube.cols;
    const double* p = cube.values.data() + plane * b;
    return *std::max_element(p, p + plane);
}

/// First k entries of a seeded partial Fisher-Yates shuffle of 0..n-1.
std::vector<std::size_t> choose_distinct(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i)
        std::swap(idx[i], idx[i + rng.next_below(n - i)]);
    idx.resize(k);
    return idx;
}

}  // namespace

HsiCube add_gaussian(const HsiCube& cube, double variance, std::uint64_t seed) {
    if (!(variance >= 0.0) || !std::isfinite(variance))
        throw std::invalid_argument("add_gaussian: variance must be finite and nonnegative");
    HsiCube out = cube;
    if (variance == 0.0) return out;
    const double sigma = std::sqrt(variance);
    const std::size_t plane = static_cast<std::size_t>(cube.rows) * cube.cols;
    for (int b = 0; b < cube.bands; ++b) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(b)));
        double* p = out.values.data() + plane * b;
        for (std::size_t i = 0; i < plane; ++i) p[i] += sigma * rng.next_gaussian();
    }
    return out;
}

GaussianSnrResult add_gaussian_snr(const HsiCube& cube, double snr_db_min, double snr_db_max,
                                   std::uint64_t seed) {
    if (snr_db_min > snr_db_max)
        throw std::invalid_argument("add_gaussian_snr: snr_db_min must not exceed snr_db_max");
    GaussianSnrResult result;
    result.cube = cube;
    result.bands.resize(cube.bands);
    const std::size_t plane = static_cast<std::size_t>(cube.rows) * cube.cols;
    double snr_sum = 0.0;
    int counted = 0;
    for (int b = 0; b < cube.bands; ++b) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(b)));
        double* p = result.cube.values.data() + plane * b;
        double power = 0.0;
        for (std::size_t i = 0; i < plane; ++i) power += p[i] * p[i];
        power /= static_cast<double>(plane);
        if (power == 0.0) {
            result.bands[b].skipped = true;
            continue;
        }
        const double target = rng.uniform(snr_db_min, snr_db_max);
        const double variance = power / std::pow(10.0, target / 10.0);
        const double sigma = std::sqrt(variance);
        for (std::size_t i = 0; i < plane; ++i) p[i] += sigma * rng.next_gaussian();
        result.bands[b].target_snr_db = target;
        result.bands[b].noise_variance = variance;
        snr_sum += target;
        ++counted;
    }
    result.mean_target_snr_db = counted ? snr_sum / counted : 0.0;
    return result;
}

HsiCube add_stripes(const HsiCube& cube, int band_lo, int band_hi, int cols_min, int cols_max,
                    double offset_lo, double offset_hi, std::uint64_t seed) {
    if (band_lo < 0 || band_hi >= cube.bands || band_lo > band_hi)
        throw std::invalid_argument("add_stripes: band range outside the cube");
    if (cols_min < 0 || cols_min > cols_max || cols_max > cube.cols)
        throw std::invalid_argument("add_stripes: column counts must satisfy 0 <= min <= max <= cols");
    HsiCube out = cube;
    for (int b = band_lo; b <= band_hi; ++b) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(b)));
        const std::size_t k =
            cols_min + rng.next_below(static_cast<std::uint64_t>(cols_max - cols_min) + 1);
        const auto columns = choose_distinct(static_cast<std::size_t>(cube.cols), k, rng);
        for (std::size_t col : columns) {
            const double offset = rng.uniform(offset_lo, offset_hi);
            for (int i = 0; i < cube.rows; ++i)
                out.at(i, static_cast<int>(col), b) += offset;
        }
    }
    return out;
}

HsiCube add_salt_pepper(const HsiCube& cube, double fraction, double intensity_lo,
                        double intensity_hi, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw std::invalid_argument("add_salt_pepper: fraction must be in [0, 1]");
    if (intensity_lo > intensity_hi)
        throw std::invalid_argument("add_salt_pepper: intensity_lo must not exceed intensity_hi");
    HsiCube out = cube;
    const std::size_t plane = static_cast<std::size_t>(cube.rows) * cube.cols;
    const std::size_t count = static_cast<std::size_t>(std::llround(fraction * plane));
    if (count == 0) return out;
    for (int b = 0; b < cube.bands; ++b) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(b)));
        const double amplitude = rng.uniform(intensity_lo, intensity_hi);
        const double salt = band_max(cube, b) + amplitude;
        const double pepper = std::max(band_min(cube, b) - amplitude, 0.0);
        const auto pixels = choose_distinct(plane, count, rng);
        double* p = out.values.data() + plane * b;
        for (std::size_t pix : pixels) p[pix] = rng.next_double() < 0.5 ? salt : pepper;
    }
    return out;
}

HsiCube apply_spec(const HsiCube& cube, const NoiseSpec& spec) {
    HsiCube out = cube;
    for (std::size_t i = 0; i < spec.components.size(); ++i) {
        const std::uint64_t sub_seed = mix_seed(spec.seed, i);
        out = std::visit(
            [&](const auto& component) -> HsiCube {
                using T = std::decay_t<decltype(component)>;
                if constexpr (std::is_same_v<T, GaussianNoise>)
                    return add_gaussian(out, component.variance, sub_seed);
                else if constexpr (std::is_same_v<T, GaussianSnrNoise>)
                    return add_gaussian_snr(out, component.snr_db_min, component.snr_db_max,
                                            sub_seed)
                        .cube;
                else if constexpr (std::is_same_v<T, StripeNoise>)
                    return add_stripes(out, component.band_lo, component.band_hi,
                                       component.cols_min, component.cols_max,
                                       component.offset_lo, component.offset_hi, sub_seed);
                else
                    return add_salt_pepper(out, component.fraction, component.intensity_lo,
                                           component.intensity_hi, sub_seed);
            },
            spec.components[i]);
    }
    return out;
}

NoiseSpec parse_noise_spec(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw IoError(std::string("noise spec: invalid JSON: ") + e.what());
    }
    NoiseSpec spec;
    try {
        spec.seed = doc.value("seed", std::uint64_t{0});
        for (const auto& c : doc.at("components")) {
            const std::string type = c.at("type").get<std::string>();
            if (type == "gaussian") {
                spec.components.push_back(GaussianNoise{c.at("variance").get<double>()});
            } else if (type == "gaussian_snr") {
                spec.components.push_back(GaussianSnrNoise{c.at("snr_db_min").get<double>(),
                                                           c.at("snr_db_max").get<double>()});
            } else if (type == "stripes") {
                spec.components.push_back(StripeNoise{
                    c.at("band_lo").get<int>(), c.at("band_hi").get<int>(),
                    c.at("cols_min").get<int>(), c.at("cols_max").get<int>(),
                    c.at("offset_lo").get<double>(), c.at("offset_hi").get<double>()});
            } else if (type == "salt_pepper") {
                spec.components.push_back(SaltPepperNoise{c.at("fraction").get<double>(),
                                                          c.at("intensity_lo").get<double>(),
                                                          c.at("intensity_hi").get<double>()});
            } else {
                throw IoError("noise spec: unknown component type \"" + type + "\"");
            }
        }
    } catch (const json::exception& e) {
        throw IoError(std::string("noise spec: ") + e.what());
    }
    const auto check = [](bool ok, const char* msg) {
        if (!ok) throw IoError(std::string("noise spec: ") + msg);
    };
    for (const auto& component : spec.components)
        std::visit(
            [&](const auto& c) {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, GaussianNoise>) {
                    check(c.variance >= 0.0, "gaussian variance must be nonnegative");
                } else if constexpr (std::is_same_v<T, GaussianSnrNoise>) {
                    check(c.snr_db_min <= c.snr_db_max, "gaussian_snr range is inverted");
                } else if constexpr (std::is_same_v<T, StripeNoise>) {
                    check(c.band_lo >= 0 && c.band_lo <= c.band_hi, "stripes band range invalid");
                    check(c.cols_min >= 0 && c.cols_min <= c.cols_max,
                          "stripes column counts invalid");
                } else {
                    check(c.fraction >= 0.0 && c.fraction <= 1.0,
                          "salt_pepper fraction must be in [0, 1]");
                    check(c.intensity_lo <= c.intensity_hi, "salt_pepper intensity range inverted");
                }
            },
            component);
    return spec;
}

NoiseSpec load_noise_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_noise_spec: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_noise_spec(buf.str());
}

std::string noise_spec_to_json(const NoiseSpec& spec) {
    json doc;
    doc["seed"] = spec.seed;
    doc["generator"] = Rng::algorithm();
    doc["components"] = json::array();
    for (const auto& component : spec.components)
        std::visit(
            [&](const auto& c) {
                using T = std::decay_t<decltype(c)>;
                json j;
                if constexpr (std::is_same_v<T, GaussianNoise>) {
                    j = {{"type", "gaussian"}, {"variance", c.variance}};
                } else if constexpr (std::is_same_v<T, GaussianSnrNoise>) {
                    j = {{"type", "gaussian_snr"},
                         {"snr_db_min", c.snr_db_min},
                         {"snr_db_max", c.snr_db_max}};
                } else if constexpr (std::is_same_v<T, StripeNoise>) {
                    j = {{"type", "stripes"},   {"band_lo", c.band_lo},
                         {"band_hi", c.band_hi}, {"cols_min", c.cols_min},
                         {"cols_max", c.cols_max}, {"offset_lo", c.offset_lo},
                         {"offset_hi", c.offset_hi}};
                } else {
                    j = {{"type", "salt_pepper"},
                         {"fraction", c.fraction},
                         {"intensity_lo", c.intensity_lo},
                         {"intensity_hi", c.intensity_hi}};
                }
                doc["components"].push_back(j);
            },
            component);
    return doc.dump(2) + "\n";
}

}  // namespace llsrpca

#include "llsrpca/hsi.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "llsrpca/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "LLSC payload I/O assumes a little-endian host");

namespace llsrpca {

HsiCube HsiCube::zeros(int rows, int cols, int bands) {
    HsiCube cube;
    cube.rows = rows;
    cube.cols = cols;
    cube.bands = bands;
    cube.values.assign(static_cast<std::size_t>(rows) * cols * bands, 0.0);
    return cube;
}

HsiCube load_cube(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_cube: cannot open " + path.string());

    std::string header;
    if (!std::getline(in, header)) throw IoError("load_cube: missing header in " + path.string());
    std::istringstream hs(header);
    std::string magic;
    long long r = 0, c = 0, n = 0;
    if (!(hs >> magic >> r >> c >> n) || magic != "LLSC1" || r < 1 || c < 1 || n < 1)
        throw IoError("load_cube: malformed LLSC1 header in " + path.string());
    std::string trailing;
    if (hs >> trailing) throw IoError("load_cube: malformed LLSC1 header in " + path.string());

    HsiCube cube;
    cube.rows = static_cast<int>(r);
    cube.cols = static_cast<int>(c);
    cube.bands = static_cast<int>(n);
    const std::size_t count = static_cast<std::size_t>(r) * c * n;
    cube.values.resize(count);
    in.read(reinterpret_cast<char*>(cube.values.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double))
        throw IoError("load_cube: payload shorter than header dimensions in " + path.string());
    if (in.peek() != std::char_traits<char>::eof())
        throw IoError("load_cube: payload longer than header dimensions in " + path.string());
    for (double v : cube.values)
        if (!std::isfinite(v))
            throw IoError("load_cube: non-finite payload value in " + path.string());
    return cube;
}

void save_cube(const HsiCube& cube, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("save_cube: cannot open " + path.string() + " for writing");
    out << "LLSC1 " << cube.rows << ' ' << cube.cols << ' ' << cube.bands << '\n';
    out.write(reinterpret_cast<const char*>(cube.values.data()),
              static_cast<std::streamsize>(cube.values.size() * sizeof(double)));
    if (!out) throw IoError("save_cube: write failed for " + path.string());
}

NormalizedCube normalize_bands(const HsiCube& cube) {
    NormalizedCube result;
    result.cube = cube;
    result.ranges.resize(cube.bands);
    const std::size_t plane = static_cast<std::size_t>(cube.rows) * cube.cols;
    for (int b = 0; b < cube.bands; ++b) {
        double* band = result.cube.values.data() + plane * b;
        const auto [lo_it, hi_it] = std::minmax_element(band, band + plane);
        const double lo = *lo_it, hi = *hi_it;
        result.ranges[b] = BandRange{lo, hi};
        const double span = hi - lo;
        if (span > 0.0)
            for (std::size_t i = 0; i < plane; ++i) band[i] = (band[i] - lo) / span;
        else
            std::fill(band, band + plane, 0.0);
    }
    return result;
}

HsiCube denormalize_bands(const HsiCube& cube, const std::vector<BandRange>& ranges) {
    if (static_cast<int>(ranges.size()) != cube.bands)
        throw std::invalid_argument("denormalize_bands: range record does not match band count");
    HsiCube out = cube;
    const std::size_t plane = static_cast<std::size_t>(cube.rows) * cube.cols;
    for (int b = 0; b < cube.bands; ++b) {
        double* band = out.values.data() + plane * b;
        const double span = ranges[b].max - ranges[b].min;
        for (std::size_t i = 0; i < plane; ++i) band[i] = band[i] * span + ranges[b].min;
    }
    return out;
}

namespace {

std::vector<int> axis_origins(int extent, int patch, int stride) {
    std::vector<int> origins;
    for (int o = 0;; o += stride) {
        if (o + patch >= extent) {
            origins.push_back(extent - patch);  // final origin clamped flush
            break;
        }
        origins.push_back(o);
    }
    return origins;
}

}  // namespace

PatchGrid make_patch_grid(int rows, int cols, int patch_size, int stride) {
    if (patch_size < 1 || patch_size > std::min(rows, cols))
        throw std::invalid_argument("make_patch_grid: patch size must be in [1, min(rows, cols)]");
    if (stride < 1 || stride > patch_size)
        throw std::invalid_argument("make_patch_grid: stride must be in [1, patch_size]");
    PatchGrid grid;
    grid.patch_size = patch_size;
    grid.stride = stride;
    for (int i : axis_origins(rows, patch_size, stride))
        for (int j : axis_origins(cols, patch_size, stride)) grid.origins.emplace_back(i, j);
    return grid;
}

std::vector<PatchMatrix> extract_patches(const HsiCube& cube, int patch_size, int stride) {
    const PatchGrid grid = make_patch_grid(cube.rows, cube.cols, patch_size, stride);
    std::vector<PatchMatrix> patches;
    patches.reserve(grid.origins.size());
    const int q = patch_size;
    for (const auto& [oi, oj] : grid.origins) {
        PatchMatrix p;
        p.origin_row = oi;
        p.origin_col = oj;
        p.matrix.resize(static_cast<Index>(q) * q, cube.bands);
        for (int b = 0; b < cube.bands; ++b)
            for (int di = 0; di < q; ++di)
                for (int dj = 0; dj < q; ++dj)
                    p.matrix(di * q + dj, b) = cube.at(oi + di, oj + dj, b);
        patches.push_back(std::move(p));
    }
    return patches;
}

HsiCube reassemble(const std::vector<PatchMatrix>& patches, int rows, int cols, int bands,
                   int patch_size) {
    HsiCube sum = HsiCube::zeros(rows, cols, bands);
    std::vector<int> coverage(static_cast<std::size_t>(rows) * cols, 0);
    const int q = patch_size;
    for (const auto& p : patches) {
        if (p.matrix.rows() != static_cast<Index>(q) * q || p.matrix.cols() != bands)
            throw std::invalid_argument("reassemble: patch matrix shape does not match q^2 x n");
        if (p.origin_row < 0 || p.origin_col < 0 || p.origin_row + q > rows ||
            p.origin_col + q > cols)
            throw std::invalid_argument("reassemble: patch extends outside the cube");
        for (int b = 0; b < bands; ++b)
            for (int di = 0; di < q; ++di)
                for (int dj = 0; dj < q; ++dj)
                    sum.at(p.origin_row + di, p.origin_col + dj, b) += p.matrix(di * q + dj, b);
        for (int di = 0; di < q; ++di)
            for (int dj = 0; dj < q; ++dj)
                coverage[static_cast<std::size_t>(p.origin_row + di) * cols + p.origin_col + dj]++;
    }
    for (std::size_t i = 0; i < coverage.size(); ++i)
        if (coverage[i] == 0)
            throw std::invalid_argument("reassemble: pixel not covered by any patch");
    for (int b = 0; b < bands; ++b)
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                sum.at(i, j, b) /= coverage[static_cast<std::size_t>(i) * cols + j];
    return sum;
}

DataMatrix cube_to_matrix(const HsiCube& cube) {
    DataMatrix m(static_cast<Index>(cube.rows) * cube.cols, cube.bands);
    for (int b = 0; b < cube.bands; ++b)
        for (int i = 0; i < cube.rows; ++i)
            for (int j = 0; j < cube.cols; ++j)
                m(static_cast<Index>(i) * cube.cols + j, b) = cube.at(i, j, b);
    return m;
}

HsiCube matrix_to_cube(const DataMatrix& m, int rows, int cols) {
    if (m.rows() != static_cast<Index>(rows) * cols)
        throw std::invalid_argument("matrix_to_cube: row count does not equal rows*cols");
    HsiCube cube = HsiCube::zeros(rows, cols, static_cast<int>(m.cols()));
    for (int b = 0; b < cube.bands; ++b)
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                cube.at(i, j, b) = m(static_cast<Index>(i) * cols + j, b);
    return cube;
}

DataMatrix band_as_matrix(const HsiCube& cube, int band) {
    if (band < 0 || band >= cube.bands)
        throw std::invalid_argument("band_as_matrix: band index out of range");
    DataMatrix m(cube.rows, cube.cols);
    for (int i = 0; i < cube.rows; ++i)
        for (int j = 0; j < cube.cols; ++j) m(i, j) = cube.at(i, j, band);
    return m;
}

DenoiseResult denoise_cube(const HsiCube& cube, const SolverConfig& config,
                           const DenoiseOptions& options) {
    config.validate();
    NormalizedCube normalized = normalize_bands(cube);

    DenoiseResult result;
    HsiCube restored;
    if (options.whole_image) {
        const Decomposition dec = solve(cube_to_matrix(normalized.cube), config);
        restored = matrix_to_cube(dec.low_rank, cube.rows, cube.cols);
        result.patches = 1;
        result.unconverged = dec.converged ? 0 : 1;
        result.total_iterations = dec.iterations;
    } else {
        std::vector<PatchMatrix> patches =
            extract_patches(normalized.cube, options.patch_size, options.stride);
        for (auto& p : patches) {
            const Decomposition dec = solve(p.matrix, config);
            p.matrix = dec.low_rank;
            result.total_iterations += dec.iterations;
            if (!dec.converged) result.unconverged++;
        }
        result.patches = static_cast<int>(patches.size());
        restored = reassemble(patches, cube.rows, cube.cols, cube.bands, options.patch_size);
    }
    result.cube = denormalize_bands(restored, normalized.ranges);
    return result;
}

HsiCube synthetic_low_rank_cube(int rows, int cols, int bands, int terms, std::uint64_t seed) {
    if (rows < 1 || cols < 1 || bands < 1 || terms < 1)
        throw std::invalid_argument("synthetic_low_rank_cube: dimensions must be positive");
    Rng rng(mix_seed(seed, 0x5c1ea9));
    HsiCube cube = HsiCube::zeros(rows, cols, bands);
    for (int t = 0; t < terms; ++t) {
        const double ci = rng.uniform(0.15, 0.85) * rows;
        const double cj = rng.uniform(0.15, 0.85) * cols;
        const double sigma = rng.uniform(0.15, 0.35) * std::min(rows, cols);
        const double phase = rng.uniform(0.0, 1.0);
        const double cycles = rng.uniform(0.5, 1.5);
        for (int b = 0; b < bands; ++b) {
            const double u = bands == 1 ? 0.0 : static_cast<double>(b) / (bands - 1);
            const double spectral =
                0.25 + 0.75 * 0.5 * (1.0 + std::sin(2.0 * M_PI * (cycles * u + phase)));
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j) {
                    const double d2 = (i - ci) * (i - ci) + (j - cj) * (j - cj);
                    cube.at(i, j, b) += spectral * std::exp(-d2 / (2.0 * sigma * sigma));
                }
        }
    }
    const auto [lo_it, hi_it] = std::minmax_element(cube.values.begin(), cube.values.end());
    const double lo = *lo_it, span = *hi_it - *lo_it;
    if (span > 0.0)
        for (double& v : cube.values) v = (v - lo) / span;
    return cube;
}

}  // namespace llsrpca

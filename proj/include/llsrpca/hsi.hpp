#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "llsrpca/core.hpp"
#include "llsrpca/solvers.hpp"

namespace llsrpca {

/// Hyperspectral cube: rows x cols spatial, bands spectral. Values are stored
/// band-sequential (band outermost, then row, then column), matching the
/// on-disk layout of the LLSC format.
struct HsiCube {
    int rows = 0;
    int cols = 0;
    int bands = 0;
    std::vector<double> values;

    static HsiCube zeros(int rows, int cols, int bands);

    std::size_t index(int r, int c, int b) const {
        return (static_cast<std::size_t>(b) * rows + r) * cols + c;
    }
    double at(int r, int c, int b) const { return values[index(r, c, b)]; }
    double& at(int r, int c, int b) { return values[index(r, c, b)]; }
    std::size_t size() const { return values.size(); }
};

/// LLSC v1 cube file: ASCII header "LLSC1 r c n\n" followed by r*c*n
/// little-endian IEEE-754 doubles in band-sequential order. Round trips are
/// bit-exact. Throws IoError on malformed headers, size mismatches, or
/// non-finite payload values.
HsiCube load_cube(const std::filesystem::path& path);
void save_cube(const HsiCube& cube, const std::filesystem::path& path);

/// Per-band affine range, recorded by normalize_bands so it can be undone.
struct BandRange {
    double min = 0.0;
    double max = 0.0;
};

struct NormalizedCube {
    HsiCube cube;
    std::vector<BandRange> ranges;
};

/// Maps each band to [0, 1]; constant bands map to 0.
NormalizedCube normalize_bands(const HsiCube& cube);
HsiCube denormalize_bands(const HsiCube& cube, const std::vector<BandRange>& ranges);

/// Spatial q x q patch flattened to a q^2 x bands matrix. Column b holds the
/// row-major (within the patch) pixels of band b.
struct PatchMatrix {
    DataMatrix matrix;
    int origin_row = 0;
    int origin_col = 0;
};

/// Patch anchor coordinates covering the image: origins advance by stride and
/// the final origin per axis is clamped flush to the boundary.
struct PatchGrid {
    int patch_size = 0;
    int stride = 0;
    std::vector<std::pair<int, int>> origins;
};

PatchGrid make_patch_grid(int rows, int cols, int patch_size, int stride);
std::vector<PatchMatrix> extract_patches(const HsiCube& cube, int patch_size, int stride);

/// Mean over all covering patch copies per pixel. Throws if a pixel is not
/// covered by any patch.
HsiCube reassemble(const std::vector<PatchMatrix>& patches, int rows, int cols, int bands,
                   int patch_size);

/// Whole-image reshape: (rows*cols) x bands, column b = band b row-major.
DataMatrix cube_to_matrix(const HsiCube& cube);
HsiCube matrix_to_cube(const DataMatrix& m, int rows, int cols);
DataMatrix band_as_matrix(const HsiCube& cube, int band);

struct DenoiseOptions {
    int patch_size = 20;
    int stride = 10;
    bool whole_image = false;
};

struct DenoiseResult {
    HsiCube cube;
    int patches = 0;
    int unconverged = 0;
    long total_iterations = 0;
};

/// Full restoration pipeline: per-band normalization, patch extraction (or a
/// single whole-image reshape), per-patch decomposition keeping the low-rank
/// component, overlap-averaged reassembly, denormalization.
DenoiseResult denoise_cube(const HsiCube& cube, const SolverConfig& config,
                           const DenoiseOptions& options);

/// Seeded clean test cube: sum of `terms` rank-1 spatial-by-spectral products
/// (Gaussian spatial bumps times smooth spectral profiles), globally rescaled
/// to [0, 1]. Used by the demo and the evaluation suites.
HsiCube synthetic_low_rank_cube(int rows, int cols, int bands, int terms, std::uint64_t seed);

}  // namespace llsrpca

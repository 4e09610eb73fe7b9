#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wgt/fields.hpp"
#include "wgt/image.hpp"
#include "wgt/xray.hpp"

namespace wgt {

// Binary grid container: "WGTGRID1" magic, little-endian header
// (version, dtype, rank, dims, spacings, origins, config hash), then the
// row-major float64 payload (complex interleaved re/im).
struct GridBlob {
    std::uint32_t dtype = 0;  // 0 real, 1 complex
    std::vector<std::uint64_t> dims;
    std::vector<double> spacing;
    std::vector<double> origin;
    std::uint64_t config_hash = 0;
    std::vector<double> payload;  // complex: re,im interleaved
};

void write_grid_blob(const std::string& path, const GridBlob& blob);
GridBlob read_grid_blob(const std::string& path);

GridBlob to_blob(const Image2D& img, std::uint64_t config_hash);
GridBlob to_blob(const LateralField& f, std::uint64_t config_hash);
Image2D image_from_blob(const GridBlob& blob);

// Sinogram CSV: `# y3 <v>` then an angle header row and one row per angle.
void write_sinogram_csv(const std::string& path, const SliceSinogram& s,
                        std::uint64_t config_hash);
SliceSinogram read_sinogram_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace wgt

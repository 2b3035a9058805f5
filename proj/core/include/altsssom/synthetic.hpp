#pragma once

#include <cstddef>
#include <cstdint>

#include "altsssom/dataset.hpp"

namespace altsssom {

struct BlobSpec {
    std::size_t clusters = 3;
    std::size_t points_per_cluster = 100;
    std::size_t relevant_dims = 3;
    std::size_t noise_dims = 2;
    double stddev = 0.03;  ///< spread in the relevant dimensions
};

/// Gaussian clusters with centers on distinct corners of the relevant unit cube, plus
/// uniform [0,1] noise dimensions. Rows are grouped by cluster; labels are the cluster index.
/// Features are clamped into [0,1].
Dataset make_blobs(const BlobSpec& spec, std::uint64_t seed);

}  // namespace altsssom

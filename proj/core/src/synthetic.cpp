#include "altsssom/synthetic.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "altsssom/errors.hpp"

namespace altsssom {

Dataset make_blobs(const BlobSpec& spec, std::uint64_t seed) {
    require(spec.clusters >= 1 && spec.points_per_cluster >= 1, "need at least one point per cluster");
    require(spec.relevant_dims >= 1, "need at least one relevant dimension");
    require(spec.relevant_dims >= 64 || spec.clusters <= (std::size_t{1} << spec.relevant_dims),
            "more clusters than corners of the relevant cube");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, spec.stddev);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    Dataset data;
    const std::size_t m = spec.relevant_dims + spec.noise_dims;
    data.features = FeatureMatrix(0, m);
    for (std::size_t c = 0; c < spec.clusters; ++c) data.class_names.push_back("c" + std::to_string(c));

    std::vector<double> row(m);
    for (std::size_t c = 0; c < spec.clusters; ++c) {
        for (std::size_t p = 0; p < spec.points_per_cluster; ++p) {
            for (std::size_t d = 0; d < spec.relevant_dims; ++d) {
                const double corner = ((c >> d) & 1U) ? 0.8 : 0.2;
                row[d] = std::clamp(corner + gauss(rng), 0.0, 1.0);
            }
            for (std::size_t d = spec.relevant_dims; d < m; ++d) row[d] = uniform(rng);
            data.features.append_row(row);
            data.labels.push_back(static_cast<ClassId>(c));
            data.visible.push_back(true);
        }
    }
    return data;
}

}  // namespace altsssom

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "texfract/image.hpp"

namespace texfract {

struct LabeledSample {
    GrayImage image;
    int label = 0;  // index into LabeledDataset::class_names
    std::string id; // "<class>/<filename>" for loaded trees
};

struct LabeledDataset {
    std::vector<LabeledSample> samples;
    std::vector<std::string> class_names;

    size_t size() const { return samples.size(); }
    std::vector<int> labels() const;
    std::vector<int> class_counts() const;
};

/// Load a class-per-directory tree: root/<class>/<image>.{png,pgm}.
/// Classes are subdirectory names sorted lexicographically; samples are
/// enumerated in sorted filename order, so two loads yield identical order.
LabeledDataset load_dataset(const std::filesystem::path& root);

/// Draw `count` non-overlapping win_w x win_h windows by seeded rejection
/// sampling. Fails after 10,000 rejected (overlapping) candidates.
std::vector<GrayImage> extract_windows(const GrayImage& img, int count,
                                       int win_w, int win_h, uint64_t seed);

} // namespace texfract

#include "texfract/dataset.hpp"

#include <algorithm>
#include <cctype>

#include "texfract/image_io.hpp"
#include "texfract/rng.hpp"

namespace texfract {

namespace fs = std::filesystem;

std::vector<int> LabeledDataset::labels() const {
    std::vector<int> y(samples.size());
    for (size_t i = 0; i < samples.size(); ++i)
        y[i] = samples[i].label;
    return y;
}

std::vector<int> LabeledDataset::class_counts() const {
    std::vector<int> counts(class_names.size(), 0);
    for (const auto& s : samples)
        ++counts[s.label];
    return counts;
}

namespace {

bool has_image_extension(const fs::path& p) {
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".pgm";
}

} // namespace

LabeledDataset load_dataset(const fs::path& root) {
    if (!fs::is_directory(root))
        fail(ErrorCode::FileNotFound, "dataset root not found: " + root.string());

    std::vector<fs::path> class_dirs;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory())
            class_dirs.push_back(entry.path());
    std::sort(class_dirs.begin(), class_dirs.end());
    if (class_dirs.empty())
        fail(ErrorCode::InvalidArgument, "dataset root has no class directories: " + root.string());

    LabeledDataset ds;
    for (const auto& dir : class_dirs) {
        const int label = static_cast<int>(ds.class_names.size());
        ds.class_names.push_back(dir.filename().string());

        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.is_regular_file() && has_image_extension(entry.path()))
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        if (files.empty())
            fail(ErrorCode::InvalidArgument,
                 "class has no readable images: " + dir.filename().string());

        for (const auto& file : files) {
            try {
                ds.samples.push_back({load_image(file), label,
                                      dir.filename().string() + "/" + file.filename().string()});
            } catch (const Error& e) {
                fail(e.code(), "while loading " + file.string() + ": " + e.what());
            }
        }
    }
    return ds;
}

std::vector<GrayImage> extract_windows(const GrayImage& img, int count,
                                       int win_w, int win_h, uint64_t seed) {
    if (count < 1 || win_w < 1 || win_h < 1)
        fail(ErrorCode::InvalidArgument, "extract_windows: bad request");
    if (win_w > img.width || win_h > img.height)
        fail(ErrorCode::InvalidArgument, "extract_windows: window larger than image");

    struct Rect {
        int x, y;
    };
    std::vector<Rect> placed;
    std::mt19937_64 rng(seed);
    const uint64_t x_range = static_cast<uint64_t>(img.width - win_w) + 1;
    const uint64_t y_range = static_cast<uint64_t>(img.height - win_h) + 1;

    int rejections = 0;
    while (static_cast<int>(placed.size()) < count) {
        const int x = static_cast<int>(uniform_below(rng, x_range));
        const int y = static_cast<int>(uniform_below(rng, y_range));
        const bool overlaps = std::any_of(placed.begin(), placed.end(), [&](const Rect& r) {
            return x < r.x + win_w && r.x < x + win_w && y < r.y + win_h && r.y < y + win_h;
        });
        if (overlaps) {
            if (++rejections > 10'000)
                fail(ErrorCode::PlacementFailed, "cannot place non-overlapping windows");
            continue;
        }
        placed.push_back({x, y});
    }

    std::vector<GrayImage> windows;
    windows.reserve(placed.size());
    for (const Rect& r : placed) {
        GrayImage w(win_w, win_h, img.levels);
        for (int y = 0; y < win_h; ++y)
            for (int x = 0; x < win_w; ++x)
                w.at(x, y) = img.at(r.x + x, r.y + y);
        windows.push_back(std::move(w));
    }
    return windows;
}

} // namespace texfract

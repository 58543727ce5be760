#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stvp {

// Raised when a frame file cannot be parsed or a sequence is inconsistent.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Dense grayscale frame stack. data is row-major within a frame, frames are
// stored back to back; intensities are normalized to [0,1] on ingestion.
struct VideoTensor {
    int width = 0;
    int height = 0;
    int frames = 0;
    std::vector<double> data;

    VideoTensor() = default;
    VideoTensor(int w, int h, int t)
        : width(w), height(h), frames(t),
          data(static_cast<size_t>(w) * h * t, 0.0) {}

    double& at(int x, int y, int t) {
        return data[(static_cast<size_t>(t) * height + y) * width + x];
    }
    double at(int x, int y, int t) const {
        return data[(static_cast<size_t>(t) * height + y) * width + x];
    }
    size_t frame_size() const { return static_cast<size_t>(width) * height; }
    const double* frame(int t) const { return data.data() + frame_size() * t; }
    double* frame(int t) { return data.data() + frame_size() * t; }
};

// Single-frame field of real values; probability maps are constrained to
// [0,1] when exported.
struct PixelMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    PixelMap() = default;
    PixelMap(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<size_t>(w) * h, fill) {}

    double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
};

// Sidecar metadata for a frame directory.
struct SequenceMeta {
    int width = 0;
    int height = 0;
    int frames = 0;
    double fps = 0.0;
};

// Read a binary "P5" graymap. Intensities are divided by the file's maxval.
PixelMap read_pgm(const std::string& path);

// Write an 8-bit binary graymap; values must be in [0,1] and are quantized
// as round(255*v) with ties away from zero.
void write_probability_map(const PixelMap& map, const std::string& path);

// Read all *.pgm files of a directory in lexicographic filename order into a
// tensor. Throws FormatError naming the offending file on a bad header or a
// frame size mismatch.
VideoTensor read_frame_sequence(const std::string& dir);

// Write tensor frames as frame_%06d.pgm plus a meta.txt sidecar.
void write_frame_sequence(const VideoTensor& video, const std::string& dir,
                          double fps = 10.0);

SequenceMeta read_meta(const std::string& dir);
void write_meta(const SequenceMeta& meta, const std::string& dir);

// Extract one frame of a tensor as a PixelMap.
PixelMap frame_of(const VideoTensor& video, int t);

}  // namespace stvp

#include "stvp/video_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace stvp {

namespace {

// Skips whitespace and '#' comment lines between header tokens.
int next_header_int(std::istream& in, const std::string& path) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c))
        throw FormatError(path + ": invalid graymap header");
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        c = in.get();
    }
    return value;
}

}  // namespace

PixelMap read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path + ": cannot open");
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P' || m1 != '5')
        throw FormatError(path + ": not a binary P5 graymap");
    const int width = next_header_int(in, path);
    const int height = next_header_int(in, path);
    const int maxval = next_header_int(in, path);
    if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535)
        throw FormatError(path + ": invalid graymap dimensions");
    // next_header_int consumed the single whitespace byte after maxval, so
    // the stream is already positioned at the pixel data.
    PixelMap map(width, height);
    const size_t n = map.values.size();
    if (maxval < 256) {
        std::vector<unsigned char> buf(n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
        if (static_cast<size_t>(in.gcount()) != n)
            throw FormatError(path + ": truncated pixel data");
        for (size_t i = 0; i < n; ++i) map.values[i] = buf[i] / double(maxval);
    } else {
        std::vector<unsigned char> buf(2 * n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(2 * n));
        if (static_cast<size_t>(in.gcount()) != 2 * n)
            throw FormatError(path + ": truncated pixel data");
        for (size_t i = 0; i < n; ++i) {
            const int v = (buf[2 * i] << 8) | buf[2 * i + 1];  // big-endian
            map.values[i] = v / double(maxval);
        }
    }
    return map;
}

void write_probability_map(const PixelMap& map, const std::string& path) {
    for (double v : map.values) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("write_probability_map: value outside [0,1]");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(path + ": cannot open for writing");
    out << "P5\n" << map.width << " " << map.height << "\n255\n";
    std::vector<unsigned char> buf(map.values.size());
    for (size_t i = 0; i < buf.size(); ++i)
        buf[i] = static_cast<unsigned char>(std::floor(map.values[i] * 255.0 + 0.5));
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
}

VideoTensor read_frame_sequence(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto p = entry.path();
        if (p.extension() == ".pgm") files.push_back(p.string());
    }
    if (files.empty()) throw FormatError(dir + ": no .pgm frames found");
    std::sort(files.begin(), files.end());

    VideoTensor video;
    for (size_t t = 0; t < files.size(); ++t) {
        PixelMap frame = read_pgm(files[t]);
        if (t == 0) {
            video = VideoTensor(frame.width, frame.height, static_cast<int>(files.size()));
        } else if (frame.width != video.width || frame.height != video.height) {
            throw FormatError(files[t] + ": frame size mismatch");
        }
        std::copy(frame.values.begin(), frame.values.end(),
                  video.data.begin() + video.frame_size() * t);
    }
    return video;
}

void write_frame_sequence(const VideoTensor& video, const std::string& dir, double fps) {
    fs::create_directories(dir);
    for (int t = 0; t < video.frames; ++t) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06d.pgm", t);
        PixelMap frame(video.width, video.height);
        const double* src = video.frame(t);
        for (size_t i = 0; i < frame.values.size(); ++i)
            frame.values[i] = std::clamp(src[i], 0.0, 1.0);
        write_probability_map(frame, (fs::path(dir) / name).string());
    }
    write_meta({video.width, video.height, video.frames, fps}, dir);
}

SequenceMeta read_meta(const std::string& dir) {
    std::ifstream in(fs::path(dir) / "meta.txt");
    if (!in) throw FormatError(dir + ": missing meta.txt");
    SequenceMeta meta;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "width") meta.width = std::stoi(val);
        else if (key == "height") meta.height = std::stoi(val);
        else if (key == "frames") meta.frames = std::stoi(val);
        else if (key == "fps") meta.fps = std::stod(val);
    }
    return meta;
}

void write_meta(const SequenceMeta& meta, const std::string& dir) {
    std::ofstream out(fs::path(dir) / "meta.txt");
    out << "width=" << meta.width << "\n"
        << "height=" << meta.height << "\n"
        << "frames=" << meta.frames << "\n"
        << "fps=" << meta.fps << "\n";
}

PixelMap frame_of(const VideoTensor& video, int t) {
    PixelMap map(video.width, video.height);
    const double* src = video.frame(t);
    std::copy(src, src + video.frame_size(), map.values.begin());
    return map;
}

}  // namespace stvp

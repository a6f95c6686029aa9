#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rseg {

/// 2-D grayscale raster. Intensities are kept as doubles in [0, 255];
/// quantization happens only on save.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, double fill = 0.0)
        : width_(width), height_(height),
          data_(static_cast<size_t>(width) * height, fill) {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument("GrayImage: dimensions must be positive");
    }
    GrayImage(int width, int height, std::vector<double> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument("GrayImage: dimensions must be positive");
        if (data_.size() != static_cast<size_t>(width) * height)
            throw std::invalid_argument("GrayImage: data length != width*height");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    size_t size() const { return data_.size(); }

    double& at(int x, int y) { return data_[static_cast<size_t>(y) * width_ + x]; }
    double at(int x, int y) const { return data_[static_cast<size_t>(y) * width_ + x]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// 2-D boolean raster; true = object.
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, bool fill = false)
        : width_(width), height_(height),
          data_(static_cast<size_t>(width) * height, fill ? 1 : 0) {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument("BinaryMask: dimensions must be positive");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    size_t size() const { return data_.size(); }

    bool at(int x, int y) const { return data_[static_cast<size_t>(y) * width_ + x] != 0; }
    void set(int x, int y, bool v) { data_[static_cast<size_t>(y) * width_ + x] = v ? 1 : 0; }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    size_t count() const {
        size_t n = 0;
        for (auto v : data_) n += v;
        return n;
    }

    const std::vector<unsigned char>& data() const { return data_; }
    std::vector<unsigned char>& data() { return data_; }

    bool operator==(const BinaryMask& o) const {
        return width_ == o.width_ && height_ == o.height_ && data_ == o.data_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<unsigned char> data_;
};

}  // namespace rseg

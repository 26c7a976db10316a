#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nccut/error.hpp"

namespace nccut {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Dense row-major 2-D raster. Width and height are always >= 1.
template <class T>
class Grid {
public:
    Grid() = default;

    Grid(int width, int height, T fill = T{})
        : width_(width), height_(height)
    {
        check_dims(width, height);
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    Grid(int width, int height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data))
    {
        check_dims(width, height);
        if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
            throw InvalidInput("pixel count does not match " + std::to_string(width) + "x" +
                               std::to_string(height));
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    std::size_t index(int x, int y) const noexcept
    {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }
    bool contains(int x, int y) const noexcept
    {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    T& at(int x, int y) noexcept { return data_[index(x, y)]; }
    const T& at(int x, int y) const noexcept { return data_[index(x, y)]; }
    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }
    const std::vector<T>& values() const noexcept { return data_; }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    static void check_dims(int width, int height)
    {
        if (width < 1 || height < 1)
            throw InvalidInput("image dimensions must be positive, got " + std::to_string(width) +
                               "x" + std::to_string(height));
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

using RgbImage = Grid<Rgb>;
using GrayImage = Grid<double>;
/// Per-pixel binary labels: 1 = object, 0 = background.
using Mask = Grid<std::uint8_t>;

struct Point {
    double x = 0;
    double y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Polygon vertices in pixel coordinates. Pixel (x, y) covers [x, x+1) x [y, y+1).
using Polygon = std::vector<Point>;

inline double luma(const Rgb& c) noexcept
{
    return 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
}

} // namespace nccut

#include "nccut/png_io.hpp"

#include <png.h>

#include <cstring>
#include <fstream>
#include <iterator>

namespace nccut {

namespace {

struct PngImage {
    png_image image;

    PngImage()
    {
        std::memset(&image, 0, sizeof image);
        image.version = PNG_IMAGE_VERSION;
    }
    ~PngImage() { png_image_free(&image); }

    PngImage(const PngImage&) = delete;
    PngImage& operator=(const PngImage&) = delete;
};

template <class Sample>
std::vector<Sample> decode(std::span<const std::uint8_t> bytes, png_uint_32 format, int channels,
                           int& width, int& height)
{
    if (bytes.empty())
        throw DecodeError("empty PNG stream");
    PngImage png;
    if (!png_image_begin_read_from_memory(&png.image, bytes.data(), bytes.size()))
        throw DecodeError(std::string("PNG header: ") + png.image.message);
    if (png.image.width == 0 || png.image.height == 0)
        throw InvalidInput("PNG has a zero dimension");
    png.image.format = format;
    std::vector<Sample> buffer(static_cast<std::size_t>(png.image.width) * png.image.height *
                               static_cast<std::size_t>(channels));
    const png_color black{0, 0, 0};
    if (!png_image_finish_read(&png.image, &black, buffer.data(), 0, nullptr))
        throw DecodeError(std::string("PNG data: ") + png.image.message);
    width = static_cast<int>(png.image.width);
    height = static_cast<int>(png.image.height);
    return buffer;
}

Bytes encode(const void* pixels, int width, int height, png_uint_32 format)
{
    PngImage png;
    png.image.width = static_cast<png_uint_32>(width);
    png.image.height = static_cast<png_uint_32>(height);
    png.image.format = format;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&png.image, nullptr, &size, 0, pixels, 0, nullptr))
        throw Error(std::string("PNG encode: ") + png.image.message);
    Bytes out(size);
    if (!png_image_write_to_memory(&png.image, out.data(), &size, 0, pixels, 0, nullptr))
        throw Error(std::string("PNG encode: ") + png.image.message);
    out.resize(size);
    return out;
}

} // namespace

Bytes read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidInput("cannot open " + path.string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error("short write to " + path.string());
}

RgbImage load_image(std::span<const std::uint8_t> bytes)
{
    int w = 0;
    int h = 0;
    auto raw = decode<std::uint8_t>(bytes, PNG_FORMAT_RGB, 3, w, h);
    std::vector<Rgb> px(raw.size() / 3);
    for (std::size_t i = 0; i < px.size(); ++i)
        px[i] = Rgb{raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]};
    return RgbImage(w, h, std::move(px));
}

RgbImage load_image(const std::filesystem::path& path)
{
    return load_image(read_file(path));
}

Grid<std::uint8_t> load_gray8(std::span<const std::uint8_t> bytes)
{
    int w = 0;
    int h = 0;
    auto raw = decode<std::uint8_t>(bytes, PNG_FORMAT_GRAY, 1, w, h);
    return Grid<std::uint8_t>(w, h, std::move(raw));
}

Grid<std::uint16_t> load_gray16(std::span<const std::uint8_t> bytes)
{
    int w = 0;
    int h = 0;
    auto raw = decode<std::uint16_t>(bytes, PNG_FORMAT_LINEAR_Y, 1, w, h);
    return Grid<std::uint16_t>(w, h, std::move(raw));
}

Bytes encode_png(const RgbImage& image)
{
    std::vector<std::uint8_t> raw;
    raw.reserve(image.size() * 3);
    for (const Rgb& c : image) {
        raw.push_back(c.r);
        raw.push_back(c.g);
        raw.push_back(c.b);
    }
    return encode(raw.data(), image.width(), image.height(), PNG_FORMAT_RGB);
}

Bytes encode_png(const Grid<std::uint8_t>& gray)
{
    return encode(gray.data().data(), gray.width(), gray.height(), PNG_FORMAT_GRAY);
}

Bytes encode_png(const Grid<std::uint16_t>& gray)
{
    return encode(gray.data().data(), gray.width(), gray.height(), PNG_FORMAT_LINEAR_Y);
}

Bytes encode_mask_png(const Mask& mask)
{
    Grid<std::uint8_t> gray(mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.size(); ++i)
        gray[i] = mask[i] ? 255 : 0;
    return encode_png(gray);
}

Mask decode_mask_png(std::span<const std::uint8_t> bytes)
{
    auto gray = load_gray8(bytes);
    Mask mask(gray.width(), gray.height());
    for (std::size_t i = 0; i < gray.size(); ++i)
        mask[i] = gray[i] != 0 ? 1 : 0;
    return mask;
}

} // namespace nccut

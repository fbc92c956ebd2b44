#include "acd/core/png.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace acd {

namespace {

void put_u32_be(std::string& out, uint32_t v) {
    out.push_back(static_cast<char>((v >> 24) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
}

uint32_t get_u32_be(const uint8_t* p) {
    return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) |
           uint32_t(p[3]);
}

void append_chunk(std::string& out, const char type[4], const std::string& data) {
    put_u32_be(out, static_cast<uint32_t>(data.size()));
    const size_t crc_start = out.size();
    out.append(type, 4);
    out.append(data);
    const uint32_t crc = crc32(
        0, reinterpret_cast<const Bytef*>(out.data() + crc_start), 4 + data.size());
    put_u32_be(out, crc);
}

void write_png(const std::string& path, const std::vector<uint8_t>& px, int width,
               int height, int channels) {
    if (px.size() != static_cast<size_t>(width) * height * channels)
        throw std::invalid_argument("write_png: pixel buffer size mismatch");
    std::string ihdr;
    put_u32_be(ihdr, static_cast<uint32_t>(width));
    put_u32_be(ihdr, static_cast<uint32_t>(height));
    ihdr.push_back(8);                              // bit depth
    ihdr.push_back(channels == 1 ? 0 : 2);          // gray / truecolor
    ihdr.push_back(0);                              // compression
    ihdr.push_back(0);                              // filter method
    ihdr.push_back(0);                              // no interlace

    // Raw scanlines, filter byte 0 per row.
    const size_t stride = static_cast<size_t>(width) * channels;
    std::string raw;
    raw.reserve((stride + 1) * height);
    for (int y = 0; y < height; y++) {
        raw.push_back(0);
        raw.append(reinterpret_cast<const char*>(px.data() + y * stride), stride);
    }
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::string idat(bound, '\0');
    if (compress2(reinterpret_cast<Bytef*>(idat.data()), &bound,
                  reinterpret_cast<const Bytef*>(raw.data()),
                  static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw std::runtime_error("write_png: deflate failed");
    idat.resize(bound);

    std::string out("\x89PNG\r\n\x1a\n", 8);
    append_chunk(out, "IHDR", ihdr);
    append_chunk(out, "IDAT", idat);
    append_chunk(out, "IEND", "");

    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_png: cannot open " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("write_png: write failed for " + path);
}

}  // namespace

void write_png_gray8(const std::string& path, const std::vector<uint8_t>& px,
                     int width, int height) {
    write_png(path, px, width, height, 1);
}

void write_png_rgb8(const std::string& path, const std::vector<uint8_t>& rgb,
                    int width, int height) {
    write_png(path, rgb, width, height, 3);
}

PngImage read_png(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_png: cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
    if (data.size() < 8 || std::memcmp(data.data(), "\x89PNG\r\n\x1a\n", 8) != 0)
        throw std::runtime_error("read_png: not a png file");

    PngImage img;
    std::string idat;
    size_t pos = 8;
    while (pos + 8 <= data.size()) {
        const uint32_t len = get_u32_be(reinterpret_cast<const uint8_t*>(data.data() + pos));
        const std::string type = data.substr(pos + 4, 4);
        if (pos + 12 + len > data.size())
            throw std::runtime_error("read_png: truncated chunk");
        const char* payload = data.data() + pos + 8;
        if (type == "IHDR") {
            img.width = static_cast<int>(get_u32_be(reinterpret_cast<const uint8_t*>(payload)));
            img.height = static_cast<int>(get_u32_be(reinterpret_cast<const uint8_t*>(payload + 4)));
            const uint8_t depth = static_cast<uint8_t>(payload[8]);
            const uint8_t color = static_cast<uint8_t>(payload[9]);
            if (depth != 8 || (color != 0 && color != 2))
                throw std::runtime_error("read_png: unsupported format");
            img.channels = color == 0 ? 1 : 3;
        } else if (type == "IDAT") {
            idat.append(payload, len);
        } else if (type == "IEND") {
            break;
        }
        pos += 12 + len;
    }
    if (img.width <= 0 || img.height <= 0)
        throw std::runtime_error("read_png: missing IHDR");

    const size_t stride = static_cast<size_t>(img.width) * img.channels;
    uLongf raw_len = static_cast<uLongf>((stride + 1) * img.height);
    std::vector<uint8_t> raw(raw_len);
    if (uncompress(raw.data(), &raw_len, reinterpret_cast<const Bytef*>(idat.data()),
                   static_cast<uLong>(idat.size())) != Z_OK ||
        raw_len != (stride + 1) * static_cast<size_t>(img.height))
        throw std::runtime_error("read_png: inflate failed");

    img.px.resize(stride * img.height);
    for (int y = 0; y < img.height; y++) {
        if (raw[y * (stride + 1)] != 0)
            throw std::runtime_error("read_png: unsupported filter type");
        std::memcpy(img.px.data() + y * stride, raw.data() + y * (stride + 1) + 1, stride);
    }
    return img;
}

}  // namespace acd

#include "texfract/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace texfract {

namespace {

// Skips PGM whitespace and '#' comment lines, then reads one decimal token.
int read_pgm_token(std::istream& in, const std::string& path) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (!std::isspace(c)) {
            break;
        }
        c = in.get();
    }
    if (c == EOF || !std::isdigit(c))
        fail(ErrorCode::CorruptData, "malformed PGM header: " + path);
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1'000'000)
            fail(ErrorCode::CorruptData, "malformed PGM header: " + path);
        c = in.get();
    }
    if (c != EOF && !std::isspace(c))
        fail(ErrorCode::CorruptData, "malformed PGM header: " + path);
    return static_cast<int>(value);
}

GrayImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::FileNotFound, "cannot open file: " + path.string());

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5')
        fail(ErrorCode::UnsupportedFormat, "not a binary PGM (P5): " + path.string());

    const int width = read_pgm_token(in, path.string());
    const int height = read_pgm_token(in, path.string());
    const int maxval = read_pgm_token(in, path.string());
    if (width < 1 || height < 1)
        fail(ErrorCode::CorruptData, "bad PGM dimensions: " + path.string());
    if (maxval < 1 || maxval > 255)
        fail(ErrorCode::UnsupportedFormat, "only 8-bit PGM supported: " + path.string());

    std::vector<unsigned char> raw(static_cast<size_t>(width) * height);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(in.gcount()) != raw.size())
        fail(ErrorCode::CorruptData, "truncated PGM data: " + path.string());

    GrayImage img(width, height, 256);
    for (size_t i = 0; i < raw.size(); ++i)
        img.pixels[i] = raw[i];
    return img;
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;

    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

GrayImage load_png(const std::filesystem::path& path) {
    PngReader r;
    r.fp = std::fopen(path.string().c_str(), "rb");
    if (!r.fp)
        fail(ErrorCode::FileNotFound, "cannot open file: " + path.string());

    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png)
        fail(ErrorCode::NumericFailure, "libpng init failed");
    r.info = png_create_info_struct(r.png);
    if (!r.info)
        fail(ErrorCode::NumericFailure, "libpng init failed");

    if (setjmp(png_jmpbuf(r.png)))
        fail(ErrorCode::CorruptData, "corrupt PNG: " + path.string());

    png_init_io(r.png, r.fp);
    png_read_info(r.png, r.info);

    const png_uint_32 width = png_get_image_width(r.png, r.info);
    const png_uint_32 height = png_get_image_height(r.png, r.info);
    const int color_type = png_get_color_type(r.png, r.info);
    const int bit_depth = png_get_bit_depth(r.png, r.info);

    // Normalize everything to 8-bit RGB or gray.
    if (bit_depth == 16) png_set_strip_16(r.png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(r.png);
    if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
    png_set_strip_alpha(r.png);
    (void)png_set_interlace_handling(r.png);
    png_read_update_info(r.png, r.info);

    const int channels = png_get_channels(r.png, r.info);
    if (channels != 1 && channels != 3)
        fail(ErrorCode::UnsupportedFormat, "unsupported PNG layout: " + path.string());

    const size_t rowbytes = png_get_rowbytes(r.png, r.info);
    std::vector<unsigned char> data(rowbytes * height);
    std::vector<png_bytep> rows(height);
    for (png_uint_32 y = 0; y < height; ++y)
        rows[y] = data.data() + y * rowbytes;
    png_read_image(r.png, rows.data());

    GrayImage img(static_cast<int>(width), static_cast<int>(height), 256);
    for (png_uint_32 y = 0; y < height; ++y) {
        const unsigned char* row = rows[y];
        for (png_uint_32 x = 0; x < width; ++x) {
            unsigned v;
            if (channels == 1) {
                v = row[x];
            } else {
                const unsigned red = row[3 * x + 0];
                const unsigned green = row[3 * x + 1];
                const unsigned blue = row[3 * x + 2];
                v = (299u * red + 587u * green + 114u * blue + 500u) / 1000u;
            }
            img.pixels[static_cast<size_t>(y) * width + x] = static_cast<uint16_t>(v);
        }
    }
    return img;
}

bool has_png_signature(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    unsigned char sig[8] = {};
    in.read(reinterpret_cast<char*>(sig), 8);
    return in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

} // namespace

GrayImage load_image(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec) || ec)
        fail(ErrorCode::FileNotFound, "file not found: " + path.string());

    if (has_png_signature(path))
        return load_png(path);

    std::ifstream probe(path, std::ios::binary);
    char magic[2] = {0, 0};
    probe.read(magic, 2);
    if (probe && magic[0] == 'P' && magic[1] == '5')
        return load_pgm(path);

    fail(ErrorCode::UnsupportedFormat, "unsupported image format: " + path.string());
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    if (img.levels > 256)
        fail(ErrorCode::InvalidArgument, "save_pgm: levels must be <= 256");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(ErrorCode::FileNotFound, "cannot create file: " + path.string());
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> raw(img.pixels.size());
    for (size_t i = 0; i < raw.size(); ++i)
        raw[i] = static_cast<unsigned char>(img.pixels[i]);
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out)
        fail(ErrorCode::NumericFailure, "write failed: " + path.string());
}

} // namespace texfract

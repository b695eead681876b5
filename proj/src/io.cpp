#include "rtm/io.hpp"

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace rtm {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<char*>(b), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<char*>(b), 8);
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    put_u64(os, u);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is) {
    const std::uint64_t u = get_u64(is);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

void check_magic(std::istream& is, const char* magic, const std::string& path) {
    char m[4];
    is.read(m, 4);
    if (!is || std::memcmp(m, magic, 4) != 0)
        throw std::runtime_error(path + ": bad magic (expected " + magic + ")");
}

}  // namespace

void write_scatter_data(const ScatterData& d, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os.write("RTMD", 4);
    put_u32(os, 1);
    const unsigned char kind = d.kind == SurfaceKind::Dirichlet ? 0
                               : d.kind == SurfaceKind::Neumann ? 1
                                                                : 2;
    const unsigned char regime = d.regime == Regime::Near ? 0 : 1;
    os.write(reinterpret_cast<const char*>(&kind), 1);
    os.write(reinterpret_cast<const char*>(&regime), 1);
    put_u32(os, static_cast<std::uint32_t>(d.N_s));
    put_u32(os, static_cast<std::uint32_t>(d.N_r));
    put_f64(os, d.k1);
    put_f64(os, d.k2);
    put_f64(os, d.R);
    put_f64(os, d.R_s);
    put_f64(os, d.R_r);
    put_f64(os, d.tau);
    put_u64(os, d.seed);
    for (const auto& z : d.m) {
        put_f64(os, z.real());
        put_f64(os, z.imag());
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

ScatterData read_scatter_data(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path);
    check_magic(is, "RTMD", path);
    const std::uint32_t version = get_u32(is);
    if (version != 1) throw std::runtime_error(path + ": unsupported RTMD version");
    unsigned char kind, regime;
    is.read(reinterpret_cast<char*>(&kind), 1);
    is.read(reinterpret_cast<char*>(&regime), 1);
    ScatterData d;
    d.kind = kind == 0 ? SurfaceKind::Dirichlet : kind == 1 ? SurfaceKind::Neumann
                                                            : SurfaceKind::Penetrable;
    d.regime = regime == 0 ? Regime::Near : Regime::Far;
    d.N_s = static_cast<int>(get_u32(is));
    d.N_r = static_cast<int>(get_u32(is));
    d.k1 = get_f64(is);
    d.k2 = get_f64(is);
    d.R = get_f64(is);
    d.R_s = get_f64(is);
    d.R_r = get_f64(is);
    d.tau = get_f64(is);
    d.seed = get_u64(is);
    if (d.N_s <= 0 || d.N_r <= 0 || d.N_s > 1 << 20 || d.N_r > 1 << 20)
        throw std::runtime_error(path + ": corrupt dimensions");
    d.m.resize(static_cast<std::size_t>(d.N_s) * d.N_r);
    for (auto& z : d.m) {
        const double re = get_f64(is);
        const double im = get_f64(is);
        z = Complex(re, im);
    }
    if (!is) throw std::runtime_error(path + ": truncated file");
    return d;
}

void write_image_grid(const ImageGrid& g, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os.write("RTMG", 4);
    put_u32(os, 1);
    put_u32(os, static_cast<std::uint32_t>(g.n1));
    put_u32(os, static_cast<std::uint32_t>(g.n2));
    put_f64(os, g.x1min);
    put_f64(os, g.x1max);
    put_f64(os, g.x2min);
    put_f64(os, g.x2max);
    for (double v : g.values) put_f64(os, v);
    if (!os) throw std::runtime_error("write failed: " + path);
}

ImageGrid read_image_grid(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path);
    check_magic(is, "RTMG", path);
    if (get_u32(is) != 1) throw std::runtime_error(path + ": unsupported RTMG version");
    const int n1 = static_cast<int>(get_u32(is));
    const int n2 = static_cast<int>(get_u32(is));
    if (n1 <= 0 || n2 <= 0 || static_cast<long>(n1) * n2 > (1L << 28))
        throw std::runtime_error(path + ": corrupt dimensions");
    const double a1 = get_f64(is), b1 = get_f64(is), a2 = get_f64(is), b2 = get_f64(is);
    ImageGrid g(a1, b1, a2, b2, n1, n2);
    for (auto& v : g.values) v = get_f64(is);
    if (!is) throw std::runtime_error(path + ": truncated file");
    return g;
}

void write_image_grid_text(const ImageGrid& g, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os.precision(17);
    for (int i2 = 0; i2 < g.n2; ++i2) {
        for (int i1 = 0; i1 < g.n1; ++i1) os << (i1 ? " " : "") << g.at(i1, i2);
        os << "\n";
    }
}

namespace {

// 16-bit pixels, row 0 at the top (largest x2), overlay drawn in black
std::vector<std::uint16_t> rasterize(const ImageGrid& g, const SurfaceProfile* overlay) {
    double mn = g.values[0], mx = g.values[0];
    for (double v : g.values) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    if (mx == mn) throw std::invalid_argument("render: constant grid");
    std::vector<std::uint16_t> px(static_cast<std::size_t>(g.n1) * g.n2);
    for (int row = 0; row < g.n2; ++row) {
        const int i2 = g.n2 - 1 - row;
        for (int i1 = 0; i1 < g.n1; ++i1)
            px[static_cast<std::size_t>(row) * g.n1 + i1] = static_cast<std::uint16_t>(
                std::lround(65535.0 * (g.at(i1, i2) - mn) / (mx - mn)));
    }
    if (overlay && g.n2 > 1) {
        const double dx2 = (g.x2max - g.x2min) / (g.n2 - 1);
        for (int i1 = 0; i1 < g.n1; ++i1) {
            const double f = profile_eval(*overlay, g.x1(i1));
            const int i2 = static_cast<int>(std::lround((f - g.x2min) / dx2));
            if (i2 >= 0 && i2 < g.n2)
                px[static_cast<std::size_t>(g.n2 - 1 - i2) * g.n1 + i1] = 0;
        }
    }
    return px;
}

}  // namespace

void write_pgm(const ImageGrid& g, const std::string& path, const SurfaceProfile* overlay) {
    const auto px = rasterize(g, overlay);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "P5\n" << g.n1 << " " << g.n2 << "\n65535\n";
    for (std::uint16_t v : px) {
        const unsigned char hi = static_cast<unsigned char>(v >> 8);
        const unsigned char lo = static_cast<unsigned char>(v & 0xff);
        os.put(static_cast<char>(hi));
        os.put(static_cast<char>(lo));
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

namespace {

void put_png_chunk(std::ostream& os, const char type[4], const std::vector<unsigned char>& data) {
    auto be32 = [&](std::uint32_t v) {
        unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
        os.write(reinterpret_cast<char*>(b), 4);
    };
    be32(static_cast<std::uint32_t>(data.size()));
    std::vector<unsigned char> buf(4 + data.size());
    std::memcpy(buf.data(), type, 4);
    std::memcpy(buf.data() + 4, data.data(), data.size());
    os.write(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    const std::uint32_t crc = crc32(0L, buf.data(), static_cast<uInt>(buf.size()));
    be32(crc);
}

}  // namespace

void write_png(const ImageGrid& g, const std::string& path, const SurfaceProfile* overlay) {
    const auto px = rasterize(g, overlay);
    const int w = g.n1, h = g.n2;
    // raw scanlines: filter byte 0 + big-endian 16-bit gray
    std::vector<unsigned char> raw(static_cast<std::size_t>(h) * (1 + 2 * w));
    for (int r = 0; r < h; ++r) {
        unsigned char* row = raw.data() + static_cast<std::size_t>(r) * (1 + 2 * w);
        row[0] = 0;
        for (int c = 0; c < w; ++c) {
            const std::uint16_t v = px[static_cast<std::size_t>(r) * w + c];
            row[1 + 2 * c] = static_cast<unsigned char>(v >> 8);
            row[2 + 2 * c] = static_cast<unsigned char>(v & 0xff);
        }
    }
    uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> comp(comp_len);
    if (compress2(comp.data(), &comp_len, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK)
        throw std::runtime_error("png: deflate failed");
    comp.resize(comp_len);

    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    const unsigned char sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    os.write(reinterpret_cast<const char*>(sig), 8);
    std::vector<unsigned char> ihdr(13);
    auto be = [&](std::uint32_t v, int off) {
        ihdr[off] = static_cast<unsigned char>(v >> 24);
        ihdr[off + 1] = static_cast<unsigned char>(v >> 16);
        ihdr[off + 2] = static_cast<unsigned char>(v >> 8);
        ihdr[off + 3] = static_cast<unsigned char>(v);
    };
    be(static_cast<std::uint32_t>(w), 0);
    be(static_cast<std::uint32_t>(h), 4);
    ihdr[8] = 16;  // bit depth
    ihdr[9] = 0;   // grayscale
    ihdr[10] = ihdr[11] = ihdr[12] = 0;
    put_png_chunk(os, "IHDR", ihdr);
    put_png_chunk(os, "IDAT", comp);
    put_png_chunk(os, "IEND", {});
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace rtm

#ifndef RTM_IO_HPP
#define RTM_IO_HPP

// Binary file formats (little-endian throughout):
//   RTMD  scattering data:  magic "RTMD", version u32, kind u8 (0=D,1=N,2=P),
//         regime u8 (0=near,1=far), N_s u32, N_r u32, k1 f64, k2 f64, R f64,
//         R_s f64, R_r f64, tau f64, seed u64, then row-major N_r x N_s
//         entries as (re, im) f64 pairs.
//   RTMG  image grid:  magic "RTMG", version u32, n1 u32, n2 u32,
//         x1min/x1max/x2min/x2max f64, then row-major (x1-major) f64 values.
//   RTMV  spectral kernel table cache: magic "RTMV", version u32, k1 f64,
//         k2 f64, grid spec (d0,d1,nd, s0,s1,ns), then f64 (re,im) pairs.
// Renders: 16-bit grayscale PGM (min -> 0, max -> 65535, linear), optional
// PNG through zlib, optional profile overlay drawn in black.

#include <string>

#include "rtm/forward.hpp"
#include "rtm/geometry.hpp"

namespace rtm {

void write_scatter_data(const ScatterData& d, const std::string& path);
ScatterData read_scatter_data(const std::string& path);

void write_image_grid(const ImageGrid& g, const std::string& path);
ImageGrid read_image_grid(const std::string& path);
// plain-text variant: one x2-row per line, space-separated values
void write_image_grid_text(const ImageGrid& g, const std::string& path);

// 16-bit grayscale renders; optional profile polyline drawn in black
void write_pgm(const ImageGrid& g, const std::string& path,
               const SurfaceProfile* overlay = nullptr);
void write_png(const ImageGrid& g, const std::string& path,
               const SurfaceProfile* overlay = nullptr);

}  // namespace rtm

#endif

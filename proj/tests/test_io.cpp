#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "rtm/io.hpp"

using namespace rtm;

TEST_SUITE_BEGIN("io");

TEST_CASE("scatter data round trip is bit identical") {
    ScatterData d;
    d.kind = SurfaceKind::Penetrable;
    d.regime = Regime::Far;
    d.N_s = 3;
    d.N_r = 2;
    d.k1 = 5.0;
    d.k2 = 2.5;
    d.R = 20.0;
    d.R_s = 30.0;
    d.R_r = 40.0;
    d.tau = 0.05;
    d.seed = 123456789012345ULL;
    d.m = {{1.5, -2.25}, {0.0, 3.0}, {-1e-300, 4.0}, {5.0, 6.0}, {7.0, -8.0}, {9.5, 0.125}};
    const std::string path = "/tmp/rtm_test_data.rtmd";
    write_scatter_data(d, path);
    const ScatterData r = read_scatter_data(path);
    CHECK(r.kind == d.kind);
    CHECK(r.regime == d.regime);
    CHECK(r.N_s == d.N_s);
    CHECK(r.N_r == d.N_r);
    CHECK(r.k1 == d.k1);
    CHECK(r.k2 == d.k2);
    CHECK(r.R == d.R);
    CHECK(r.R_s == d.R_s);
    CHECK(r.R_r == d.R_r);
    CHECK(r.tau == d.tau);
    CHECK(r.seed == d.seed);
    REQUIRE(r.m.size() == d.m.size());
    for (std::size_t i = 0; i < d.m.size(); ++i) CHECK(r.m[i] == d.m[i]);

    // byte-level: writing the read copy reproduces the file exactly
    const std::string path2 = "/tmp/rtm_test_data2.rtmd";
    write_scatter_data(r, path2);
    std::ifstream a(path, std::ios::binary), b(path2, std::ios::binary);
    const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
}

TEST_CASE("image grid round trip and text output") {
    ImageGrid g(-5, 5, -1.5, 1.0, 7, 4);
    for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = std::sin(0.37 * i);
    const std::string path = "/tmp/rtm_test_grid.rtmg";
    write_image_grid(g, path);
    const ImageGrid r = read_image_grid(path);
    CHECK(r.n1 == g.n1);
    CHECK(r.n2 == g.n2);
    CHECK(r.x1min == g.x1min);
    CHECK(r.x2max == g.x2max);
    for (std::size_t i = 0; i < g.values.size(); ++i) CHECK(r.values[i] == g.values[i]);
    write_image_grid_text(g, "/tmp/rtm_test_grid.txt");
    std::ifstream t("/tmp/rtm_test_grid.txt");
    int lines = 0;
    std::string line;
    while (std::getline(t, line)) ++lines;
    CHECK(lines == g.n2);
}

TEST_CASE("reading garbage fails loudly") {
    std::ofstream("/tmp/rtm_bad.rtmd") << "not a data file";
    CHECK_THROWS_AS((void)read_scatter_data("/tmp/rtm_bad.rtmd"), std::runtime_error);
    CHECK_THROWS_AS((void)read_image_grid("/tmp/does_not_exist.rtmg"), std::runtime_error);
}

TEST_CASE("pgm render: linear 16-bit map and constant-grid error") {
    ImageGrid g(0, 1, 0, 1, 2, 2);
    g.at(0, 0) = 0.0;
    g.at(0, 1) = 1.0;
    g.at(1, 0) = 2.0;
    g.at(1, 1) = 3.0;
    const std::string path = "/tmp/rtm_test.pgm";
    write_pgm(g, path);
    std::ifstream is(path, std::ios::binary);
    std::string header;
    is >> header;
    CHECK(header == "P5");
    int w, h, maxv;
    is >> w >> h >> maxv;
    CHECK(w == 2);
    CHECK(h == 2);
    CHECK(maxv == 65535);
    is.get();
    unsigned char px[8];
    is.read(reinterpret_cast<char*>(px), 8);
    auto val = [&](int i) { return (px[2 * i] << 8) | px[2 * i + 1]; };
    // row 0 is the top (largest x2): values g(.,1) = {1, 3} -> {21845, 65535}
    CHECK(val(0) == 21845);
    CHECK(val(1) == 65535);
    CHECK(val(2) == 0);
    CHECK(val(3) == 43690);

    ImageGrid c(0, 1, 0, 1, 2, 2);
    CHECK_THROWS_AS(write_pgm(c, "/tmp/rtm_const.pgm"), std::invalid_argument);
}

TEST_CASE("png render carries the signature") {
    ImageGrid g(0, 1, 0, 1, 3, 2);
    for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = static_cast<double>(i);
    write_png(g, "/tmp/rtm_test.png");
    std::ifstream is("/tmp/rtm_test.png", std::ios::binary);
    unsigned char sig[8];
    is.read(reinterpret_cast<char*>(sig), 8);
    CHECK(sig[0] == 0x89);
    CHECK(sig[1] == 'P');
    CHECK(sig[2] == 'N');
    CHECK(sig[3] == 'G');
}

TEST_SUITE_END();

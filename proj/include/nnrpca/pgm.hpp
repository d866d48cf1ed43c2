#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nnrpca {

// Binary 8-bit PGM (magic P5, maxval <= 255).
struct PgmImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major
};

PgmImage read_pgm(std::istream& in);
void write_pgm(const PgmImage& image, std::ostream& out);
PgmImage read_pgm_file(const std::string& path);
void write_pgm_file(const PgmImage& image, const std::string& path);

}  // namespace nnrpca

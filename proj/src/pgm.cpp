#include "nnrpca/pgm.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nnrpca {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string token;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch)) {
            if (!token.empty()) return token;
            continue;
        }
        token.push_back(static_cast<char>(ch));
    }
    return token;
}

int parse_positive(const std::string& token, const char* what) {
    try {
        std::size_t used = 0;
        int value = std::stoi(token, &used);
        if (used != token.size() || value <= 0) throw std::invalid_argument(what);
        return value;
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("malformed PGM: bad ") + what);
    }
}

}  // namespace

PgmImage read_pgm(std::istream& in) {
    if (next_token(in) != "P5") throw std::runtime_error("malformed PGM: expected magic P5");
    PgmImage image;
    image.width = parse_positive(next_token(in), "width");
    image.height = parse_positive(next_token(in), "height");
    int maxval = parse_positive(next_token(in), "maxval");
    if (maxval > 255) throw std::runtime_error("malformed PGM: only 8-bit images are supported");
    // The header ends with exactly one whitespace byte, already consumed by
    // the tokenizer.
    std::size_t count = static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height);
    image.pixels.resize(count);
    in.read(reinterpret_cast<char*>(image.pixels.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) {
        throw std::runtime_error("malformed PGM: truncated pixel data");
    }
    return image;
}

void write_pgm(const PgmImage& image, std::ostream& out) {
    if (image.width <= 0 || image.height <= 0 ||
        image.pixels.size() !=
            static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height)) {
        throw std::invalid_argument("inconsistent image dimensions");
    }
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
}

PgmImage read_pgm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_pgm(in);
}

void write_pgm_file(const PgmImage& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_pgm(image, out);
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace nnrpca

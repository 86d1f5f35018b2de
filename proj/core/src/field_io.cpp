#include "hip/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hip/errors.hpp"

namespace hip {

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
        return r;
    }
    return v;
}

}  // namespace

void write_field(std::ostream& out, const ScalarField& f) {
    out << "hipfield 1 " << f.grid().n() << '\n';
    for (double v : f.values()) {
        const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
        char bytes[8];
        std::memcpy(bytes, &bits, sizeof bytes);
        out.write(bytes, sizeof bytes);
    }
    if (!out) throw Error("failed writing hipfield data");
}

ScalarField read_field(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw DomainError("hipfield: missing header line");
    std::istringstream hs(header);
    std::string magic;
    int version = 0;
    int n = 0;
    if (!(hs >> magic >> version >> n) || magic != "hipfield" || version != 1) {
        throw DomainError("hipfield: bad header '" + header + "'");
    }
    const Grid grid(n);
    std::vector<double> values(grid.size());
    for (double& v : values) {
        char bytes[8];
        if (!in.read(bytes, sizeof bytes)) throw DomainError("hipfield: truncated payload");
        std::uint64_t bits = 0;
        std::memcpy(&bits, bytes, sizeof bits);
        v = std::bit_cast<double>(to_little_endian(bits));
    }
    return ScalarField(grid, std::move(values));
}

void save_field(const std::filesystem::path& path, const ScalarField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_field(out, f);
}

ScalarField load_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open " + path.string());
    return read_field(in);
}

}  // namespace hip

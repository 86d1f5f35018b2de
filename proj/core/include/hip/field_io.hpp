#pragma once

// "hipfield v1" dumps: an ASCII header line `hipfield 1 <n>` followed by
// (n+1)^2 little-endian IEEE-754 binary64 values, j outer, i inner.

#include <filesystem>
#include <iosfwd>

#include "hip/mesh.hpp"

namespace hip {

void write_field(std::ostream& out, const ScalarField& f);
ScalarField read_field(std::istream& in);

void save_field(const std::filesystem::path& path, const ScalarField& f);
ScalarField load_field(const std::filesystem::path& path);

}  // namespace hip

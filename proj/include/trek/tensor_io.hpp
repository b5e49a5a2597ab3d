#pragma once

#include <stdexcept>
#include <string>

#include "trek/tensor.hpp"

namespace trek {

// File-format or filesystem failure; the CLI maps this to exit code 2.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tensor container: magic "TT3\0", little-endian u16 version (currently 1),
// three little-endian u32 extents, then n1*n2*n3 little-endian f64 values in
// storage order. Round trips are bit exact.
void save_tensor(const std::string& path, const Tensor3& t);
Tensor3 load_tensor(const std::string& path);

}  // namespace trek

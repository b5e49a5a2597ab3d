#include "trek/tensor_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

namespace trek {

namespace {

constexpr char kMagic[4] = {'T', 'T', '3', '\0'};
constexpr std::uint16_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "serialization assumes a little-endian host");
static_assert(sizeof(double) == 8 && std::numeric_limits<double>::is_iec559);

void put_u16(std::string& buf, std::uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

void save_tensor(const std::string& path, const Tensor3& t) {
  std::string header;
  header.append(kMagic, 4);
  put_u16(header, kVersion);
  put_u32(header, static_cast<std::uint32_t>(t.n1()));
  put_u32(header, static_cast<std::uint32_t>(t.n2()));
  put_u32(header, static_cast<std::uint32_t>(t.n3()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(double)));
  out.flush();
  if (!out) throw io_error("short write to '" + path + "'");
}

Tensor3 load_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");

  unsigned char header[18];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (in.gcount() != sizeof(header)) {
    throw io_error("'" + path + "': truncated header");
  }
  if (std::memcmp(header, kMagic, 4) != 0) {
    throw io_error("'" + path + "': bad magic, not a tensor container");
  }
  if (get_u16(header + 4) != kVersion) {
    throw io_error("'" + path + "': unsupported container version " +
                   std::to_string(get_u16(header + 4)));
  }
  const std::uint32_t n1 = get_u32(header + 6);
  const std::uint32_t n2 = get_u32(header + 10);
  const std::uint32_t n3 = get_u32(header + 14);
  if (n1 == 0 || n2 == 0 || n3 == 0 || n1 > (1u << 24) || n2 > (1u << 24) ||
      n3 > (1u << 24)) {
    throw io_error("'" + path + "': implausible extents");
  }

  Tensor3 t(static_cast<int>(n1), static_cast<int>(n2), static_cast<int>(n3));
  in.read(reinterpret_cast<char*>(t.data()),
          static_cast<std::streamsize>(t.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(t.size() * sizeof(double))) {
    throw io_error("'" + path + "': truncated payload");
  }
  in.peek();
  if (!in.eof()) throw io_error("'" + path + "': trailing bytes after payload");
  return t;
}

}  // namespace trek

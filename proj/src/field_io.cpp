#include "nfs/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "nfs/error.hpp"

namespace nfs {

namespace {

constexpr char kMagic[4] = {'N', 'F', 'S', '1'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8;

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(raw), std::end(raw));
  out.insert(out.end(), std::begin(raw), std::end(raw));
}

template <typename T>
T get_le(const std::uint8_t* in) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, in, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(raw), std::end(raw));
  T value;
  std::memcpy(&value, raw, sizeof(T));
  return value;
}

}  // namespace

std::vector<std::uint8_t> encode_nfs1(const RealField& field) {
  const GridSpec& spec = field.spec();
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 8 * field.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(spec.dimension()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(spec.n()));
  put_le<double>(out, spec.half_width());
  for (double v : field.values()) put_le<double>(out, v);
  return out;
}

RealField decode_nfs1(const std::vector<std::uint8_t>& bytes, FieldRole role) {
  if (bytes.size() < kHeaderBytes) throw Error(ErrorKind::BadFieldFile, "truncated header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw Error(ErrorKind::BadFieldFile, "wrong magic");
  const auto d = get_le<std::uint32_t>(bytes.data() + 4);
  const auto n = get_le<std::uint32_t>(bytes.data() + 8);
  const auto half_width = get_le<double>(bytes.data() + 12);
  if (d == 0 || d > 16 || n > (1u << 20)) throw Error(ErrorKind::BadFieldFile, "implausible header");
  GridSpec spec = [&] {
    try {
      return GridSpec(static_cast<int>(d), static_cast<int>(n), half_width);
    } catch (const Error& e) {
      throw Error(ErrorKind::BadFieldFile, std::string("invalid grid in header: ") + e.what());
    }
  }();
  if (bytes.size() != kHeaderBytes + 8 * spec.size())
    throw Error(ErrorKind::BadFieldFile, "payload length does not match n^d samples");
  std::vector<double> values(spec.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = get_le<double>(bytes.data() + kHeaderBytes + 8 * i);
  try {
    return RealField(spec, std::move(values), role);
  } catch (const Error& e) {
    throw Error(ErrorKind::BadFieldFile, e.what());
  }
}

void write_nfs1(const std::filesystem::path& path, const RealField& field) {
  const auto bytes = encode_nfs1(field);
  write_file_atomically(path, std::string(bytes.begin(), bytes.end()));
}

RealField read_nfs1(const std::filesystem::path& path, FieldRole role) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::BadFieldFile, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_nfs1(bytes, role);
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorKind::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace nfs

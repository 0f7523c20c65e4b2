#include <doctest.h>

#include <filesystem>
#include <random>

#include "nfs/error.hpp"
#include "nfs/field_io.hpp"
#include "oracles.hpp"

using namespace nfs;

TEST_CASE("NFS1 round-trip preserves every bit") {
  std::mt19937_64 rng(21);
  for (int d : {1, 2, 5}) {
    GridSpec g(d, d == 5 ? 4 : 8, 0.25 + d);
    auto f = oracle::random_field(g, rng, 1e3);
    auto bytes = encode_nfs1(f);
    CHECK(bytes.size() == 20 + 8 * g.size());
    auto back = decode_nfs1(bytes);
    CHECK(back.spec() == g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[i] == f[i]);
  }
}

TEST_CASE("NFS1 header layout") {
  GridSpec g(2, 4, 1.5);
  auto bytes = encode_nfs1(RealField(g));
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "NFS1");
  CHECK(bytes[4] == 2);
  CHECK(bytes[8] == 4);
}

TEST_CASE("malformed NFS1 payloads are rejected") {
  GridSpec g(2, 4, 1.0);
  auto bytes = encode_nfs1(RealField(g));
  auto expect_bad = [](const std::vector<std::uint8_t>& b) {
    try {
      (void)decode_nfs1(b);
      FAIL("expected BadFieldFile");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BadFieldFile);
    }
  };
  auto wrong_magic = bytes;
  wrong_magic[0] = 'X';
  expect_bad(wrong_magic);
  auto truncated = bytes;
  truncated.pop_back();
  expect_bad(truncated);
  auto oversized = bytes;
  oversized.push_back(0);
  expect_bad(oversized);
  expect_bad({});
  auto bad_n = bytes;
  bad_n[8] = 6;
  expect_bad(bad_n);
}

TEST_CASE("NFS1 files on disk") {
  auto dir = std::filesystem::temp_directory_path() / "nfs_io_test";
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(1);
  GridSpec g(3, 4, 2.0);
  auto f = oracle::random_field(g, rng);
  write_nfs1(dir / "f.nfs1", f);
  auto back = read_nfs1(dir / "f.nfs1");
  CHECK(oracle::max_abs_diff(back.values(), f.values()) == 0.0);
  CHECK_THROWS_AS(read_nfs1(dir / "missing.nfs1"), Error);
  std::filesystem::remove_all(dir);
}

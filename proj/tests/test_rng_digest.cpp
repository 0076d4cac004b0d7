#include <doctest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "wtpuf/digest.hpp"
#include "wtpuf/rng.hpp"

TEST_CASE("sha256 known answer") {
  const std::vector<std::uint8_t> abc{'a', 'b', 'c'};
  CHECK(wtpuf::to_hex(wtpuf::sha256(abc)) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("base64 roundtrip and padding") {
  CHECK(wtpuf::base64_encode(std::vector<std::uint8_t>{'f', 'o'}) == "Zm8=");
  CHECK(wtpuf::base64_encode(std::vector<std::uint8_t>{}) == "");
  for (std::size_t len = 0; len < 40; ++len) {
    std::vector<std::uint8_t> data(len);
    for (std::size_t i = 0; i < len; ++i) data[i] = static_cast<std::uint8_t>(i * 37 + 11);
    CHECK(wtpuf::base64_decode(wtpuf::base64_encode(data)) == data);
  }
  CHECK_THROWS(wtpuf::base64_decode("@@@="));
}

TEST_CASE("derived seeds are distinct and reproducible") {
  CHECK(wtpuf::derive_seed(1, 2, 3) == wtpuf::derive_seed(1, 2, 3));
  CHECK(wtpuf::derive_seed(1, 2, 3) != wtpuf::derive_seed(1, 2, 4));
  CHECK(wtpuf::derive_seed(1, 2, 3) != wtpuf::derive_seed(1, 3, 2));
  CHECK(wtpuf::derive_seed(1, 2, 3) != wtpuf::derive_seed(2, 2, 3));
}

TEST_CASE("parallel_blocks visits every block once and rethrows") {
  std::vector<std::atomic<int>> hits(50);
  wtpuf::parallel_blocks(hits.size(), 4, [&](std::size_t b) { ++hits[b]; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(wtpuf::parallel_blocks(10, 3,
                                         [](std::size_t b) {
                                           if (b == 7) throw std::runtime_error("boom");
                                         }),
                  std::runtime_error);
}

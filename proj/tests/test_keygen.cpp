#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "wtpuf/keygen.hpp"
#include "wtpuf/serialize.hpp"

using namespace wtpuf;

namespace {

struct Fixture {
  int q;
  Quantizer qz;
  DmcModel legit;
  WiretapCode code;
  EnvironmentConfig env;

  explicit Fixture(int q_ = 8)
      : q(q_),
        qz(build_quantizer(QuantizerScheme::equiprobable, q_, EnvironmentConfig{}.normalized_sigma())) {
    env.temperature_range = std::pair{5.0, 35.0};
    legit = estimate_channel(env, qz, 4000, true, 1);
    EnvironmentConfig att = env;
    att.attack = AttackConfig{};
    const DmcModel attacker = estimate_channel(att, qz, 4000, true, 2);
    code = monte_carlo_construct(legit, attacker, 2, 2000, 1e-3, 3).first;
  }
};

const Fixture& fixture8() {
  static const Fixture f(8);
  return f;
}

PufResponse device(std::uint64_t k) {
  return normalize(enroll_device(derive_seed(77, streams::device, k), EnvironmentConfig{}));
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("enroll then reproduce on the same measurement") {
  const auto& f = fixture8();
  for (bool wp : {true, false}) {
    for (std::uint64_t k = 0; k < 20; ++k) {
      const auto x = device(k);
      const auto e = enroll(x, f.code, f.qz, f.legit, k, wp);
      CHECK(e.secret.symbols.size() == f.code.info_set.size());
      CHECK(e.secret.bit_length() == 3 * f.code.info_set.size());
      CHECK(e.bundle.with_helper_data == wp);
      if (!wp) CHECK(e.bundle.w_prime == AnalogHelperData{});
      for (auto kind : {DecoderKind::sc, DecoderKind::scl}) {
        DecoderConfig dec;
        dec.kind = kind;
        const auto r = reproduce(x, e.bundle, dec);
        REQUIRE(r.status == ReproduceStatus::ok);
        CHECK(*r.secret == e.secret);
      }
    }
  }
}

TEST_CASE("fresh randomness per enrollment") {
  const auto& f = fixture8();
  const auto x = device(1);
  const auto a = enroll(x, f.code, f.qz, f.legit, 1);
  const auto b = enroll(x, f.code, f.qz, f.legit, 2);
  CHECK(a.bundle.w != b.bundle.w);
  CHECK(a.secret.symbols != b.secret.symbols);
  CHECK(enroll(x, f.code, f.qz, f.legit, 1).bundle.w == a.bundle.w);
}

TEST_CASE("a response that quantizes to the codeword gives W = 0") {
  const auto& f = fixture8();
  const auto x = device(3);
  const auto first = enroll(x, f.code, f.qz, f.legit, 9);
  const auto [x_hat, _] = quantize(x, f.qz);
  PufResponse crafted;
  crafted.normalized = true;
  for (int j = 0; j < kNodes; ++j) {
    const int c = first.bundle.w[j] ^ x_hat[j];
    crafted.values[j] = static_cast<std::int32_t>(std::lround(f.qz.midpoint(c)));
  }
  const auto second = enroll(crafted, f.code, f.qz, f.legit, 9);
  CHECK(second.bundle.w == SymbolVector(kNodes, 0));
}

TEST_CASE("digest covers the secret only") {
  const auto& f = fixture8();
  REQUIRE_FALSE(f.code.random_set.empty());
  const auto e = enroll(device(4), f.code, f.qz, f.legit, 4);
  CHECK(e.bundle.secret_hash == sha256(e.secret.symbols));
}

TEST_CASE("W looks like the output for a uniformly random codeword") {
  const auto& f = fixture8();
  std::vector<double> counts(8, 0);
  for (std::uint64_t k = 0; k < 400; ++k)
    for (Symbol w : enroll(device(100 + k), f.code, f.qz, f.legit, k).bundle.w) ++counts[w];
  const double expected = 400.0 * kNodes / 8;
  double chi2 = 0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < oracle::chi2_critical_1pct(7));
}

TEST_CASE("tampered measurements fail and never yield a wrong secret") {
  const auto& f = fixture8();
  EnvironmentConfig attacked;
  attacked.attack = AttackConfig{};
  int failures = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto raw = enroll_device(derive_seed(78, streams::device, k), EnvironmentConfig{});
    const auto e = enroll(normalize(raw), f.code, f.qz, f.legit, k);
    const auto reading = normalize(remeasure(raw, attacked, k));
    DecoderConfig dec;
    dec.kind = DecoderKind::scl;
    const auto r = reproduce(reading, e.bundle, dec);
    if (r.status == ReproduceStatus::ok) CHECK(*r.secret == e.secret);
    else {
      CHECK_FALSE(r.secret.has_value());
      ++failures;
    }
  }
  CHECK(failures >= 99);

  // a corrupted digest is a tamper failure even on a perfect reading
  const auto x = device(5);
  auto e = enroll(x, f.code, f.qz, f.legit, 5);
  e.bundle.secret_hash[0] ^= 1;
  CHECK(reproduce(x, e.bundle).status == ReproduceStatus::tamper_failure);
}

TEST_CASE("bundle file roundtrip") {
  const auto& f = fixture8();
  const auto x = device(6);
  const auto e = enroll(x, f.code, f.qz, f.legit, 6);
  const auto path = temp_file("wtpuf_bundle_test.json");
  save_bundle(path, e.bundle);
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  const auto back = load_bundle(path);
  CHECK(back.w == e.bundle.w);
  CHECK(back.w_prime == e.bundle.w_prime);
  CHECK(back.secret_hash == e.bundle.secret_hash);
  CHECK(back.quantizer == e.bundle.quantizer);
  CHECK(back.channel.matrix == e.bundle.channel.matrix);
  CHECK(back.channel.input_prior == e.bundle.channel.input_prior);
  CHECK(to_json(back.code).dump() == to_json(e.bundle.code).dump());
  CHECK(to_json(back).dump() == to_json(e.bundle).dump());
  const auto r = reproduce(x, back);
  REQUIRE(r.status == ReproduceStatus::ok);
  CHECK(*r.secret == e.secret);

  auto j = to_json(e.bundle);
  j["format_version"] = 99;
  CHECK_THROWS(reproduce(x, bundle_from_json(j)));
  std::filesystem::remove(path);
}

TEST_CASE("I/O failures surface as filesystem errors") {
  CHECK_THROWS_AS(load_bundle("/nonexistent/dir/bundle.json"), std::filesystem::filesystem_error);
  const auto& f = fixture8();
  const auto e = enroll(device(7), f.code, f.qz, f.legit, 7);
  CHECK_THROWS_AS(save_bundle("/nonexistent/dir/bundle.json", e.bundle),
                  std::filesystem::filesystem_error);
}

TEST_CASE("enroll rejects mismatched parts") {
  const auto& f = fixture8();
  const auto q4 = build_quantizer(QuantizerScheme::equidistant, 4, 0);
  CHECK_THROWS(enroll(device(1), f.code, q4, f.legit, 1));
  CHECK_THROWS(enroll(device(1), f.code, f.qz, DmcModel::identity(4), 1));
}

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "wtpuf/channel.hpp"

using namespace wtpuf;

namespace {

Quantizer eq8() {
  return build_quantizer(QuantizerScheme::equiprobable, 8, EnvironmentConfig{}.normalized_sigma());
}

EnvironmentConfig legit_env() {
  EnvironmentConfig cfg;
  cfg.temperature_range = std::pair{5.0, 35.0};
  return cfg;
}

}  // namespace

TEST_CASE("factories are valid channels") {
  for (int q : {2, 8, 32}) {
    CHECK_NOTHROW(DmcModel::identity(q).validate());
    CHECK_NOTHROW(DmcModel::uniform(q).validate());
    CHECK_NOTHROW(DmcModel::symmetric(q, 0.1).validate());
  }
  DmcModel broken = DmcModel::identity(4);
  broken.matrix(0, 0) = 0.5;
  CHECK_THROWS(broken.validate());
}

TEST_CASE("likelihood vectors") {
  const auto id = DmcModel::identity(8);
  const auto v = channel_llvec(3, id);
  for (int c = 0; c < 8; ++c) CHECK(v[c] == (c == 3 ? 1.0 : 0.0));
  const auto u = channel_llvec(5, DmcModel::uniform(8));
  for (int c = 0; c < 8; ++c) CHECK(u[c] == doctest::Approx(1.0 / 8));
  // code offset: y = 6 read through w = 5 is codeword symbol 3
  const auto o = code_offset_llvec(6, 5, id);
  for (int c = 0; c < 8; ++c) CHECK(o[c] == (c == 3 ? 1.0 : 0.0));
  CHECK_THROWS(channel_llvec(8, id));
}

TEST_CASE("noiseless estimation is the identity up to smoothing") {
  EnvironmentConfig quiet;
  quiet.sigma_noise = 0;
  const auto m = estimate_channel(quiet, eq8(), 2000, true, 1, 1);
  CHECK_NOTHROW(m.validate());
  for (int c = 0; c < 8; ++c) CHECK(m.matrix(c, c) > 0.9995);
}

TEST_CASE("estimation with a single trial is still a proper channel") {
  const auto m = estimate_channel(legit_env(), eq8(), 1, false, 3, 1);
  CHECK_NOTHROW(m.validate());
  CHECK((m.matrix.array() > 0).all());
}

TEST_CASE("legitimate q=8 channel with W' is diagonally dominant") {
  const auto m = estimate_channel(legit_env(), eq8(), 100000, true, 7);
  CHECK_NOTHROW(m.validate());
  for (int c = 0; c < 8; ++c) CHECK(m.matrix(c, c) > 0.9);
  CHECK(m.label == ChannelRole::legitimate);
  Eigen::Index argmax;
  channel_llvec(0, m).maxCoeff(&argmax);
  CHECK(argmax == 0);

  EnvironmentConfig att = legit_env();
  att.attack = AttackConfig{};
  const auto a = estimate_channel(att, eq8(), 20000, true, 7);
  CHECK(a.label == ChannelRole::attacker);
  CHECK(a.matrix.diagonal().minCoeff() < m.matrix.diagonal().minCoeff());
}

TEST_CASE("fully redrawn nodes forget their input") {
  EnvironmentConfig cfg;
  cfg.attack = AttackConfig{};
  cfg.attack->affected_groups = {0, 1, 2, 3, 4, 5, 6, 7};
  const Quantizer qz = eq8();
  const auto m = estimate_channel(cfg, qz, 20000, false, 9);
  // each column is the quantizer's output distribution for the broadened values
  const double s = (cfg.sigma_puf + cfg.attack->sigma_broadening) * std::sqrt(15.0 / 16.0);
  auto cdf = [&](double x) { return 0.5 * std::erfc(-x / (s * std::sqrt(2.0))); };
  for (int y = 0; y < 8; ++y) {
    const double expected = cdf(qz.upper(y) == 10000 ? 1e9 : qz.upper(y)) -
                            cdf(qz.lower(y) == -10000 ? -1e9 : qz.lower(y));
    for (int c = 0; c < 8; ++c) CHECK(m.matrix(y, c) == doctest::Approx(expected).epsilon(0.05));
  }
}

TEST_CASE("estimation is deterministic and thread-count independent") {
  const auto a = estimate_channel(legit_env(), eq8(), 3000, true, 5, 1);
  const auto b = estimate_channel(legit_env(), eq8(), 3000, true, 5, 3);
  CHECK(a.matrix == b.matrix);
  CHECK(a.input_prior == b.input_prior);
}

TEST_CASE("sampler observe produces code-offset likelihoods") {
  const auto m = DmcModel::symmetric(4, 0.0);
  ChannelSampler sampler(m);
  Rng rng(1);
  SymbolVector c{0, 1, 2, 3};
  const auto ll = sampler.observe(c, rng);
  for (int j = 0; j < 4; ++j)
    for (int a = 0; a < 4; ++a) CHECK(ll(a, j) == (a == c[j] ? 1.0 : 0.0));
}

TEST_CASE("channel CSV") {
  std::ostringstream out;
  write_channel_csv(out, DmcModel::identity(2));
  CHECK(out.str() == "y,c,p\n0,0,1\n0,1,0\n1,0,0\n1,1,1\n");
}

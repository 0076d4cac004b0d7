#include "wtpuf/channel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace wtpuf {

std::string to_string(ChannelRole role) {
  return role == ChannelRole::legitimate ? "legitimate" : "attacker";
}

ChannelRole parse_role(const std::string& name) {
  if (name == "legitimate") return ChannelRole::legitimate;
  if (name == "attacker") return ChannelRole::attacker;
  throw std::invalid_argument("unknown channel label '" + name + "'");
}

void DmcModel::validate() const {
  if (q < 2) throw std::invalid_argument("channel alphabet must have at least 2 symbols");
  if (matrix.rows() != q || matrix.cols() != q)
    throw std::invalid_argument("channel matrix must be q x q");
  if ((matrix.array() < 0).any()) throw std::invalid_argument("negative channel probability");
  if (((matrix.colwise().sum().array() - 1.0).abs() > 1e-9).any())
    throw std::invalid_argument("channel matrix columns must sum to 1");
  if (input_prior.size() != q || (input_prior.array() < 0).any() ||
      std::abs(input_prior.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("channel input prior must be a probability vector");
}

DmcModel DmcModel::identity(int q) {
  DmcModel m;
  m.q = q;
  m.matrix = Eigen::MatrixXd::Identity(q, q);
  m.input_prior = Eigen::VectorXd::Constant(q, 1.0 / q);
  return m;
}

DmcModel DmcModel::uniform(int q) {
  DmcModel m;
  m.q = q;
  m.matrix = Eigen::MatrixXd::Constant(q, q, 1.0 / q);
  m.input_prior = Eigen::VectorXd::Constant(q, 1.0 / q);
  return m;
}

DmcModel DmcModel::symmetric(int q, double p) {
  DmcModel m = identity(q);
  m.matrix = Eigen::MatrixXd::Constant(q, q, p / (q - 1));
  m.matrix.diagonal().setConstant(1.0 - p);
  return m;
}

DmcModel estimate_channel(const EnvironmentConfig& cfg, const Quantizer& qz, std::uint64_t trials,
                          bool use_w_prime, std::uint64_t seed, unsigned threads) {
  if (trials < 1) throw std::invalid_argument("channel estimation needs at least one trial");
  cfg.validate();
  const int q = qz.levels();
  if (q > 256) throw std::invalid_argument("channel alphabet too large");

  constexpr std::uint64_t kBlock = 1024;
  const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
  std::vector<Eigen::MatrixXd> tallies(blocks, Eigen::MatrixXd::Zero(q, q));
  const AnalogHelperData no_offsets{};

  parallel_blocks(blocks, threads, [&](std::size_t b) {
    auto& counts = tallies[b];
    const std::uint64_t end = std::min<std::uint64_t>(trials, (b + 1) * kBlock);
    for (std::uint64_t t = b * kBlock; t < end; ++t) {
      PufResponse device = enroll_device(derive_seed(seed, streams::device, t), cfg);
      auto [enrolled, helper] = quantize(normalize(device), qz);
      PufResponse again =
          normalize(remeasure(device, cfg, derive_seed(seed, streams::remeasure, t)));
      SymbolVector read = requantize(again, qz, use_w_prime ? helper : no_offsets);
      for (int i = 0; i < kNodes; ++i) counts(read[i], enrolled[i]) += 1.0;
    }
  });

  Eigen::MatrixXd counts = Eigen::MatrixXd::Constant(q, q, 1.0);
  for (const auto& t : tallies) counts += t;

  DmcModel model;
  model.q = q;
  model.matrix = counts.array().rowwise() / counts.colwise().sum().array();
  Eigen::VectorXd column_mass = counts.colwise().sum().transpose();
  model.input_prior = column_mass / column_mass.sum();
  model.label = cfg.attack ? ChannelRole::attacker : ChannelRole::legitimate;
  model.with_helper_data = use_w_prime;
  model.trials = trials;
  model.seed = seed;
  return model;
}

namespace {

Eigen::VectorXd normalized(Eigen::VectorXd v) {
  double s = v.sum();
  if (s > 0) v /= s;
  return v;
}

}  // namespace

Eigen::VectorXd channel_llvec(Symbol y, const DmcModel& model) {
  if (y >= model.q) throw std::invalid_argument("channel output outside the alphabet");
  return normalized(model.matrix.row(y).transpose());
}

Eigen::VectorXd code_offset_llvec(Symbol y, Symbol w, const DmcModel& model) {
  if (y >= model.q || w >= model.q) throw std::invalid_argument("symbol outside the alphabet");
  Eigen::VectorXd v(model.q);
  for (int c = 0; c < model.q; ++c) v[c] = model.matrix(y, c ^ w);
  return normalized(std::move(v));
}

ChannelSampler::ChannelSampler(const DmcModel& model) : model_(model) {
  model_.validate();
  const int q = model_.q;
  prior_cdf_.resize(q);
  column_cdf_.resize(static_cast<std::size_t>(q) * q);
  double acc = 0;
  for (int x = 0; x < q; ++x) prior_cdf_[x] = acc += model_.input_prior[x];
  for (int x = 0; x < q; ++x) {
    acc = 0;
    for (int y = 0; y < q; ++y) column_cdf_[x * q + y] = acc += model_.matrix(y, x);
  }
}

namespace {

Symbol draw(std::span<const double> cdf, Rng& rng) {
  double u = std::uniform_real_distribution<double>(0.0, cdf.back())(rng);
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<Symbol>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                      static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

}  // namespace

Symbol ChannelSampler::sample_input(Rng& rng) const { return draw(prior_cdf_, rng); }

Symbol ChannelSampler::sample_output(Symbol input, Rng& rng) const {
  const int q = model_.q;
  return draw(std::span<const double>(column_cdf_).subspan(static_cast<std::size_t>(input) * q, q),
              rng);
}

Eigen::MatrixXd ChannelSampler::observe(std::span<const Symbol> codeword, Rng& rng) const {
  const int q = model_.q;
  Eigen::MatrixXd llvecs(q, static_cast<Eigen::Index>(codeword.size()));
  for (std::size_t j = 0; j < codeword.size(); ++j) {
    Symbol x = sample_input(rng);
    Symbol w = codeword[j] ^ x;
    Symbol y = sample_output(x, rng);
    auto col = llvecs.col(static_cast<Eigen::Index>(j));
    for (int c = 0; c < q; ++c) col[c] = model_.matrix(y, c ^ w);
    double s = col.sum();
    if (s > 0) col /= s;
  }
  return llvecs;
}

void write_channel_csv(std::ostream& out, const DmcModel& model) {
  out << "y,c,p\n";
  out.precision(17);
  for (int y = 0; y < model.q; ++y)
    for (int c = 0; c < model.q; ++c) out << y << ',' << c << ',' << model.matrix(y, c) << '\n';
}

}  // namespace wtpuf

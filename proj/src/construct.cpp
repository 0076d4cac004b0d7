#include "wtpuf/construct.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "wtpuf/digest.hpp"

namespace wtpuf {

void WiretapCode::validate() const {
  if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("code length must be a power of two");
  GaloisField field = irreducible_poly ? GaloisField(std::countr_zero(static_cast<unsigned>(q)),
                                                     irreducible_poly)
                                       : GaloisField::with_order(q);
  if (alpha == 0 || !field.contains(alpha)) throw std::invalid_argument("invalid kernel parameter");
  std::vector<int> seen(n, 0);
  for (const auto* set : {&frozen_set, &random_set, &info_set})
    for (int i : *set) {
      if (i < 0 || i >= n) throw std::invalid_argument("code index out of range");
      if (seen[i]++) throw std::invalid_argument("code index assigned twice");
    }
  if (std::count(seen.begin(), seen.end(), 1) != n)
    throw std::invalid_argument("code sets do not cover every index");
  if (reliability_legit.size() == static_cast<std::size_t>(n))
    for (int i : info_set)
      if (reliability_legit[i] > d)
        throw std::invalid_argument("information index above the reliability threshold");
}

std::vector<IndexRole> WiretapCode::roles() const {
  std::vector<IndexRole> out(n, IndexRole::info);
  for (int i : frozen_set) out[i] = IndexRole::frozen;
  for (int i : random_set) out[i] = IndexRole::random;
  return out;
}

PolarKernel WiretapCode::kernel() const {
  int m = std::countr_zero(static_cast<unsigned>(q));
  GaloisField field = irreducible_poly ? GaloisField(m, irreducible_poly) : GaloisField(m);
  return PolarKernel(std::move(field), alpha);
}

FixedSymbols WiretapCode::fixed_symbols(std::span<const Symbol> frozen_values) const {
  if (frozen_values.size() != frozen_set.size())
    throw std::invalid_argument("expected one value per frozen index");
  FixedSymbols fixed(n);
  for (std::size_t k = 0; k < frozen_set.size(); ++k) fixed[frozen_set[k]] = frozen_values[k];
  return fixed;
}

FixedSymbols WiretapCode::fixed_symbols() const {
  return fixed_symbols(SymbolVector(frozen_set.size(), 0));
}

// ---------------------------------------------------------------------------

namespace {

double entropy_bits(std::span<const double> p) {
  double h = 0;
  for (double v : p)
    if (v > 0) h -= v * std::log2(v);
  return std::max(h, 0.0);
}

struct ProfileTally {
  std::vector<std::uint64_t> errors_legit;
  std::vector<std::uint64_t> errors_attacker;
  std::vector<double> aligned;  // n x q: summed P(u_i = truth + e)
};

}  // namespace

ReliabilityProfile estimate_reliability(const DmcModel& legit, const DmcModel& attacker,
                                        Symbol alpha, std::uint64_t trials, std::uint64_t seed,
                                        int n, unsigned threads) {
  if (trials < 1) throw std::invalid_argument("construction needs at least one trial");
  if (legit.q != attacker.q) throw std::invalid_argument("channels disagree on q");
  const int q = legit.q;
  const PolarKernel kernel(GaloisField::with_order(q), alpha);
  const ChannelSampler legit_channel(legit);
  const ChannelSampler attacker_channel(attacker);

  constexpr std::uint64_t kBlock = 256;
  const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
  std::vector<ProfileTally> tallies(blocks);

  parallel_blocks(blocks, threads, [&](std::size_t b) {
    ProfileTally& tally = tallies[b];
    tally.errors_legit.assign(n, 0);
    tally.errors_attacker.assign(n, 0);
    tally.aligned.assign(static_cast<std::size_t>(n) * q, 0.0);
    std::uniform_int_distribution<int> symbol(0, q - 1);
    SymbolVector u(n);
    const std::uint64_t end = std::min<std::uint64_t>(trials, (b + 1) * kBlock);
    for (std::uint64_t t = b * kBlock; t < end; ++t) {
      Rng rng = make_rng(seed, streams::construct, t);
      for (auto& s : u) s = static_cast<Symbol>(symbol(rng));
      const SymbolVector c = polar_encode(u, kernel);

      const Likelihoods legit_llr = legit_channel.observe(c, rng);
      genie_sc_decode(kernel, legit_llr, u, [&](int i, std::span<const double>, Symbol decision) {
        tally.errors_legit[i] += decision != u[i];
      });

      const Likelihoods attacker_llr = attacker_channel.observe(c, rng);
      genie_sc_decode(kernel, attacker_llr, u,
                      [&](int i, std::span<const double> posterior, Symbol decision) {
                        tally.errors_attacker[i] += decision != u[i];
                        double* acc = tally.aligned.data() + static_cast<std::size_t>(i) * q;
                        for (int e = 0; e < q; ++e) acc[e] += posterior[u[i] ^ e];
                      });
    }
  });

  std::vector<std::uint64_t> errors_legit(n, 0), errors_attacker(n, 0);
  std::vector<double> aligned(static_cast<std::size_t>(n) * q, 0.0);
  for (const auto& tally : tallies) {
    for (int i = 0; i < n; ++i) {
      errors_legit[i] += tally.errors_legit[i];
      errors_attacker[i] += tally.errors_attacker[i];
    }
    for (std::size_t k = 0; k < aligned.size(); ++k) aligned[k] += tally.aligned[k];
  }

  ReliabilityProfile profile;
  profile.n = n;
  profile.q = q;
  profile.alpha = alpha;
  profile.irreducible_poly = kernel.field().polynomial();
  profile.trials = trials;
  profile.seed = seed;
  profile.with_helper_data = legit.with_helper_data;
  profile.error_legit.resize(n);
  profile.error_attacker.resize(n);
  profile.entropy_attacker.resize(n);
  const double scale = 1.0 / static_cast<double>(trials);
  std::vector<double> dist(q);
  for (int i = 0; i < n; ++i) {
    profile.error_legit[i] = static_cast<double>(errors_legit[i]) * scale;
    profile.error_attacker[i] = static_cast<double>(errors_attacker[i]) * scale;
    double total = 0;
    for (int e = 0; e < q; ++e) total += aligned[static_cast<std::size_t>(i) * q + e];
    for (int e = 0; e < q; ++e)
      dist[e] = total > 0 ? aligned[static_cast<std::size_t>(i) * q + e] / total : 0.0;
    profile.entropy_attacker[i] = entropy_bits(dist);
  }
  return profile;
}

std::pair<WiretapCode, ConstructionReport> partition(const ReliabilityProfile& profile, double d,
                                                     double random_entropy_threshold) {
  if (!(d > 0 && d < 1)) throw std::invalid_argument("threshold d must lie in (0, 1)");
  WiretapCode code;
  code.n = profile.n;
  code.q = profile.q;
  code.alpha = profile.alpha;
  code.irreducible_poly = profile.irreducible_poly;
  code.reliability_legit = profile.error_legit;
  code.reliability_attacker = profile.error_attacker;
  code.posterior_entropy_attacker = profile.entropy_attacker;
  code.d = d;
  code.random_entropy_threshold = random_entropy_threshold;
  code.with_helper_data = profile.with_helper_data;
  code.seed = profile.seed;
  code.trials = profile.trials;

  for (int i = 0; i < profile.n; ++i) {
    if (profile.error_legit[i] > d)
      code.frozen_set.push_back(i);
    else if (profile.entropy_attacker[i] < random_entropy_threshold)
      code.random_set.push_back(i);
    else
      code.info_set.push_back(i);
  }
  ConstructionReport report = summarize(code);
  return {std::move(code), report};
}

ConstructionReport summarize(const WiretapCode& code) {
  ConstructionReport report;
  report.q = code.q;
  report.d = code.d;
  report.with_helper_data = code.with_helper_data;
  for (int i : code.info_set) report.h_att += code.posterior_entropy_attacker.at(i);
  auto add_printed = [&](int i) {
    double p = code.reliability_attacker.at(i);
    if (p > 0) report.h_att_printed -= p * std::log2(p);
  };
  // summed in index order so the value does not depend on set membership order
  std::vector<int> kept(code.info_set);
  kept.insert(kept.end(), code.random_set.begin(), code.random_set.end());
  std::sort(kept.begin(), kept.end());
  for (int i : kept) add_printed(i);
  report.n_f = static_cast<int>(code.random_set.size());
  report.n_s = static_cast<int>(code.random_set.size() + code.info_set.size());
  report.h_secret = report.n_s * std::log2(static_cast<double>(code.q));
  return report;
}

std::pair<WiretapCode, ConstructionReport> monte_carlo_construct(
    const DmcModel& legit, const DmcModel& attacker, Symbol alpha, std::uint64_t trials,
    double d, std::uint64_t seed, double random_entropy_threshold, unsigned threads) {
  return partition(estimate_reliability(legit, attacker, alpha, trials, seed, kNodes, threads), d,
                   random_entropy_threshold);
}

// ---------------------------------------------------------------------------

SymbolVector sc_decode(const WiretapCode& code, const Likelihoods& channel,
                       std::span<const Symbol> frozen_values) {
  return sc_decode(code.kernel(), channel, code.fixed_symbols(frozen_values));
}

SclResult scl_decode(const WiretapCode& code, const Likelihoods& channel,
                     std::span<const Symbol> frozen_values, const SclOptions& options) {
  return scl_decode(code.kernel(), channel, code.fixed_symbols(frozen_values), options);
}

namespace {

SymbolVector gather(std::span<const Symbol> u, std::span<const int> indices) {
  SymbolVector out;
  out.reserve(indices.size());
  for (int i : indices) out.push_back(u[i]);
  return out;
}

}  // namespace

FerResult fer_experiment(const WiretapCode& code, const DmcModel& legit,
                         const DecoderConfig& decoder, std::uint64_t trials, std::uint64_t seed,
                         unsigned threads) {
  if (trials < 1) throw std::invalid_argument("FER experiment needs at least one trial");
  code.validate();
  if (legit.q != code.q) throw std::invalid_argument("channel and code disagree on q");
  const PolarKernel kernel = code.kernel();
  const ChannelSampler channel(legit);
  const FixedSymbols fixed = code.fixed_symbols();
  const auto roles = code.roles();

  constexpr std::uint64_t kBlock = 256;
  const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
  std::vector<std::uint64_t> errors(blocks, 0);

  parallel_blocks(blocks, threads, [&](std::size_t b) {
    std::uniform_int_distribution<int> symbol(0, code.q - 1);
    SymbolVector u(code.n);
    const std::uint64_t end = std::min<std::uint64_t>(trials, (b + 1) * kBlock);
    for (std::uint64_t t = b * kBlock; t < end; ++t) {
      Rng rng = make_rng(seed, streams::fer, t);
      for (int i = 0; i < code.n; ++i)
        u[i] = roles[i] == IndexRole::frozen ? 0 : static_cast<Symbol>(symbol(rng));
      const SymbolVector secret = gather(u, code.info_set);
      const Likelihoods llr = channel.observe(polar_encode(u, kernel), rng);

      SymbolVector decoded;
      if (decoder.kind == DecoderKind::sc) {
        decoded = sc_decode(kernel, llr, fixed);
      } else {
        SclOptions options;
        options.list_size = decoder.list_size;
        options.prune_delta = decoder.prune_delta;
        if (decoder.hash_selection) {
          const Digest target = sha256(secret);
          options.acceptor = [&](std::span<const Symbol> candidate) {
            return sha256(gather(candidate, code.info_set)) == target;
          };
        }
        try {
          decoded = scl_decode(kernel, llr, fixed, options).u;
        } catch (const DecodeFailure&) {
          ++errors[b];
          continue;
        }
      }
      errors[b] += gather(decoded, code.info_set) != secret;
    }
  });

  FerResult result;
  result.frames = trials;
  for (auto e : errors) result.frame_errors += e;
  return result;
}

void write_report_header(std::ostream& out) {
  out << "q,d,with_helper_data,n_s,n_f,H_att,H_att_printed,H_secret\n";
}

void write_report_row(std::ostream& out, const ConstructionReport& row) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%.6g,%d,%d,%d,%.4f,%.4f,%.1f\n", row.q, row.d,
                row.with_helper_data ? 1 : 0, row.n_s, row.n_f, row.h_att, row.h_att_printed,
                row.h_secret);
  out << buf;
}

}  // namespace wtpuf

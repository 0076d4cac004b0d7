#include "wtpuf/keygen.hpp"

#include <stdexcept>

#include "wtpuf/serialize.hpp"

namespace wtpuf {

Digest secret_digest(std::span<const Symbol> secret) { return sha256(secret); }

namespace {

SymbolVector gather(std::span<const Symbol> u, std::span<const int> indices) {
  SymbolVector out;
  out.reserve(indices.size());
  for (int i : indices) out.push_back(u[i]);
  return out;
}

}  // namespace

EnrollResult enroll(const PufResponse& device, const WiretapCode& code, const Quantizer& qz,
                    const DmcModel& legit, std::uint64_t rng_seed, bool use_w_prime) {
  code.validate();
  legit.validate();
  if (code.n != kNodes) throw std::invalid_argument("code length must equal the node count");
  if (qz.levels() != code.q || legit.q != code.q)
    throw std::invalid_argument("quantizer, channel and code disagree on q");

  const PolarKernel kernel = code.kernel();
  Rng rng = make_rng(rng_seed, streams::enroll, 0);
  std::uniform_int_distribution<int> symbol(0, code.q - 1);
  SymbolVector u(code.n, 0);
  for (int i : code.info_set) u[i] = static_cast<Symbol>(symbol(rng));
  for (int i : code.random_set) u[i] = static_cast<Symbol>(symbol(rng));
  const SymbolVector c = polar_encode(u, kernel);

  auto [x_hat, w_prime] = quantize(device, qz);

  EnrollResult out;
  out.secret.symbols = gather(u, code.info_set);
  out.secret.bits_per_symbol = kernel.field().degree();

  HelperDataBundle& bundle = out.bundle;
  bundle.w.resize(code.n);
  for (int j = 0; j < code.n; ++j) bundle.w[j] = kernel.field().add(c[j], x_hat[j]);
  bundle.w_prime = use_w_prime ? w_prime : AnalogHelperData{};
  bundle.with_helper_data = use_w_prime;
  bundle.secret_hash = secret_digest(out.secret.symbols);
  bundle.quantizer = qz;
  bundle.code = code;
  bundle.channel = legit;
  return out;
}

Likelihoods reproduction_likelihoods(const PufResponse& measurement,
                                     const HelperDataBundle& bundle) {
  const SymbolVector read = requantize(measurement, bundle.quantizer, bundle.w_prime);
  const int q = bundle.code.q;
  Likelihoods llr(q, bundle.code.n);
  for (int j = 0; j < bundle.code.n; ++j)
    llr.col(j) = code_offset_llvec(read[j], bundle.w[j], bundle.channel);
  return llr;
}

ReproduceResult reproduce(const PufResponse& measurement, const HelperDataBundle& bundle,
                          const DecoderConfig& decoder) {
  if (bundle.format_version != HelperDataBundle::kFormatVersion)
    throw std::invalid_argument("unsupported helper data format version");
  if (bundle.w.size() != static_cast<std::size_t>(bundle.code.n))
    throw std::invalid_argument("helper data length does not match the code");
  bundle.code.validate();

  const PolarKernel kernel = bundle.code.kernel();
  const Likelihoods llr = reproduction_likelihoods(measurement, bundle);
  const FixedSymbols fixed = bundle.code.fixed_symbols();

  SymbolVector u;
  if (decoder.kind == DecoderKind::sc) {
    u = sc_decode(kernel, llr, fixed);
  } else {
    SclOptions options;
    options.list_size = decoder.list_size;
    options.prune_delta = decoder.prune_delta;
    if (decoder.hash_selection)
      options.acceptor = [&](std::span<const Symbol> candidate) {
        return secret_digest(gather(candidate, bundle.code.info_set)) == bundle.secret_hash;
      };
    try {
      u = scl_decode(kernel, llr, fixed, options).u;
    } catch (const DecodeFailure&) {
      return {};
    }
  }

  Secret secret{gather(u, bundle.code.info_set), kernel.field().degree()};
  if (secret_digest(secret.symbols) != bundle.secret_hash) return {};
  return {ReproduceStatus::ok, std::move(secret)};
}

void save_bundle(const std::filesystem::path& path, const HelperDataBundle& bundle) {
  write_json_file(path, to_json(bundle));
}

HelperDataBundle load_bundle(const std::filesystem::path& path) {
  return bundle_from_json(read_json_file(path));
}

}  // namespace wtpuf

#include "wtpuf/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "wtpuf/digest.hpp"

namespace wtpuf {

static_assert(std::endian::native == std::endian::little,
              "helper data encoding assumes a little-endian host");

Json to_json(const Quantizer& qz) {
  return Json{{"scheme", to_string(qz.scheme())},
              {"levels", qz.levels()},
              {"boundaries", qz.boundaries()},
              {"centers", qz.centers()}};
}

Quantizer quantizer_from_json(const Json& j) {
  return Quantizer(parse_scheme(j.at("scheme").get<std::string>()),
                   j.at("boundaries").get<std::vector<double>>(),
                   j.at("centers").get<std::vector<double>>());
}

Json to_json(const DmcModel& model) {
  std::vector<double> row_major;
  row_major.reserve(static_cast<std::size_t>(model.q) * model.q);
  for (int y = 0; y < model.q; ++y)
    for (int c = 0; c < model.q; ++c) row_major.push_back(model.matrix(y, c));
  std::vector<double> prior(model.input_prior.data(), model.input_prior.data() + model.q);
  return Json{{"q", model.q},
              {"label", to_string(model.label)},
              {"with_helper_data", model.with_helper_data},
              {"matrix", row_major},
              {"input_prior", prior},
              {"trials", model.trials},
              {"seed", model.seed}};
}

DmcModel channel_from_json(const Json& j) {
  DmcModel model;
  model.q = j.at("q").get<int>();
  model.label = parse_role(j.at("label").get<std::string>());
  model.with_helper_data = j.at("with_helper_data").get<bool>();
  auto row_major = j.at("matrix").get<std::vector<double>>();
  if (row_major.size() != static_cast<std::size_t>(model.q) * model.q)
    throw std::invalid_argument("channel matrix has the wrong number of entries");
  model.matrix.resize(model.q, model.q);
  for (int y = 0; y < model.q; ++y)
    for (int c = 0; c < model.q; ++c) model.matrix(y, c) = row_major[y * model.q + c];
  if (j.contains("input_prior")) {
    auto prior = j.at("input_prior").get<std::vector<double>>();
    model.input_prior = Eigen::Map<Eigen::VectorXd>(prior.data(), static_cast<Eigen::Index>(prior.size()));
  } else {
    model.input_prior = Eigen::VectorXd::Constant(model.q, 1.0 / model.q);
  }
  model.trials = j.value("trials", std::uint64_t{0});
  model.seed = j.value("seed", std::uint64_t{0});
  model.validate();
  return model;
}

Json to_json(const WiretapCode& code) {
  return Json{{"n", code.n},
              {"q", code.q},
              {"alpha", code.alpha},
              {"irreducible_poly", code.irreducible_poly},
              {"F", code.frozen_set},
              {"R", code.random_set},
              {"I", code.info_set},
              {"reliabilities",
               {{"legitimate", code.reliability_legit},
                {"attacker", code.reliability_attacker},
                {"attacker_entropy", code.posterior_entropy_attacker}}},
              {"thresholds", {{"d", code.d}, {"random_entropy", code.random_entropy_threshold}}},
              {"with_helper_data", code.with_helper_data},
              {"trials", code.trials},
              {"seed", code.seed}};
}

WiretapCode code_from_json(const Json& j) {
  WiretapCode code;
  code.n = j.at("n").get<int>();
  code.q = j.at("q").get<int>();
  code.alpha = j.at("alpha").get<Symbol>();
  code.irreducible_poly = j.at("irreducible_poly").get<unsigned>();
  code.frozen_set = j.at("F").get<std::vector<int>>();
  code.random_set = j.at("R").get<std::vector<int>>();
  code.info_set = j.at("I").get<std::vector<int>>();
  const Json& rel = j.at("reliabilities");
  code.reliability_legit = rel.at("legitimate").get<std::vector<double>>();
  code.reliability_attacker = rel.at("attacker").get<std::vector<double>>();
  code.posterior_entropy_attacker = rel.at("attacker_entropy").get<std::vector<double>>();
  code.d = j.at("thresholds").at("d").get<double>();
  code.random_entropy_threshold = j.at("thresholds").at("random_entropy").get<double>();
  code.with_helper_data = j.value("with_helper_data", true);
  code.trials = j.value("trials", std::uint64_t{0});
  code.seed = j.value("seed", std::uint64_t{0});
  code.validate();
  return code;
}

Json to_json(const HelperDataBundle& bundle) {
  std::vector<std::uint8_t> offsets(sizeof(double) * kNodes);
  std::memcpy(offsets.data(), bundle.w_prime.offsets.data(), offsets.size());
  return Json{{"format_version", bundle.format_version},
              {"digest_algorithm", bundle.digest_algorithm},
              {"with_helper_data", bundle.with_helper_data},
              {"w", base64_encode(bundle.w)},
              {"w_prime", base64_encode(offsets)},
              {"secret_hash", base64_encode(bundle.secret_hash)},
              {"quantizer", to_json(bundle.quantizer)},
              {"code", to_json(bundle.code)},
              {"channel", to_json(bundle.channel)}};
}

HelperDataBundle bundle_from_json(const Json& j) {
  HelperDataBundle bundle;
  bundle.format_version = j.at("format_version").get<int>();
  if (bundle.format_version != HelperDataBundle::kFormatVersion)
    throw std::invalid_argument("unsupported helper data format version");
  bundle.digest_algorithm = j.at("digest_algorithm").get<std::string>();
  if (bundle.digest_algorithm != "sha256")
    throw std::invalid_argument("unsupported digest algorithm " + bundle.digest_algorithm);
  bundle.with_helper_data = j.at("with_helper_data").get<bool>();
  bundle.w = base64_decode(j.at("w").get<std::string>());
  auto offsets = base64_decode(j.at("w_prime").get<std::string>());
  if (offsets.size() != sizeof(double) * kNodes)
    throw std::invalid_argument("analog helper data has the wrong size");
  std::memcpy(bundle.w_prime.offsets.data(), offsets.data(), offsets.size());
  auto hash = base64_decode(j.at("secret_hash").get<std::string>());
  if (hash.size() != bundle.secret_hash.size())
    throw std::invalid_argument("secret hash has the wrong size");
  std::copy(hash.begin(), hash.end(), bundle.secret_hash.begin());
  bundle.quantizer = quantizer_from_json(j.at("quantizer"));
  bundle.code = code_from_json(j.at("code"));
  bundle.channel = channel_from_json(j.at("channel"));
  if (bundle.w.size() != static_cast<std::size_t>(bundle.code.n))
    throw std::invalid_argument("helper data length does not match the code");
  for (Symbol s : bundle.w)
    if (s >= bundle.code.q) throw std::invalid_argument("helper data symbol outside the field");
  return bundle;
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::filesystem::filesystem_error("cannot open for writing", tmp,
                                                      std::make_error_code(std::errc::io_error));
    out << j.dump(2) << '\n';
    if (!out) throw std::filesystem::filesystem_error("write failed", tmp,
                                                      std::make_error_code(std::errc::io_error));
  }
  std::filesystem::rename(tmp, path);
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::filesystem::filesystem_error("cannot open for reading", path,
                                                   std::make_error_code(std::errc::no_such_file_or_directory));
  return Json::parse(in);
}

}  // namespace wtpuf

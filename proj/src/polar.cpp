#include "wtpuf/polar.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

namespace wtpuf {

PolarKernel::PolarKernel(GaloisField field, Symbol alpha)
    : field_(std::move(field)), alpha_(alpha) {
  if (alpha == 0 || !field_.contains(alpha))
    throw std::invalid_argument("kernel parameter must be a nonzero field element");
  alpha_mul_.resize(field_.order());
  for (int b = 0; b < field_.order(); ++b)
    alpha_mul_[b] = field_.mul(alpha_, static_cast<Symbol>(b));
}

namespace {

int log2_length(std::size_t n) {
  if (n < 1 || !std::has_single_bit(n))
    throw std::invalid_argument("polar code length must be a power of two");
  return std::countr_zero(n);
}

void normalize_in_place(double* v, int q) {
  double s = 0;
  for (int a = 0; a < q; ++a) s += v[a];
  if (s > 0) {
    double inv = 1.0 / s;
    for (int a = 0; a < q; ++a) v[a] *= inv;
  }
}

}  // namespace

SymbolVector polar_encode(std::span<const Symbol> u, const PolarKernel& kernel) {
  log2_length(u.size());
  for (Symbol s : u)
    if (!kernel.field().contains(s)) throw std::invalid_argument("symbol outside the field");
  SymbolVector c(u.begin(), u.end());
  const std::size_t n = c.size();
  for (std::size_t half = 1; half < n; half <<= 1)
    for (std::size_t start = 0; start < n; start += 2 * half)
      for (std::size_t j = start; j < start + half; ++j) c[j] ^= kernel.times_alpha(c[j + half]);
  return c;
}

// ---------------------------------------------------------------------------

ScPath::ScPath(const PolarKernel& kernel, const Likelihoods& channel)
    : kernel_(&kernel),
      channel_(&channel),
      n_(static_cast<int>(channel.cols())),
      m_(log2_length(static_cast<std::size_t>(channel.cols()))),
      q_(kernel.q()) {
  if (n_ < 2) throw std::invalid_argument("decoder needs a code length of at least 2");
  if (channel.rows() != q_) throw std::invalid_argument("likelihood rows must equal q");
  messages_.resize(q_, n_ - 1);
  partial_.assign(n_ - 1, 0);
  decisions_.assign(n_, 0);
  codeword_.assign(n_, 0);
  scratch_.assign(n_, 0);
}

const double* ScPath::input(int depth) const {
  if (depth == 0) return channel_->data();
  return messages_.data() + static_cast<std::ptrdiff_t>(n_ - 2 * (n_ >> depth)) * q_;
}

double* ScPath::block(int depth) {
  return messages_.data() + static_cast<std::ptrdiff_t>(n_ - 2 * (n_ >> depth)) * q_;
}

void ScPath::check_node(int depth) {
  const int half = n_ >> depth;
  const double* in = input(depth - 1);
  double* out = block(depth);
  for (int j = 0; j < half; ++j) {
    const double* first = in + j * q_;
    const double* second = in + (half + j) * q_;
    double* o = out + j * q_;
    std::fill(o, o + q_, 0.0);
    for (int b = 0; b < q_; ++b) {
      const double w = second[b];
      if (w == 0) continue;
      const Symbol shift = kernel_->times_alpha(static_cast<Symbol>(b));
      for (int a = 0; a < q_; ++a) o[a] += w * first[a ^ shift];
    }
    normalize_in_place(o, q_);
  }
}

void ScPath::variable_node(int depth) {
  const int half = n_ >> depth;
  const double* in = input(depth - 1);
  double* out = block(depth);
  const Symbol* left = partial_.data() + (n_ - 2 * half);
  for (int j = 0; j < half; ++j) {
    const double* first = in + j * q_;
    const double* second = in + (half + j) * q_;
    double* o = out + j * q_;
    for (int b = 0; b < q_; ++b)
      o[b] = first[left[j] ^ kernel_->times_alpha(static_cast<Symbol>(b))] * second[b];
    normalize_in_place(o, q_);
  }
}

std::span<const double> ScPath::leaf(int i) {
  if (i != next_) throw std::logic_error("SC leaves must be visited in order");
  if (i == 0) {
    for (int d = 1; d <= m_; ++d) check_node(d);
  } else {
    const int turn = m_ - std::countr_zero(static_cast<unsigned>(i));
    variable_node(turn);
    for (int d = turn + 1; d <= m_; ++d) check_node(d);
  }
  return {block(m_), static_cast<std::size_t>(q_)};
}

void ScPath::commit(int i, Symbol s) {
  if (i != next_) throw std::logic_error("SC leaves must be committed in order");
  decisions_[i] = s;
  ++next_;
  scratch_[0] = s;
  int len = 1;
  for (int d = m_;; --d) {
    if (d == 0) {
      std::copy_n(scratch_.begin(), n_, codeword_.begin());
      break;
    }
    Symbol* left = partial_.data() + (n_ - 2 * len);
    if (((i >> (m_ - d)) & 1) == 0) {
      std::copy_n(scratch_.begin(), len, left);
      break;
    }
    std::memmove(scratch_.data() + len, scratch_.data(), static_cast<std::size_t>(len));
    for (int j = 0; j < len; ++j) scratch_[j] = left[j] ^ kernel_->times_alpha(scratch_[len + j]);
    len *= 2;
  }
}

// ---------------------------------------------------------------------------

Symbol hard_decision(std::span<const double> posterior) {
  return static_cast<Symbol>(std::max_element(posterior.begin(), posterior.end()) -
                             posterior.begin());
}

namespace {

void check_fixed(std::span<const std::optional<Symbol>> fixed, const Likelihoods& channel,
                 const PolarKernel& kernel) {
  if (fixed.size() != static_cast<std::size_t>(channel.cols()))
    throw std::invalid_argument("fixed-symbol mask length must equal the code length");
  for (const auto& f : fixed)
    if (f && !kernel.field().contains(*f)) throw std::invalid_argument("frozen value outside the field");
}

}  // namespace

SymbolVector sc_decode(const PolarKernel& kernel, const Likelihoods& channel,
                       std::span<const std::optional<Symbol>> fixed) {
  check_fixed(fixed, channel, kernel);
  ScPath path(kernel, channel);
  for (int i = 0; i < path.length(); ++i) {
    auto posterior = path.leaf(i);
    path.commit(i, fixed[i] ? *fixed[i] : hard_decision(posterior));
  }
  return path.decisions();
}

void genie_sc_decode(const PolarKernel& kernel, const Likelihoods& channel,
                     std::span<const Symbol> truth,
                     const std::function<void(int, std::span<const double>, Symbol)>& on_leaf) {
  if (truth.size() != static_cast<std::size_t>(channel.cols()))
    throw std::invalid_argument("genie input length must equal the code length");
  ScPath path(kernel, channel);
  for (int i = 0; i < path.length(); ++i) {
    auto posterior = path.leaf(i);
    on_leaf(i, posterior, hard_decision(posterior));
    path.commit(i, truth[i]);
  }
}

namespace {

struct Candidate {
  double metric;
  int parent;
  Symbol symbol;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.metric != b.metric) return a.metric > b.metric;
  if (a.parent != b.parent) return a.parent < b.parent;
  return a.symbol < b.symbol;
}

double log_prob(double p) {
  return p > 0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

}  // namespace

SclResult scl_decode(const PolarKernel& kernel, const Likelihoods& channel,
                     std::span<const std::optional<Symbol>> fixed, const SclOptions& options) {
  check_fixed(fixed, channel, kernel);
  if (options.list_size < 1) throw std::invalid_argument("list size must be at least 1");
  const int q = kernel.q();
  const auto list_size = static_cast<std::size_t>(options.list_size);

  std::vector<ScPath> paths{ScPath(kernel, channel)};
  std::vector<double> metrics{0.0};
  std::vector<ScPath> next;
  std::vector<double> next_metrics;
  std::vector<Candidate> candidates;
  std::vector<int> children;

  auto prune = [&](std::vector<Candidate>& list) {
    if (!options.prune_delta || list.empty()) return;
    const double floor = list.front().metric - *options.prune_delta;
    std::erase_if(list, [&](const Candidate& c) { return !(c.metric >= floor) || std::isinf(c.metric); });
    if (list.empty()) throw DecodeFailure("all SCL paths were pruned");
  };

  // Rebuilds the list from `chosen`, copying a parent only for its second and
  // later children.
  auto advance = [&](int i, const std::vector<Candidate>& chosen) {
    children.assign(paths.size(), 0);
    next.resize(chosen.size(), paths.front());
    next_metrics.resize(chosen.size());
    std::vector<bool> first(chosen.size());
    for (std::size_t k = 0; k < chosen.size(); ++k) first[k] = children[chosen[k].parent]++ == 0;
    for (std::size_t k = 0; k < chosen.size(); ++k)
      if (!first[k]) next[k] = paths[chosen[k].parent];
    for (std::size_t k = 0; k < chosen.size(); ++k)
      if (first[k]) std::swap(next[k], paths[chosen[k].parent]);
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      next[k].commit(i, chosen[k].symbol);
      next_metrics[k] = chosen[k].metric;
    }
    std::swap(paths, next);
    std::swap(metrics, next_metrics);
  };

  const int n = static_cast<int>(channel.cols());
  for (int i = 0; i < n; ++i) {
    candidates.clear();
    if (fixed[i]) {
      for (std::size_t p = 0; p < paths.size(); ++p) {
        auto posterior = paths[p].leaf(i);
        candidates.push_back({metrics[p] + log_prob(posterior[*fixed[i]]), static_cast<int>(p),
                              *fixed[i]});
      }
      std::sort(candidates.begin(), candidates.end(), better);
    } else {
      for (std::size_t p = 0; p < paths.size(); ++p) {
        auto posterior = paths[p].leaf(i);
        for (int a = 0; a < q; ++a)
          candidates.push_back(
              {metrics[p] + log_prob(posterior[a]), static_cast<int>(p), static_cast<Symbol>(a)});
      }
      const std::size_t keep = std::min(list_size, candidates.size());
      std::partial_sort(candidates.begin(), candidates.begin() + static_cast<long>(keep),
                        candidates.end(), better);
      candidates.resize(keep);
    }
    prune(candidates);
    advance(i, candidates);
  }

  std::vector<std::size_t> order(paths.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return metrics[a] > metrics[b]; });

  SclResult result;
  result.final_list = paths.size();
  std::size_t pick = order.front();
  if (options.acceptor) {
    for (std::size_t k : order) {
      if (options.acceptor(paths[k].decisions())) {
        pick = k;
        result.accepted = true;
        break;
      }
    }
  }
  result.u = paths[pick].decisions();
  result.metric = metrics[pick];
  return result;
}

}  // namespace wtpuf

#include "bfo/probe.hpp"

#include <algorithm>
#include <memory>

namespace bfo {

std::string LabeledFiniteOrder::key() const {
  std::string k = std::to_string(size) + ";" + std::to_string(tracked) + ";";
  for (uint32_t i = 0; i < size; ++i) {
    k += std::to_string(tracked ? labels[i] : 0);
    k += ',';
  }
  k += has_uv ? "uv:" : "-";
  if (has_uv)
    for (uint32_t i = 0; i < size; ++i) k += uv[i] ? 'u' : 'v';
  return k;
}

namespace {

// Streams of distinct addresses, one per constructor. Sum round-robins its
// parts; Prod interleaves block streams over a growing list of index points.
struct Stream {
  virtual ~Stream() = default;
  virtual std::optional<PointAddress> next() = 0;
};

std::unique_ptr<Stream> make_stream(const Term& t);

struct FinStream : Stream {
  uint64_t n, i = 0;
  explicit FinStream(uint64_t n) : n(n) {}
  std::optional<PointAddress> next() override {
    if (i >= n) return std::nullopt;
    return PointAddress::at_nat(i++);
  }
};

struct OmegaStream : Stream {
  uint64_t i = 0;
  std::optional<PointAddress> next() override { return PointAddress::at_nat(i++); }
};

struct OmegaStarStream : Stream {
  uint64_t k = 0;
  std::optional<PointAddress> next() override { return PointAddress::from_end(++k); }
};

struct ZetaStream : Stream {
  long long mag = 0;
  bool neg = false;
  std::optional<PointAddress> next() override {
    // 0, -1, 1, -2, 2, ...
    long long v = neg ? -(mag + 1) : mag;
    if (neg) ++mag;
    neg = !neg;
    return PointAddress::at_int(v);
  }
};

struct EtaStream : Stream {
  long long den = 2, num = 1;  // dyadics in (0,1): 1/2, 1/4, 3/4, 1/8, ...
  std::optional<PointAddress> next() override {
    PointAddress a = PointAddress::at_rat(Rat(num, den));
    num += 2;
    if (num >= den) {
      den *= 2;
      num = 1;
    }
    return a;
  }
};

struct SumStream : Stream {
  std::vector<std::unique_ptr<Stream>> parts;
  size_t cursor = 0;
  explicit SumStream(const Term& t) {
    for (auto& p : t.parts) parts.push_back(make_stream(p));
  }
  std::optional<PointAddress> next() override {
    for (size_t tries = 0; tries < parts.size(); ++tries) {
      size_t at = cursor % parts.size();
      cursor++;
      if (!parts[at]) continue;
      if (auto a = parts[at]->next()) return PointAddress::in_sum((uint32_t)at, *a);
      parts[at].reset();
    }
    return std::nullopt;
  }
};

struct ProdStream : Stream {
  const Term block_term;
  std::unique_ptr<Stream> index_stream;
  std::vector<std::pair<PointAddress, std::unique_ptr<Stream>>> lanes;
  size_t cursor = 0;

  explicit ProdStream(const Term& t)
      : block_term(t.block()), index_stream(make_stream(t.index())) {}

  bool pull_index() {
    if (!index_stream) return false;
    if (auto i = index_stream->next()) {
      lanes.emplace_back(*i, make_stream(block_term));
      return true;
    }
    index_stream.reset();
    return false;
  }

  std::optional<PointAddress> next() override {
    if (lanes.empty() && !pull_index()) return std::nullopt;
    size_t attempts = lanes.size() + 1;
    for (size_t tries = 0; tries < attempts; ++tries) {
      if (cursor >= lanes.size()) {
        pull_index();  // widen before wrapping around
        cursor = 0;
      }
      if (lanes.empty()) return std::nullopt;
      auto& [iaddr, bs] = lanes[cursor];
      cursor++;
      if (!bs) continue;
      if (auto a = bs->next()) return PointAddress::in_prod(iaddr, *a);
      bs.reset();
      attempts = lanes.size() + 1;
    }
    // all current lanes exhausted; try fresh index points
    while (pull_index()) {
      if (auto a = lanes.back().second->next())
        return PointAddress::in_prod(lanes.back().first, *a);
    }
    return std::nullopt;
  }
};

std::unique_ptr<Stream> make_stream(const Term& t) {
  switch (t.kind) {
    case TermKind::Fin: return std::make_unique<FinStream>(t.n);
    case TermKind::Omega: return std::make_unique<OmegaStream>();
    case TermKind::OmegaStar: return std::make_unique<OmegaStarStream>();
    case TermKind::Zeta: return std::make_unique<ZetaStream>();
    case TermKind::Eta: return std::make_unique<EtaStream>();
    case TermKind::Sum: return std::make_unique<SumStream>(t);
    case TermKind::Prod: return std::make_unique<ProdStream>(t);
  }
  return nullptr;
}

}  // namespace

Probe expand_probe(const Term& t, uint32_t budget) {
  Probe out;
  auto s = make_stream(t);
  for (uint32_t i = 0; i < budget; ++i) {
    auto a = s->next();
    if (!a) break;
    out.addresses.push_back(*a);
  }
  std::sort(out.addresses.begin(), out.addresses.end(),
            [&](const PointAddress& a, const PointAddress& b) {
              return compare_points(t, a, b) == Ordering::LT;
            });
  out.order = LabeledFiniteOrder::chain((uint32_t)out.addresses.size());
  return out;
}

}  // namespace bfo

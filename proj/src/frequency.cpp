#include "facet/frequency.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace facet {

namespace {

// Fills `positions` with the host indices of F + g; false when F + g leaves the host.
bool locate(const Shape& host, const Shape& f, const GroupPoint& g, std::vector<std::size_t>& positions) {
  positions.clear();
  for (std::size_t i = 0; i < host.dim(); ++i) {
    if (f.lower()[i] + g[i] < host.lower()[i] || f.upper()[i] + g[i] > host.upper()[i]) return false;
  }
  for (const auto& p : f) {
    const auto idx = host.index_of(p + g);
    if (!idx) return false;
    positions.push_back(*idx);
  }
  return true;
}

void check_pair(const Block& b, const Block& c, const char* what) {
  if (c.depth() > b.depth()) {
    throw std::invalid_argument(std::string(what) + ": pattern depth " + std::to_string(c.depth()) +
                                " exceeds block depth " + std::to_string(b.depth()));
  }
  if (!c.shape().empty() && c.dim() != b.dim()) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

std::size_t count_embeddings(const Shape& f, const Shape& fj) {
  if (f.empty()) return 0;
  if (fj.empty()) return f.size();
  if (f.dim() != fj.dim()) throw std::invalid_argument("count_embeddings: dimension mismatch");
  std::size_t n = 0;
  for (const auto& g : f) n += f.contains_translate(fj, g) ? 1 : 0;
  return n;
}

std::size_t count_occurrences(const Block& b, const Block& c) {
  check_pair(b, c, "count_occurrences");
  if (b.shape().empty()) return 0;
  const Shape& fj = c.shape();
  const std::size_t depth = c.depth();
  std::vector<std::size_t> positions;
  std::size_t n = 0;
  for (const auto& g : b.shape()) {
    if (!locate(b.shape(), fj, g, positions)) continue;
    bool match = true;
    for (std::size_t r = 0; r < depth && match; ++r) {
      for (std::size_t i = 0; i < positions.size(); ++i) {
        if (b.at(positions[i], r) != c.at(i, r)) {
          match = false;
          break;
        }
      }
    }
    n += match ? 1 : 0;
  }
  return n;
}

Rational freq(const Block& b, const Block& c) {
  check_pair(b, c, "freq");
  const std::size_t total = count_embeddings(b.shape(), c.shape());
  if (total == 0) return 0;
  return ratio(count_occurrences(b, c), total);
}

// ---------------------------------------------------------------------------
// PatternTable

PatternTable::PatternTable(const Block& b, const Shape& f, std::size_t depth) : shape_(f), depth_(depth) {
  if (depth > b.depth()) throw std::invalid_argument("PatternTable: depth exceeds block depth");
  if (b.shape().empty()) return;
  if (!f.empty() && f.dim() != b.dim()) throw std::invalid_argument("PatternTable: dimension mismatch");
  std::vector<std::size_t> positions;
  Pattern buffer;
  for (const auto& g : b.shape()) {
    if (!locate(b.shape(), f, g, positions)) continue;
    ++embeddings_;
    buffer.clear();
    for (std::size_t r = 0; r < depth; ++r) {
      for (std::size_t pos : positions) buffer.push_back(b.at(pos, r));
    }
    ++counts_[buffer];
  }
}

PatternTable PatternTable::level(const Block& b, std::size_t k) {
  return PatternTable(b, Shape::folner(k, b.dim()), k);
}

std::size_t PatternTable::count(const Pattern& p) const {
  const auto it = counts_.find(p);
  return it == counts_.end() ? 0 : it->second;
}

Rational PatternTable::freq(const Pattern& p) const {
  if (embeddings_ == 0) return 0;
  return ratio(count(p), embeddings_);
}

// ---------------------------------------------------------------------------
// Typical blocks

Rational typicality_deviation(const Block& c, const CylinderMeasure& target, std::size_t j) {
  if (target.depth() < j) throw std::invalid_argument("typicality_deviation: target shallower than j");
  Rational worst = 0;
  for (std::size_t i = 1; i <= j; ++i) {
    const PatternTable table = PatternTable::level(c, i);
    const auto& mass = target.marginal(i);
    for (const auto& [pattern, count] : table.counts()) {
      worst = std::max<Rational>(worst, abs(table.freq(pattern) - target.value(i, pattern)));
    }
    for (const auto& [pattern, m] : mass) {
      if (table.count(pattern) == 0) worst = std::max(worst, m);
    }
  }
  return worst;
}

TypicalSearch find_typical_block(const CylinderMeasure& target, const Shape& f, std::size_t j, const Rational& eps,
                                 CandidateSource source, std::size_t budget) {
  if (target.depth() < j) throw std::invalid_argument("find_typical_block: target depth below j");
  TypicalSearch out;
  bool have_best = false;
  auto consider = [&](const Block& candidate) {
    ++out.candidates_tried;
    const Rational dev = typicality_deviation(candidate, target, j);
    if (dev < eps) {
      out.block = candidate;
      out.worst_deviation = dev;
      return true;
    }
    if (!have_best || dev < out.worst_deviation) {
      out.worst_deviation = dev;
      have_best = true;
    }
    return false;
  };

  if (source.corpus != nullptr) {
    for (const auto& b : source.corpus->blocks()) {
      if (b.depth() < j) continue;
      for (const auto& g : b.shape()) {
        if (out.candidates_tried >= budget) return out;
        auto candidate = subblock_at(b, f, g, j);
        if (candidate && consider(*candidate)) return out;
      }
    }
  }
  if (source.sampler) {
    while (out.candidates_tried < budget) {
      Block sample = source.sampler->next(f);
      if (sample.depth() < j) throw std::invalid_argument("find_typical_block: sampler stack shallower than j");
      if (consider(restrict(sample, f, j))) return out;
    }
  }
  return out;
}

}  // namespace facet

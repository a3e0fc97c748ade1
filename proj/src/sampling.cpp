#include <stdexcept>
#include <string>

#include "facet/symbolic.hpp"

namespace facet {

namespace {

// Cumulative thresholds floor(cum_s * 2^64); a draw u picks the first s with u < threshold_s.
std::vector<Threshold> thresholds_for(const std::vector<Rational>& probs, std::uint32_t alphabet, const std::string& what) {
  if (probs.size() != alphabet) {
    throw std::invalid_argument(what + ": expected " + std::to_string(alphabet) + " probabilities, got " +
                                std::to_string(probs.size()));
  }
  Rational sum = 0;
  for (const auto& p : probs) {
    if (p < 0) throw std::invalid_argument(what + ": negative probability");
    sum += p;
  }
  if (sum != 1) throw std::invalid_argument(what + ": probabilities sum to " + to_string(sum) + ", not 1");
  const mpz_class two64 = mpz_class(1) << 64;
  std::vector<Threshold> out;
  Rational cum = 0;
  for (const auto& p : probs) {
    cum += p;
    mpz_class t = (cum.get_num() * two64) / cum.get_den();
    const mpz_class hi = t >> 64;
    const mpz_class lo = t - (hi << 64);
    Threshold v = static_cast<Threshold>(hi.get_ui()) << 64;
    const mpz_class lo_hi = lo >> 32;
    const mpz_class lo_lo = lo - (lo_hi << 32);
    v |= static_cast<Threshold>(lo_hi.get_ui()) << 32;
    v |= static_cast<Threshold>(lo_lo.get_ui());
    out.push_back(v);
  }
  return out;
}

Symbol draw(std::mt19937_64& rng, const std::vector<Threshold>& thresholds) {
  const Threshold u = rng();
  for (std::size_t s = 0; s < thresholds.size(); ++s) {
    if (u < thresholds[s]) return static_cast<Symbol>(s);
  }
  return static_cast<Symbol>(thresholds.size() - 1);
}

}  // namespace

BernoulliSampler::BernoulliSampler(AlphabetStack stack, const RowProbabilities& probabilities, std::uint64_t seed)
    : stack_(std::move(stack)), rng_(seed) {
  if (probabilities.size() != stack_.depth()) {
    throw std::invalid_argument("BernoulliSampler: one probability vector per row required");
  }
  for (std::size_t r = 0; r < stack_.depth(); ++r) {
    thresholds_.push_back(thresholds_for(probabilities[r], stack_.size(r), "BernoulliSampler row " + std::to_string(r)));
  }
}

Block BernoulliSampler::next(const Shape& window) {
  Block b = Block::filled(window, stack_.depth());
  for (std::size_t r = 0; r < stack_.depth(); ++r) {
    for (std::size_t p = 0; p < window.size(); ++p) b.at(p, r) = draw(rng_, thresholds_[r]);
  }
  return b;
}

Block sample_bernoulli(const Shape& window, const AlphabetStack& stack, const RowProbabilities& probabilities,
                       std::uint64_t seed) {
  BernoulliSampler sampler(stack, probabilities, seed);
  return sampler.next(window);
}

Block sample_markov(const Shape& window, const AlphabetStack& stack, const std::vector<MarkovRow>& rows,
                    std::uint64_t seed) {
  if (rows.size() != stack.depth()) throw std::invalid_argument("sample_markov: one chain per row required");
  std::mt19937_64 rng(seed);
  Block b = Block::filled(window, stack.depth());
  if (window.empty()) return b;
  const std::size_t last = window.dim() - 1;
  for (std::size_t r = 0; r < stack.depth(); ++r) {
    const std::string what = "sample_markov row " + std::to_string(r);
    const auto initial = thresholds_for(rows[r].initial, stack.size(r), what + " initial");
    if (rows[r].transition.size() != stack.size(r)) throw std::invalid_argument(what + ": transition matrix size");
    std::vector<std::vector<Threshold>> transition;
    for (const auto& row : rows[r].transition) transition.push_back(thresholds_for(row, stack.size(r), what + " transition"));
    for (std::size_t p = 0; p < window.size(); ++p) {
      GroupPoint prev = window[p];
      --prev[last];
      // Points are in lexicographic order, so the predecessor, when present, is already drawn.
      const auto pi = window.index_of(prev);
      b.at(p, r) = pi ? draw(rng, transition[b.at(*pi, r)]) : draw(rng, initial);
    }
  }
  return b;
}

}  // namespace facet

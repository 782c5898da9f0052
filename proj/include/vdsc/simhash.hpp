#pragma once

// SimHash state compression and visit counting.
//
// An observation vector is projected through a fixed kappa x D Gaussian
// matrix and reduced to its sign pattern: bit j is set iff row j's dot
// product is >= 0 (sgn(0) := +1). Nearby vectors agree on most bits; the
// expected fraction of differing bits between codes of two vectors equals
// angle/pi. Codes index a visit-count table that turns novelty into a
// bonus of 1/sqrt(n).

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vdsc/rng.hpp"

namespace vdsc {

// A kappa-bit code packed into 64-bit words, little-endian bit order
// (bit j lives in words[j / 64]).
struct HashCode {
  std::vector<std::uint64_t> words;

  friend bool operator==(const HashCode&, const HashCode&) = default;

  int popcount_xor(const HashCode& other) const {
    int n = 0;
    for (std::size_t w = 0; w < words.size(); ++w)
      n += __builtin_popcountll(words[w] ^ other.words[w]);
    return n;
  }

  // Fixed-width lowercase hex, most significant word first.
  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(words.size() * 16);
    for (auto it = words.rbegin(); it != words.rend(); ++it)
      for (int shift = 60; shift >= 0; shift -= 4)
        out.push_back(digits[(*it >> shift) & 0xF]);
    return out;
  }
};

class SimHashEncoder {
 public:
  // Projection entries drawn i.i.d. from N(0,1); identical (seed, kappa, D)
  // always yields an identical matrix.
  SimHashEncoder(int bits, int input_dim, std::uint64_t seed)
      : bits_(bits), input_dim_(input_dim) {
    if (bits < 1) throw std::invalid_argument("SimHash bits must be >= 1");
    if (input_dim < 1) throw std::invalid_argument("SimHash input_dim must be >= 1");
    Rng rng(seed);
    projection_.resize(static_cast<std::size_t>(bits) * input_dim);
    for (auto& a : projection_) a = rng.gaussian();
  }

  // Explicit projection matrix (row-major, bits x input_dim). Used by tests
  // that need a known geometry.
  SimHashEncoder(int bits, int input_dim, std::vector<double> projection)
      : bits_(bits), input_dim_(input_dim), projection_(std::move(projection)) {
    if (projection_.size() != static_cast<std::size_t>(bits) * input_dim)
      throw std::invalid_argument("projection matrix has wrong shape");
  }

  HashCode encode(std::span<const double> observation) const {
    if (observation.size() != static_cast<std::size_t>(input_dim_))
      throw std::invalid_argument(
          "SimHash dimension mismatch: expected " + std::to_string(input_dim_) +
          " components, got " + std::to_string(observation.size()));
    HashCode code;
    code.words.assign((static_cast<std::size_t>(bits_) + 63) / 64, 0);
    for (int j = 0; j < bits_; ++j) {
      const double* row = projection_.data() + static_cast<std::size_t>(j) * input_dim_;
      double dot = 0.0;
      for (int d = 0; d < input_dim_; ++d) dot += row[d] * observation[static_cast<std::size_t>(d)];
      if (dot >= 0.0)
        code.words[static_cast<std::size_t>(j) / 64] |= 1ull << (j % 64);
    }
    return code;
  }

  int bits() const { return bits_; }
  int input_dim() const { return input_dim_; }

 private:
  int bits_;
  int input_dim_;
  std::vector<double> projection_;  // row-major kappa x D
};

// Numeric order: most significant word first, so map iteration matches the
// sort order of the hex dump.
struct HashCodeOrder {
  bool operator()(const HashCode& a, const HashCode& b) const {
    if (a.words.size() != b.words.size()) return a.words.size() < b.words.size();
    for (std::size_t i = a.words.size(); i-- > 0;)
      if (a.words[i] != b.words[i]) return a.words[i] < b.words[i];
    return false;
  }
};

class HashCountTable {
 public:
  // Increment the code's count, then return 1/sqrt(n). First visit pays 1.
  double record_and_bonus(const HashCode& code) {
    const std::uint64_t n = ++counts_[code];
    ++total_inserts_;
    return 1.0 / std::sqrt(static_cast<double>(n));
  }

  std::uint64_t count(const HashCode& code) const {
    auto it = counts_.find(code);
    return it == counts_.end() ? 0 : it->second;
  }

  std::size_t distinct_codes() const { return counts_.size(); }
  std::uint64_t total_inserts() const { return total_inserts_; }

  // One line per code, "<hex-code> <count>", sorted by code.
  std::string dump() const {
    std::string out;
    for (const auto& [code, n] : counts_) {
      out += code.hex();
      out += ' ';
      out += std::to_string(n);
      out += '\n';
    }
    return out;
  }

 private:
  std::map<HashCode, std::uint64_t, HashCodeOrder> counts_;
  std::uint64_t total_inserts_ = 0;
};

}  // namespace vdsc

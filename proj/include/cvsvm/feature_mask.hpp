#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvsvm/errors.hpp"

namespace cvsvm {

// Binary selection vector over p features. bits[j] == 1 means feature j may carry a
// nonzero weight.
struct FeatureMask {
  std::vector<std::uint8_t> bits;

  FeatureMask() = default;
  explicit FeatureMask(std::size_t p) : bits(p, 0) {}

  static FeatureMask zeros(std::size_t p) { return FeatureMask(p); }

  static FeatureMask ones(std::size_t p) {
    FeatureMask m(p);
    std::fill(m.bits.begin(), m.bits.end(), std::uint8_t{1});
    return m;
  }

  static FeatureMask from_support(std::size_t p, std::span<const int> support) {
    FeatureMask m(p);
    for (int j : support) {
      if (j < 0 || static_cast<std::size_t>(j) >= p)
        throw invalid_parameter_error("feature index out of range");
      m.bits[static_cast<std::size_t>(j)] = 1;
    }
    return m;
  }

  // Parses "0101..."; anything but '0'/'1' is rejected.
  static FeatureMask from_string(std::string_view s) {
    FeatureMask m(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] == '1')
        m.bits[j] = 1;
      else if (s[j] != '0')
        throw invalid_parameter_error("mask string must contain only 0/1");
    }
    return m;
  }

  std::size_t size() const { return bits.size(); }

  bool test(std::size_t j) const { return bits[j] != 0; }

  void set(std::size_t j, bool value) { bits[j] = value ? 1 : 0; }

  int cardinality() const {
    int c = 0;
    for (auto b : bits) c += b;
    return c;
  }

  // Strictly increasing list of selected indices.
  std::vector<int> support() const {
    std::vector<int> s;
    s.reserve(bits.size());
    for (std::size_t j = 0; j < bits.size(); ++j)
      if (bits[j]) s.push_back(static_cast<int>(j));
    return s;
  }

  std::string to_string() const {
    std::string s(bits.size(), '0');
    for (std::size_t j = 0; j < bits.size(); ++j)
      if (bits[j]) s[j] = '1';
    return s;
  }

  bool operator==(const FeatureMask&) const = default;
};

inline bool mask_lex_less(const FeatureMask& a, const FeatureMask& b) {
  return std::lexicographical_compare(a.bits.begin(), a.bits.end(), b.bits.begin(),
                                      b.bits.end());
}

}  // namespace cvsvm

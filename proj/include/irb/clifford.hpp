// Copyright 2026 The irb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Stabilizer-tableau Clifford arithmetic. A CliffordElement stores the images
// U X_q U^dagger and U Z_q U^dagger of the Pauli generators as signed Pauli
// strings; global phase is not represented, so elements are identified by
// their conjugation action.

#pragma once

#include <bit>
#include <boost/container/small_vector.hpp>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "irb/error.hpp"
#include "irb/pauli.hpp"

namespace irb {

constexpr std::size_t words_for_bits(std::size_t bits) { return (bits + 63) / 64; }

namespace detail {

inline bool get_bit(const std::uint64_t* words, std::size_t k) { return ((words[k >> 6] >> (k & 63)) & 1U) != 0; }

inline void set_bit(std::uint64_t* words, std::size_t k, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (k & 63);
  if (value) {
    words[k >> 6] |= mask;
  } else {
    words[k >> 6] &= ~mask;
  }
}

/// Power of i (mod 4) produced by the Pauli product lhs * rhs on bit-packed
/// x/z words, where x=z=1 encodes Y.
inline int product_phase(const std::uint64_t* x1, const std::uint64_t* z1, const std::uint64_t* x2,
                         const std::uint64_t* z2, std::size_t words) {
  int plus = 0;
  int minus = 0;
  for (std::size_t w = 0; w < words; ++w) {
    const std::uint64_t px = x1[w] & ~z1[w], py = x1[w] & z1[w], pz = ~x1[w] & z1[w];
    const std::uint64_t qx = x2[w] & ~z2[w], qy = x2[w] & z2[w], qz = ~x2[w] & z2[w];
    plus += std::popcount((px & qy) | (py & qz) | (pz & qx));
    minus += std::popcount((py & qx) | (pz & qy) | (px & qz));
  }
  return ((plus - minus) % 4 + 4) % 4;
}

/// Symplectic inner product of two packed Pauli vectors.
inline bool symplectic_product(const std::uint64_t* x1, const std::uint64_t* z1, const std::uint64_t* x2,
                               const std::uint64_t* z2, std::size_t words) {
  int parity = 0;
  for (std::size_t w = 0; w < words; ++w) parity ^= std::popcount((x1[w] & z2[w]) ^ (z1[w] & x2[w])) & 1;
  return parity != 0;
}

inline std::string bits_to_hex(const std::uint64_t* words, std::size_t bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t digits = (bits + 3) / 4;
  std::string out(digits, '0');
  for (std::size_t k = 0; k < digits; ++k) {
    int nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t bit = 4 * k + b;
      if (bit < bits && get_bit(words, bit)) nibble |= 1 << b;
    }
    out[digits - 1 - k] = kDigits[nibble];
  }
  return out;
}

inline void hex_to_bits(std::string_view hex, std::uint64_t* words, std::size_t bits) {
  if (hex.size() != (bits + 3) / 4) {
    throw Error(ErrorKind::kParseError, "hex field '" + std::string(hex) + "' has the wrong width");
  }
  for (std::size_t k = 0; k < hex.size(); ++k) {
    const char c = hex[hex.size() - 1 - k];
    int nibble;
    if (c >= '0' && c <= '9') {
      nibble = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      nibble = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      nibble = c - 'A' + 10;
    } else {
      throw Error(ErrorKind::kParseError, "invalid hex digit in '" + std::string(hex) + "'");
    }
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t bit = 4 * k + b;
      const bool value = ((nibble >> b) & 1) != 0;
      if (bit >= bits) {
        if (value) throw Error(ErrorKind::kParseError, "hex field '" + std::string(hex) + "' overflows");
        continue;
      }
      set_bit(words, bit, value);
    }
  }
}

}  // namespace detail

/// Signed Hermitian Pauli string (-1)^neg * sigma_0 (x) ... (x) sigma_{n-1}.
class PauliString {
 public:
  explicit PauliString(std::size_t num_qubits)
      : num_qubits_(num_qubits), words_(words_for_bits(num_qubits)), bits_(2 * words_, 0) {}

  /// Parses "+XIZ", "-Y" or "XZ".
  static PauliString from_label(std::string_view label) {
    bool negative = false;
    if (!label.empty() && (label.front() == '+' || label.front() == '-')) {
      negative = label.front() == '-';
      label.remove_prefix(1);
    }
    PauliString p(label.size());
    for (std::size_t q = 0; q < label.size(); ++q) {
      switch (label[q]) {
        case 'I': break;
        case 'X': p.set(q, true, false); break;
        case 'Y': p.set(q, true, true); break;
        case 'Z': p.set(q, false, true); break;
        default: throw Error(ErrorKind::kParseError, "invalid Pauli label '" + std::string(label) + "'");
      }
    }
    p.negative_ = negative;
    return p;
  }

  static PauliString from_basis_index(int num_qubits, std::size_t index) {
    PauliString p(static_cast<std::size_t>(num_qubits));
    for (int q = 0; q < num_qubits; ++q) {
      const int code = pauli_code(num_qubits, index, q);
      p.set(static_cast<std::size_t>(q), code == 1 || code == 2, code == 2 || code == 3);
    }
    return p;
  }

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t words() const { return words_; }
  bool negative() const { return negative_; }
  void set_negative(bool negative) { negative_ = negative; }

  bool x(std::size_t q) const { return detail::get_bit(xs(), q); }
  bool z(std::size_t q) const { return detail::get_bit(zs(), q); }
  void set(std::size_t q, bool x, bool z) {
    detail::set_bit(xs(), q, x);
    detail::set_bit(zs(), q, z);
  }

  const std::uint64_t* xs() const { return bits_.data(); }
  const std::uint64_t* zs() const { return bits_.data() + words_; }
  std::uint64_t* xs() { return bits_.data(); }
  std::uint64_t* zs() { return bits_.data() + words_; }

  bool is_identity() const {
    for (auto w : bits_) {
      if (w != 0) return false;
    }
    return true;
  }

  /// Index in the lexicographic (I, X, Y, Z) basis; ignores the sign.
  std::size_t basis_index() const {
    std::size_t index = 0;
    for (std::size_t q = 0; q < num_qubits_; ++q) {
      const bool bx = x(q), bz = z(q);
      index = (index << 2) | static_cast<std::size_t>(bx ? (bz ? 2 : 1) : (bz ? 3 : 0));
    }
    return index;
  }

  std::string str() const {
    std::string out(1, negative_ ? '-' : '+');
    for (std::size_t q = 0; q < num_qubits_; ++q) {
      const bool bx = x(q), bz = z(q);
      out.push_back(bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I'));
    }
    return out;
  }

  /// this <- this * rhs for unsigned rhs bits. Returns the picked-up power of i.
  int multiply_right(const std::uint64_t* rx, const std::uint64_t* rz) {
    const int log_i = detail::product_phase(xs(), zs(), rx, rz, words_);
    for (std::size_t w = 0; w < words_; ++w) {
      xs()[w] ^= rx[w];
      zs()[w] ^= rz[w];
    }
    return log_i;
  }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.num_qubits_ == b.num_qubits_ && a.negative_ == b.negative_ && a.bits_ == b.bits_;
  }

 private:
  std::size_t num_qubits_;
  std::size_t words_;
  boost::container::small_vector<std::uint64_t, 4> bits_;
  bool negative_ = false;
};

/// n-qubit Clifford modulo global phase. Row r < n holds the image of X_r,
/// row n + r the image of Z_r.
class CliffordElement {
 public:
  explicit CliffordElement(std::size_t num_qubits)
      : num_qubits_(num_qubits),
        words_(words_for_bits(num_qubits)),
        data_(2 * num_qubits * 2 * words_ + words_for_bits(2 * num_qubits), 0) {
    if (num_qubits == 0) throw Error(ErrorKind::kUnsupportedDimension, "Clifford needs at least one qubit");
    for (std::size_t q = 0; q < num_qubits_; ++q) {
      detail::set_bit(row_x(q), q, true);
      detail::set_bit(row_z(num_qubits_ + q), q, true);
    }
  }

  static CliffordElement identity(std::size_t num_qubits) { return CliffordElement(num_qubits); }

  /// Builds an element from generator images; rejects non-symplectic input.
  static CliffordElement from_images(const std::vector<PauliString>& x_images,
                                     const std::vector<PauliString>& z_images) {
    const std::size_t n = x_images.size();
    if (n == 0 || z_images.size() != n) throw Error(ErrorKind::kDimensionMismatch, "need n X and n Z images");
    CliffordElement c(n);
    for (std::size_t q = 0; q < n; ++q) {
      c.set_row(q, x_images[q]);
      c.set_row(n + q, z_images[q]);
    }
    if (!c.is_symplectic()) throw Error(ErrorKind::kInvalidConfig, "generator images do not form a Clifford");
    return c;
  }

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t num_rows() const { return 2 * num_qubits_; }
  std::size_t words() const { return words_; }

  const std::uint64_t* row_x(std::size_t r) const { return data_.data() + r * 2 * words_; }
  const std::uint64_t* row_z(std::size_t r) const { return data_.data() + r * 2 * words_ + words_; }
  std::uint64_t* row_x(std::size_t r) { return data_.data() + r * 2 * words_; }
  std::uint64_t* row_z(std::size_t r) { return data_.data() + r * 2 * words_ + words_; }
  bool row_sign(std::size_t r) const { return detail::get_bit(sign_words(), r); }
  void set_row_sign(std::size_t r, bool negative) { detail::set_bit(sign_words(), r, negative); }

  PauliString row(std::size_t r) const {
    PauliString p(num_qubits_);
    for (std::size_t w = 0; w < words_; ++w) {
      p.xs()[w] = row_x(r)[w];
      p.zs()[w] = row_z(r)[w];
    }
    p.set_negative(row_sign(r));
    return p;
  }

  void set_row(std::size_t r, const PauliString& p) {
    if (p.num_qubits() != num_qubits_) throw Error(ErrorKind::kDimensionMismatch, "row width mismatch");
    for (std::size_t w = 0; w < words_; ++w) {
      row_x(r)[w] = p.xs()[w];
      row_z(r)[w] = p.zs()[w];
    }
    set_row_sign(r, p.negative());
  }

  PauliString image_x(std::size_t q) const { return row(q); }
  PauliString image_z(std::size_t q) const { return row(num_qubits_ + q); }

  /// Conjugation U P U^dagger of a signed Pauli string.
  PauliString apply(const PauliString& p) const {
    if (p.num_qubits() != num_qubits_) throw Error(ErrorKind::kDimensionMismatch, "Pauli width mismatch");
    PauliString out(num_qubits_);
    out.set_negative(apply_unsigned(p.xs(), p.zs(), out.xs(), out.zs()) != p.negative());
    return out;
  }

  /// Writes the image of the unsigned Pauli (px, pz) to (ox, oz), which must be
  /// zeroed. Returns true when the image carries a minus sign.
  bool apply_unsigned(const std::uint64_t* px, const std::uint64_t* pz, std::uint64_t* ox, std::uint64_t* oz) const {
    int log_i = 0;
    for (std::size_t q = 0; q < num_qubits_; ++q) {
      const bool bx = detail::get_bit(px, q);
      const bool bz = detail::get_bit(pz, q);
      if (!bx && !bz) continue;
      // Y = i X Z.
      if (bx && bz) log_i += 1;
      if (bx) log_i += multiply_into(ox, oz, q);
      if (bz) log_i += multiply_into(ox, oz, num_qubits_ + q);
    }
    log_i &= 3;
    assert((log_i & 1) == 0 && "image of a Hermitian Pauli must be Hermitian");
    return log_i == 2;
  }

  /// Rows satisfy the canonical (anti)commutation relations.
  bool is_symplectic() const {
    for (std::size_t a = 0; a < num_rows(); ++a) {
      for (std::size_t b = a; b < num_rows(); ++b) {
        const bool expected = (b == a + num_qubits_) && a < num_qubits_;
        if (detail::symplectic_product(row_x(a), row_z(a), row_x(b), row_z(b), words_) != expected) return false;
      }
    }
    return true;
  }

  bool is_identity() const { return *this == identity(num_qubits_); }

  /// "n:row.row...:signs" where each row is the hex of its 2n bits (bit q is
  /// x_q, bit n+q is z_q) and the sign field has bit r set for a negative row r.
  std::string to_text() const {
    std::string out = std::to_string(num_qubits_) + ":";
    std::vector<std::uint64_t> packed(words_for_bits(2 * num_qubits_));
    for (std::size_t r = 0; r < num_rows(); ++r) {
      std::fill(packed.begin(), packed.end(), 0);
      for (std::size_t q = 0; q < num_qubits_; ++q) {
        detail::set_bit(packed.data(), q, detail::get_bit(row_x(r), q));
        detail::set_bit(packed.data(), num_qubits_ + q, detail::get_bit(row_z(r), q));
      }
      if (r > 0) out.push_back('.');
      out += detail::bits_to_hex(packed.data(), 2 * num_qubits_);
    }
    out.push_back(':');
    out += detail::bits_to_hex(sign_words(), 2 * num_qubits_);
    return out;
  }

  static CliffordElement from_text(std::string_view text) {
    const auto first = text.find(':');
    const auto last = text.rfind(':');
    if (first == std::string_view::npos || first == last) {
      throw Error(ErrorKind::kParseError, "Clifford text must look like n:rows:signs");
    }
    std::size_t n = 0;
    try {
      n = std::stoul(std::string(text.substr(0, first)));
    } catch (const std::exception&) {
      throw Error(ErrorKind::kParseError, "invalid qubit count in '" + std::string(text) + "'");
    }
    if (n == 0 || n > 4096) throw Error(ErrorKind::kParseError, "qubit count out of range");
    CliffordElement c(n);
    std::vector<std::uint64_t> packed(words_for_bits(2 * n));
    std::string_view rows = text.substr(first + 1, last - first - 1);
    for (std::size_t r = 0; r < 2 * n; ++r) {
      const auto dot = rows.find('.');
      const std::string_view field = rows.substr(0, dot);
      if ((dot == std::string_view::npos) != (r + 1 == 2 * n)) {
        throw Error(ErrorKind::kParseError, "expected " + std::to_string(2 * n) + " tableau rows");
      }
      std::fill(packed.begin(), packed.end(), 0);
      detail::hex_to_bits(field, packed.data(), 2 * n);
      for (std::size_t q = 0; q < n; ++q) {
        detail::set_bit(c.row_x(r), q, detail::get_bit(packed.data(), q));
        detail::set_bit(c.row_z(r), q, detail::get_bit(packed.data(), n + q));
      }
      if (dot != std::string_view::npos) rows.remove_prefix(dot + 1);
    }
    detail::hex_to_bits(text.substr(last + 1), c.sign_words(), 2 * n);
    if (!c.is_symplectic()) throw Error(ErrorKind::kParseError, "tableau in '" + std::string(text) + "' is not symplectic");
    return c;
  }

  /// One signed Pauli image per line: "X0 -> +XZ".
  std::string describe() const {
    std::string out;
    for (std::size_t r = 0; r < num_rows(); ++r) {
      out += (r < num_qubits_ ? "X" : "Z") + std::to_string(r % num_qubits_) + " -> " + row(r).str() + "\n";
    }
    return out;
  }

  std::size_t hash() const {
    std::size_t h = std::hash<std::size_t>{}(num_qubits_);
    for (auto w : data_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  friend bool operator==(const CliffordElement& a, const CliffordElement& b) {
    return a.num_qubits_ == b.num_qubits_ && a.data_ == b.data_;
  }

 private:
  const std::uint64_t* sign_words() const { return data_.data() + 2 * num_qubits_ * 2 * words_; }
  std::uint64_t* sign_words() { return data_.data() + 2 * num_qubits_ * 2 * words_; }

  int multiply_into(std::uint64_t* ox, std::uint64_t* oz, std::size_t r) const {
    const int log_i = detail::product_phase(ox, oz, row_x(r), row_z(r), words_);
    for (std::size_t w = 0; w < words_; ++w) {
      ox[w] ^= row_x(r)[w];
      oz[w] ^= row_z(r)[w];
    }
    return log_i + (row_sign(r) ? 2 : 0);
  }

  std::size_t num_qubits_;
  std::size_t words_;
  // Rows then sign words. Inline for n <= 3.
  boost::container::small_vector<std::uint64_t, 16> data_;
};

/// a after b: U = U_a U_b.
inline CliffordElement compose(const CliffordElement& a, const CliffordElement& b) {
  if (a.num_qubits() != b.num_qubits()) throw Error(ErrorKind::kDimensionMismatch, "compose: qubit counts differ");
  CliffordElement out(a.num_qubits());
  for (std::size_t r = 0; r < out.num_rows(); ++r) {
    std::fill(out.row_x(r), out.row_x(r) + out.words(), 0);
    std::fill(out.row_z(r), out.row_z(r) + out.words(), 0);
    const bool negative = a.apply_unsigned(b.row_x(r), b.row_z(r), out.row_x(r), out.row_z(r));
    out.set_row_sign(r, negative != b.row_sign(r));
  }
  return out;
}

/// Tableau inverse: the bit part is the symplectic transpose, the signs are
/// read back by pushing each unsigned candidate row through the element.
inline CliffordElement inverse(const CliffordElement& a) {
  const std::size_t n = a.num_qubits();
  CliffordElement inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      detail::set_bit(inv.row_x(i), j, detail::get_bit(a.row_z(n + j), i));
      detail::set_bit(inv.row_z(i), j, detail::get_bit(a.row_z(j), i));
      detail::set_bit(inv.row_x(n + i), j, detail::get_bit(a.row_x(n + j), i));
      detail::set_bit(inv.row_z(n + i), j, detail::get_bit(a.row_x(j), i));
    }
  }
  PauliString scratch(n);
  for (std::size_t r = 0; r < 2 * n; ++r) {
    std::fill(scratch.xs(), scratch.xs() + scratch.words(), 0);
    std::fill(scratch.zs(), scratch.zs() + scratch.words(), 0);
    inv.set_row_sign(r, a.apply_unsigned(inv.row_x(r), inv.row_z(r), scratch.xs(), scratch.zs()));
  }
  return inv;
}

namespace gates {

inline CliffordElement hadamard(std::size_t n, std::size_t q) {
  CliffordElement c(n);
  PauliString x(n), z(n);
  x.set(q, false, true);
  z.set(q, true, false);
  c.set_row(q, x);
  c.set_row(n + q, z);
  return c;
}

/// S = diag(1, i).
inline CliffordElement phase(std::size_t n, std::size_t q) {
  CliffordElement c(n);
  PauliString x(n);
  x.set(q, true, true);
  c.set_row(q, x);
  return c;
}

inline CliffordElement cnot(std::size_t n, std::size_t control, std::size_t target) {
  if (control == target) throw Error(ErrorKind::kOutOfRange, "CNOT control equals target");
  CliffordElement c(n);
  PauliString xc(n), zt(n);
  xc.set(control, true, false);
  xc.set(target, true, false);
  zt.set(control, false, true);
  zt.set(target, false, true);
  c.set_row(control, xc);
  c.set_row(n + target, zt);
  return c;
}

inline CliffordElement cz(std::size_t n, std::size_t a, std::size_t b) {
  if (a == b) throw Error(ErrorKind::kOutOfRange, "CZ qubits must differ");
  CliffordElement c(n);
  PauliString xa(n), xb(n);
  xa.set(a, true, false);
  xa.set(b, false, true);
  xb.set(a, false, true);
  xb.set(b, true, false);
  c.set_row(a, xa);
  c.set_row(b, xb);
  return c;
}

enum class Axis { kX, kY, kZ };

/// exp(-i k (pi/4) sigma_axis), i.e. a rotation by k quarter turns (k mod 4).
inline CliffordElement rotation(std::size_t n, std::size_t q, Axis axis, int quarter_turns) {
  const int k = ((quarter_turns % 4) + 4) % 4;
  CliffordElement c(n);
  auto pauli = [&](char label, bool negative) {
    PauliString p(n);
    p.set(q, label == 'X' || label == 'Y', label == 'Y' || label == 'Z');
    p.set_negative(negative);
    return p;
  };
  // Images of (X, Z) for k = 0, 1, 2, 3.
  struct Image {
    char x_label;
    bool x_negative;
    char z_label;
    bool z_negative;
  };
  static constexpr Image kX[4] = {{'X', false, 'Z', false}, {'X', false, 'Y', true}, {'X', false, 'Z', true},
                                  {'X', false, 'Y', false}};
  static constexpr Image kY[4] = {{'X', false, 'Z', false}, {'Z', true, 'X', false}, {'X', true, 'Z', true},
                                  {'Z', false, 'X', true}};
  static constexpr Image kZ[4] = {{'X', false, 'Z', false}, {'Y', false, 'Z', false}, {'X', true, 'Z', false},
                                  {'Y', true, 'Z', false}};
  const Image& image = axis == Axis::kX ? kX[k] : axis == Axis::kY ? kY[k] : kZ[k];
  c.set_row(q, pauli(image.x_label, image.x_negative));
  c.set_row(n + q, pauli(image.z_label, image.z_negative));
  return c;
}

inline CliffordElement pauli_x(std::size_t n, std::size_t q) { return rotation(n, q, Axis::kX, 2); }
inline CliffordElement pauli_y(std::size_t n, std::size_t q) { return rotation(n, q, Axis::kY, 2); }
inline CliffordElement pauli_z(std::size_t n, std::size_t q) { return rotation(n, q, Axis::kZ, 2); }

}  // namespace gates

/// Signed permutation form of a Clifford's Pauli transfer matrix: column j
/// maps to row target[j] with entry sign[j].
struct PauliPermutation {
  std::vector<std::uint32_t> target;
  std::vector<double> sign;

  void apply(const RealVector& in, RealVector& out) const {
    for (std::size_t j = 0; j < target.size(); ++j) {
      out[static_cast<Eigen::Index>(target[j])] = sign[j] * in[static_cast<Eigen::Index>(j)];
    }
  }
};

inline PauliPermutation pauli_permutation(const CliffordElement& c) {
  if (c.num_qubits() > static_cast<std::size_t>(kMaxDenseQubits)) {
    throw Error(ErrorKind::kUnsupportedDimension, "dense channel form limited to " + std::to_string(kMaxDenseQubits) +
                                                      " qubits");
  }
  const int n = static_cast<int>(c.num_qubits());
  const std::size_t size = pauli_basis_size(n);
  PauliPermutation perm{std::vector<std::uint32_t>(size), std::vector<double>(size)};
  for (std::size_t j = 0; j < size; ++j) {
    const PauliString image = c.apply(PauliString::from_basis_index(n, j));
    perm.target[j] = static_cast<std::uint32_t>(image.basis_index());
    perm.sign[j] = image.negative() ? -1.0 : 1.0;
  }
  return perm;
}

inline SuperOperator to_superoperator(const CliffordElement& c) {
  const PauliPermutation perm = pauli_permutation(c);
  const auto size = static_cast<Eigen::Index>(perm.target.size());
  RealMatrix m = RealMatrix::Zero(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    m(static_cast<Eigen::Index>(perm.target[static_cast<std::size_t>(j)]), j) = perm.sign[static_cast<std::size_t>(j)];
  }
  return SuperOperator(static_cast<int>(c.num_qubits()), std::move(m));
}

/// Uniformly random Clifford for any n: a uniformly random symplectic basis,
/// built one hyperbolic pair at a time inside the symplectic complement of the
/// pairs already chosen, plus independent uniform sign bits.
template <typename Rng>
CliffordElement random_clifford(std::size_t n, Rng& rng) {
  const std::size_t words = words_for_bits(n);
  const std::uint64_t tail_mask = (n % 64 == 0) ? ~std::uint64_t{0} : ((std::uint64_t{1} << (n % 64)) - 1);
  auto random_vector = [&](PauliString& v) {
    for (std::size_t w = 0; w < words; ++w) {
      v.xs()[w] = static_cast<std::uint64_t>(rng());
      v.zs()[w] = static_cast<std::uint64_t>(rng());
    }
    v.xs()[words - 1] &= tail_mask;
    v.zs()[words - 1] &= tail_mask;
  };
  auto sp = [&](const PauliString& a, const PauliString& b) {
    return detail::symplectic_product(a.xs(), a.zs(), b.xs(), b.zs(), words);
  };
  auto add = [&](PauliString& a, const PauliString& b) {
    for (std::size_t w = 0; w < words; ++w) {
      a.xs()[w] ^= b.xs()[w];
      a.zs()[w] ^= b.zs()[w];
    }
  };
  std::vector<PauliString> xs, zs;
  xs.reserve(n);
  zs.reserve(n);
  // Linear projection onto the complement of span{x_j, z_j}; uniform in,
  // uniform out.
  auto project = [&](PauliString& u) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const bool with_z = sp(u, zs[j]);
      const bool with_x = sp(u, xs[j]);
      if (with_z) add(u, xs[j]);
      if (with_x) add(u, zs[j]);
    }
  };
  for (std::size_t k = 0; k < n; ++k) {
    PauliString v(n);
    do {
      random_vector(v);
      project(v);
    } while (v.is_identity());
    PauliString w(n);
    do {
      random_vector(w);
      project(w);
    } while (!sp(v, w));
    xs.push_back(std::move(v));
    zs.push_back(std::move(w));
  }
  CliffordElement c(n);
  for (std::size_t q = 0; q < n; ++q) {
    c.set_row(q, xs[q]);
    c.set_row(n + q, zs[q]);
  }
  for (std::size_t r = 0; r < 2 * n; ++r) c.set_row_sign(r, (rng() & 1U) != 0);
  return c;
}

}  // namespace irb

template <>
struct std::hash<irb::CliffordElement> {
  std::size_t operator()(const irb::CliffordElement& c) const noexcept { return c.hash(); }
};

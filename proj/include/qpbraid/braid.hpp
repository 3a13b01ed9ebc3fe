#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qpbraid/errors.hpp"

namespace qpbraid {

/// A generator sigma_index raised to sign (+1 or -1).
struct BraidLetter {
  int index = 1;
  int sign = 1;

  BraidLetter inverse() const { return {index, -sign}; }
  friend bool operator==(const BraidLetter&, const BraidLetter&) = default;
};

/// A word in the Artin generators of B_n. The empty word is the identity.
class BraidWord {
 public:
  BraidWord() = default;
  explicit BraidWord(int strands, std::vector<BraidLetter> letters = {});

  int strands() const { return strands_; }
  const std::vector<BraidLetter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  void push_back(BraidLetter letter);
  void append(const BraidWord& other);

  BraidWord inverse() const;

  /// Text form, e.g. "s1 s2 s2^-1". The empty word prints as "".
  std::string to_string() const;
  static BraidWord parse(int strands, std::string_view text);

  friend bool operator==(const BraidWord&, const BraidWord&) = default;

 private:
  int strands_ = 2;
  std::vector<BraidLetter> letters_;
};

BraidWord operator*(const BraidWord& a, const BraidWord& b);

struct QuasipositiveFactor {
  BraidWord conjugator;
  int index = 1;
};

/// Product of conjugates conjugator * sigma_index * conjugator^-1.
struct QuasipositiveFactorization {
  int strands = 2;
  std::vector<QuasipositiveFactor> factors;

  /// Throws InputError when a conjugator or index does not fit in B_strands.
  void validate() const;
};

/// images[i] (0-based) is the image of position i.
class Permutation {
 public:
  explicit Permutation(std::vector<int> images);
  static Permutation identity(int n);

  int size() const { return static_cast<int>(images_.size()); }
  int operator[](int i) const { return images_[i]; }
  const std::vector<int>& images() const { return images_; }
  int cycle_count() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> images_;
};

enum class Tristate { no, yes, unknown };

struct PositivityReport {
  bool positive = false;
  bool strictly_positive = false;
  Tristate syntactically_quasipositive = Tristate::unknown;
};

inline constexpr std::size_t kDefaultQuasipositiveParseBound = 24;

BraidWord free_reduce(const BraidWord& word);
BraidWord cyclic_reduce(const BraidWord& word);
int exponent_sum(const BraidWord& word);

/// Composition of the transpositions (k k+1) in word order, as functions:
/// sigma_a sigma_b maps i to s_a(s_b(i)). Signs are ignored.
Permutation permutation_of(const BraidWord& word);
int closure_components(const BraidWord& word);

PositivityReport classify_positivity(
    const BraidWord& word,
    std::size_t parse_bound = kDefaultQuasipositiveParseBound);

BraidWord expand_factorization(const QuasipositiveFactorization& qpf);
int band_euler_characteristic(const QuasipositiveFactorization& qpf);

/// True when b is a cyclic rotation of a (same strand count).
bool cyclically_equal(const BraidWord& a, const BraidWord& b);

}  // namespace qpbraid

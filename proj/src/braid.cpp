#include "qpbraid/braid.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace qpbraid {

BraidWord::BraidWord(int strands, std::vector<BraidLetter> letters)
    : strands_(strands) {
  if (strands < 2) throw InputError("braid word needs at least 2 strands");
  letters_.reserve(letters.size());
  for (const auto& l : letters) push_back(l);
}

void BraidWord::push_back(BraidLetter letter) {
  if (letter.index < 1 || letter.index >= strands_)
    throw InputError("generator s" + std::to_string(letter.index) +
                     " out of range for " + std::to_string(strands_) +
                     " strands");
  if (letter.sign != 1 && letter.sign != -1)
    throw InputError("letter sign must be +1 or -1");
  letters_.push_back(letter);
}

void BraidWord::append(const BraidWord& other) {
  if (other.strands_ != strands_)
    throw InputError("cannot concatenate words with different strand counts");
  letters_.insert(letters_.end(), other.letters_.begin(), other.letters_.end());
}

BraidWord BraidWord::inverse() const {
  BraidWord out(strands_);
  out.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    out.letters_.push_back(it->inverse());
  return out;
}

std::string BraidWord::to_string() const {
  std::string out;
  for (const auto& l : letters_) {
    if (!out.empty()) out += ' ';
    out += 's' + std::to_string(l.index);
    if (l.sign < 0) out += "^-1";
  }
  return out;
}

BraidWord BraidWord::parse(int strands, std::string_view text) {
  BraidWord word(strands);
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok.size() < 2 || (tok[0] != 's' && tok[0] != 'S'))
      throw InputError("bad braid token '" + tok + "'");
    std::string_view rest(tok);
    rest.remove_prefix(1);
    int sign = 1;
    if (auto caret = rest.find('^'); caret != std::string_view::npos) {
      auto exponent = rest.substr(caret + 1);
      if (exponent == "-1")
        sign = -1;
      else if (exponent != "1" && exponent != "+1")
        throw InputError("bad exponent in token '" + tok + "'");
      rest = rest.substr(0, caret);
    }
    int index = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), index);
    if (ec != std::errc() || ptr != rest.data() + rest.size())
      throw InputError("bad generator index in token '" + tok + "'");
    word.push_back({index, sign});
  }
  return word;
}

BraidWord operator*(const BraidWord& a, const BraidWord& b) {
  BraidWord out = a;
  out.append(b);
  return out;
}

void QuasipositiveFactorization::validate() const {
  if (strands < 2) throw InputError("factorization needs at least 2 strands");
  for (const auto& f : factors) {
    if (f.conjugator.strands() != strands)
      throw InputError("conjugator strand count differs from factorization");
    if (f.index < 1 || f.index >= strands)
      throw InputError("factor generator index out of range");
  }
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (int v : images_) {
    if (v < 0 || v >= static_cast<int>(images_.size()) || seen[v])
      throw InputError("permutation images are not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> images(n);
  for (int i = 0; i < n; ++i) images[i] = i;
  return Permutation(std::move(images));
}

int Permutation::cycle_count() const {
  std::vector<bool> seen(images_.size(), false);
  int cycles = 0;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (std::size_t j = i; !seen[j]; j = images_[j]) seen[j] = true;
  }
  return cycles;
}

BraidWord free_reduce(const BraidWord& word) {
  std::vector<BraidLetter> stack;
  stack.reserve(word.size());
  for (const auto& l : word.letters()) {
    if (!stack.empty() && stack.back() == l.inverse())
      stack.pop_back();
    else
      stack.push_back(l);
  }
  return BraidWord(word.strands(), std::move(stack));
}

BraidWord cyclic_reduce(const BraidWord& word) {
  auto letters = free_reduce(word).letters();
  std::size_t lo = 0, hi = letters.size();
  while (hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse()) {
    ++lo;
    --hi;
  }
  return BraidWord(word.strands(),
                   std::vector<BraidLetter>(letters.begin() + lo, letters.begin() + hi));
}

int exponent_sum(const BraidWord& word) {
  int sum = 0;
  for (const auto& l : word.letters()) sum += l.sign;
  return sum;
}

Permutation permutation_of(const BraidWord& word) {
  // Build s_1(s_2(...s_m(i))) by applying the letters right to left.
  std::vector<int> images(word.strands());
  for (int i = 0; i < word.strands(); ++i) images[i] = i;
  const auto& letters = word.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    int a = it->index - 1, b = it->index;
    for (int& v : images) {
      if (v == a)
        v = b;
      else if (v == b)
        v = a;
    }
  }
  return Permutation(std::move(images));
}

int closure_components(const BraidWord& word) {
  return permutation_of(word).cycle_count();
}

namespace {

// word[lo, hi) has the shape w s_k w^-1 with a positive middle letter.
bool is_conjugate_block(const std::vector<BraidLetter>& w, std::size_t lo,
                        std::size_t hi) {
  std::size_t len = hi - lo;
  if (len % 2 == 0) return false;
  std::size_t half = len / 2;
  if (w[lo + half].sign != 1) return false;
  for (std::size_t i = 0; i < half; ++i)
    if (!(w[lo + i] == w[hi - 1 - i].inverse())) return false;
  return true;
}

}  // namespace

PositivityReport classify_positivity(const BraidWord& word,
                                     std::size_t parse_bound) {
  PositivityReport report;
  const auto& letters = word.letters();
  report.positive = std::all_of(letters.begin(), letters.end(),
                                [](const BraidLetter& l) { return l.sign == 1; });
  if (report.positive) {
    std::vector<bool> present(word.strands(), false);
    for (const auto& l : letters) present[l.index] = true;
    report.strictly_positive = true;
    for (int k = 1; k < word.strands(); ++k)
      report.strictly_positive = report.strictly_positive && present[k];
  }

  if (letters.size() > parse_bound) {
    report.syntactically_quasipositive =
        report.positive ? Tristate::yes : Tristate::unknown;
    return report;
  }
  // parsable[j]: the prefix of length j splits into conjugate blocks.
  std::vector<bool> parsable(letters.size() + 1, false);
  parsable[0] = true;
  for (std::size_t j = 1; j <= letters.size(); ++j)
    for (std::size_t i = 0; i < j && !parsable[j]; ++i)
      parsable[j] = parsable[i] && is_conjugate_block(letters, i, j);
  report.syntactically_quasipositive =
      parsable[letters.size()] ? Tristate::yes : Tristate::no;
  return report;
}

BraidWord expand_factorization(const QuasipositiveFactorization& qpf) {
  qpf.validate();
  BraidWord out(qpf.strands);
  for (const auto& f : qpf.factors) {
    out.append(f.conjugator);
    out.push_back({f.index, 1});
    out.append(f.conjugator.inverse());
  }
  return out;
}

int band_euler_characteristic(const QuasipositiveFactorization& qpf) {
  return qpf.strands - static_cast<int>(qpf.factors.size());
}

bool cyclically_equal(const BraidWord& a, const BraidWord& b) {
  if (a.strands() != b.strands() || a.size() != b.size()) return false;
  if (a.empty()) return true;
  const auto& x = a.letters();
  const auto& y = b.letters();
  for (std::size_t shift = 0; shift < x.size(); ++shift) {
    bool match = true;
    for (std::size_t i = 0; i < x.size() && match; ++i)
      match = x[(i + shift) % x.size()] == y[i];
    if (match) return true;
  }
  return false;
}

}  // namespace qpbraid

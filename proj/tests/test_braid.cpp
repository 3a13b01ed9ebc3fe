#include <doctest.h>

#include <algorithm>
#include <random>

#include "qpbraid/braid.hpp"
#include "qpbraid/errors.hpp"

using namespace qpbraid;

namespace {

BraidWord W(int n, const char* text) { return BraidWord::parse(n, text); }

BraidWord random_word(std::mt19937& rng, int n, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), idx(1, n - 1), sgn(0, 1);
  BraidWord w(n);
  for (int i = len(rng); i > 0; --i) w.push_back({idx(rng), sgn(rng) ? 1 : -1});
  return w;
}

// Reduction in a random order: repeatedly delete a randomly chosen
// cancelling pair. Free reduction is confluent, so the result must match.
BraidWord reduce_random_order(BraidWord w, std::mt19937& rng) {
  auto L = w.letters();
  for (;;) {
    std::vector<std::size_t> pairs;
    for (std::size_t i = 0; i + 1 < L.size(); ++i)
      if (L[i + 1] == L[i].inverse()) pairs.push_back(i);
    if (pairs.empty()) break;
    std::size_t i = pairs[std::uniform_int_distribution<std::size_t>(0, pairs.size() - 1)(rng)];
    L.erase(L.begin() + i, L.begin() + i + 2);
  }
  return BraidWord(w.strands(), L);
}

// Strand tracking: pos[s] is the position of strand s; a letter swaps the
// strands at positions k and k+1.
std::vector<int> track_strands(const BraidWord& w) {
  const int n = w.strands();
  std::vector<int> at(n);  // at[p] = strand at position p
  for (int p = 0; p < n; ++p) at[p] = p;
  for (const auto& l : w.letters()) std::swap(at[l.index - 1], at[l.index]);
  return at;
}

int cycles_by_tracking(const BraidWord& w) {
  auto at = track_strands(w);
  const int n = w.strands();
  std::vector<char> seen(n, 0);
  int c = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++c;
    for (int t = s; !seen[t]; t = at[t]) seen[t] = 1;
  }
  return c;
}

}  // namespace

TEST_CASE("words parse, print and validate") {
  auto w = W(3, "s1 s2^-1  s2");
  CHECK(w.size() == 3);
  CHECK(w.to_string() == "s1 s2^-1 s2");
  CHECK(W(3, "").empty());
  CHECK_THROWS_AS(W(3, "s3"), InputError);
  CHECK_THROWS_AS(W(3, "s0"), InputError);
  CHECK_THROWS_AS(W(3, "x1"), InputError);
  CHECK_THROWS_AS(W(3, "s1^2"), InputError);
  CHECK_THROWS_AS(BraidWord(1), InputError);
  CHECK((W(3, "s1 s2") * W(3, "s2^-1")).to_string() == "s1 s2 s2^-1");
  CHECK(W(3, "s1 s2^-1").inverse().to_string() == "s2 s1^-1");
}

TEST_CASE("free_reduce") {
  CHECK(free_reduce(W(2, "s1 s1^-1")).empty());
  CHECK(free_reduce(W(3, "s1 s2 s2^-1 s2")) == W(3, "s1 s2"));
  CHECK(free_reduce(W(3, "s1 s2 s1")) == W(3, "s1 s2 s1"));
  CHECK(free_reduce(W(3, "s2 s1 s1^-1 s2^-1 s1")) == W(3, "s1"));
}

TEST_CASE("cyclic_reduce") {
  CHECK(cyclic_reduce(W(3, "s2^-1 s1 s2")) == W(3, "s1"));
  CHECK(cyclic_reduce(W(3, "s1 s2 s1^-1")) == W(3, "s2"));
  CHECK(cyclic_reduce(W(3, "s1 s2")) == W(3, "s1 s2"));
}

TEST_CASE("exponent_sum") {
  CHECK(exponent_sum(W(3, "s1 s2 s2 s2 s1 s2^-1 s2^-1 s2^-1")) == 2);
  CHECK(exponent_sum(W(3, "")) == 0);
  CHECK(exponent_sum(W(3, "s1 s1 s2 s2 s1 s2^-1")) == 4);
}

TEST_CASE("permutation_of and closure components") {
  CHECK(permutation_of(W(2, "s1")).images() == std::vector<int>{1, 0});
  // s1 s2 acts as s1(s2(i)): 0 -> 1 -> 2 -> 0
  CHECK(permutation_of(W(3, "s1 s2")).images() == std::vector<int>{1, 2, 0});
  CHECK(permutation_of(W(3, "s1 s1 s2 s2 s1 s2^-1")).cycle_count() == 1);
  CHECK(closure_components(W(2, "s1")) == 1);
  CHECK(closure_components(W(3, "")) == 3);
  CHECK(closure_components(W(3, "s1 s2 s2 s2 s1 s2^-1 s2^-1 s2^-1")) == 1);
  CHECK(closure_components(W(4, "s1 s3")) == 2);
  CHECK_THROWS_AS(Permutation({0, 0, 1}), InputError);
}

TEST_CASE("classify_positivity") {
  auto r = classify_positivity(W(3, "s1 s2"));
  CHECK(r.positive);
  CHECK(r.strictly_positive);
  CHECK(r.syntactically_quasipositive == Tristate::yes);

  r = classify_positivity(W(3, "s1 s1"));
  CHECK(r.positive);
  CHECK_FALSE(r.strictly_positive);

  r = classify_positivity(W(3, "s2 s1 s2^-1"));
  CHECK_FALSE(r.positive);
  CHECK(r.syntactically_quasipositive == Tristate::yes);

  CHECK(classify_positivity(W(2, "s1^-1")).syntactically_quasipositive == Tristate::no);
  CHECK(classify_positivity(W(3, "s1 s2^-1")).syntactically_quasipositive == Tristate::no);
  // nested conjugates: (s2 (s1 s2 s1^-1) s2^-1)
  CHECK(classify_positivity(W(3, "s2 s1 s2 s1^-1 s2^-1")).syntactically_quasipositive ==
        Tristate::yes);

  BraidWord longw(3);
  for (int i = 0; i < 13; ++i) longw = longw * W(3, "s1 s2^-1");
  CHECK(classify_positivity(longw).syntactically_quasipositive == Tristate::unknown);
  CHECK(classify_positivity(longw, 40).syntactically_quasipositive == Tristate::no);
}

TEST_CASE("expand_factorization and band surfaces") {
  QuasipositiveFactorization q1{2, {{W(2, ""), 1}}};
  CHECK(expand_factorization(q1) == W(2, "s1"));
  QuasipositiveFactorization q2{3, {{W(3, "s2"), 1}}};
  CHECK(expand_factorization(q2) == W(3, "s2 s1 s2^-1"));
  QuasipositiveFactorization q3{3, {{W(3, ""), 1}, {W(3, "s1 s2"), 2}}};
  CHECK(expand_factorization(q3) == W(3, "s1 s1 s2 s2 s2^-1 s1^-1"));

  CHECK(band_euler_characteristic(q1) == 1);
  CHECK(band_euler_characteristic(QuasipositiveFactorization{3, {{W(3, ""), 1}, {W(3, ""), 2}}}) == 1);
  QuasipositiveFactorization q52{3, {{W(3, ""), 1}, {W(3, ""), 1}, {W(3, ""), 2}, {W(3, "s2"), 1}}};
  CHECK(band_euler_characteristic(q52) == -1);
  CHECK(expand_factorization(q52) == W(3, "s1 s1 s2 s2 s1 s2^-1"));

  QuasipositiveFactorization bad{3, {{W(3, ""), 3}}};
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("cyclically_equal") {
  CHECK(cyclically_equal(W(3, "s1 s2 s2"), W(3, "s2 s1 s2")));
  CHECK_FALSE(cyclically_equal(W(3, "s1 s2"), W(3, "s2 s2")));
  CHECK_FALSE(cyclically_equal(W(3, "s1"), W(3, "s1 s1")));
}

TEST_CASE("properties on random words") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 4;
    auto w = random_word(rng, n, 30);
    auto u = random_word(rng, n, 6);
    auto r = free_reduce(w);
    CHECK(free_reduce(r) == r);
    CHECK(reduce_random_order(w, rng) == r);
    CHECK(exponent_sum(r) == exponent_sum(w));
    CHECK(permutation_of(r) == permutation_of(w));
    CHECK(closure_components(w) == cycles_by_tracking(w));
    auto conj = u * w * u.inverse();
    CHECK(exponent_sum(conj) == exponent_sum(w));
    CHECK(closure_components(conj) == closure_components(w));
  }
}

TEST_CASE("expansions parse as quasipositive") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;
    QuasipositiveFactorization q{n, {}};
    std::uniform_int_distribution<int> k(1, n - 1), m(1, 3);
    for (int f = m(rng); f > 0; --f) q.factors.push_back({random_word(rng, n, 3), k(rng)});
    auto e = expand_factorization(q);
    CHECK(exponent_sum(e) == static_cast<int>(q.factors.size()));
    if (e.size() <= kDefaultQuasipositiveParseBound)
      CHECK(classify_positivity(e).syntactically_quasipositive == Tristate::yes);
  }
}

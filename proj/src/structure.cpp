// Copyright 2026 The clevy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clevy/structure.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>

#include "clevy/error.hpp"

namespace clevy {

namespace {

std::size_t checked_pow(std::size_t base, unsigned exp) {
  std::size_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::size_t>::max() / base)
      fail(ErrorCode::kCapExceeded, "cell count n^arity overflows");
    r *= base;
  }
  return r;
}

void check_same_shape(const Structure& a, const Structure& b) {
  if (!a.same_shape(b))
    fail(ErrorCode::kShapeMismatch, "structures differ in signature or base size");
}

}  // namespace

// --- Signature -------------------------------------------------------------

Signature::Signature(std::vector<unsigned> arities) : arities_(std::move(arities)) {
  if (!std::is_sorted(arities_.begin(), arities_.end()))
    fail(ErrorCode::kInvalidArgument, "signature arities must be nondecreasing");
}

Signature Signature::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s.push_back(c);
  std::string_view v(s);
  if (!v.empty() && v.front() == '(') {
    if (v.back() != ')') fail(ErrorCode::kParse, "unbalanced signature parentheses");
    v = v.substr(1, v.size() - 2);
  }
  std::vector<unsigned> ar;
  while (!v.empty()) {
    unsigned x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p == v.data())
      fail(ErrorCode::kParse, "bad signature '" + std::string(text) + "'");
    ar.push_back(x);
    v.remove_prefix(static_cast<std::size_t>(p - v.data()));
    if (v.empty()) break;
    if (v.front() != ',') fail(ErrorCode::kParse, "bad signature '" + std::string(text) + "'");
    v.remove_prefix(1);
    if (v.empty()) fail(ErrorCode::kParse, "trailing comma in signature");
  }
  return Signature(std::move(ar));
}

std::string Signature::to_string() const {
  std::string out = "(";
  for (std::size_t j = 0; j < arities_.size(); ++j) {
    if (j) out += ',';
    out += std::to_string(arities_[j]);
  }
  out += ')';
  return out;
}

void require_process_signature(const Signature& sig) {
  if (sig.max_arity() == 0)
    fail(ErrorCode::kInvalidArgument,
         "process signatures need at least one relation of positive arity");
}

// --- Permutation -----------------------------------------------------------

Permutation::Permutation(std::vector<Label> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (Label x : image_) {
    if (x < 1 || x > image_.size() || seen[x - 1])
      fail(ErrorCode::kInvalidArgument, "permutation image is not a bijection of [n]");
    seen[x - 1] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<Label> img(n);
  std::iota(img.begin(), img.end(), Label{1});
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
  std::vector<Label> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i] - 1] = static_cast<Label>(i + 1);
  Permutation p;
  p.image_ = std::move(inv);
  return p;
}

Permutation compose(const Permutation& s, const Permutation& t) {
  if (s.size() != t.size()) fail(ErrorCode::kShapeMismatch, "permutation sizes differ");
  std::vector<Label> img(s.size());
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = s(t(static_cast<Label>(i + 1)));
  return Permutation(std::move(img));
}

// --- Relation --------------------------------------------------------------

Relation::Relation(unsigned arity, std::size_t n) : arity_(arity), n_(n) {
  if (dense()) {
    cells_ = checked_pow(n, arity);
    bits_.assign((cells_ + 63) / 64, 0);
  }
}

void Relation::check_tuple(std::span<const Label> tuple) const {
  if (tuple.size() != arity_) fail(ErrorCode::kInvalidArgument, "tuple has wrong arity");
  for (Label a : tuple)
    if (a < 1 || a > n_) fail(ErrorCode::kInvalidArgument, "tuple entry outside [n]");
}

std::size_t Relation::cell_of(std::span<const Label> tuple) const {
  std::size_t c = 0;
  for (Label a : tuple) c = c * n_ + (a - 1);
  return c;
}

bool Relation::contains(std::span<const Label> tuple) const {
  check_tuple(tuple);
  if (dense()) return test_cell(cell_of(tuple));
  return std::binary_search(tuples_.begin(), tuples_.end(), tuple,
                            [](const auto& x, const auto& y) {
                              return std::lexicographical_compare(x.begin(), x.end(), y.begin(),
                                                                  y.end());
                            });
}

void Relation::insert(std::span<const Label> tuple) {
  if (!contains(tuple)) toggle(tuple);
}

void Relation::erase(std::span<const Label> tuple) {
  if (contains(tuple)) toggle(tuple);
}

void Relation::toggle(std::span<const Label> tuple) {
  check_tuple(tuple);
  if (dense()) {
    flip_cell(cell_of(tuple));
    return;
  }
  Tuple t(tuple.begin(), tuple.end());
  auto it = std::lower_bound(tuples_.begin(), tuples_.end(), t);
  if (it != tuples_.end() && *it == t)
    tuples_.erase(it);
  else
    tuples_.insert(it, std::move(t));
}

std::size_t Relation::count() const {
  if (!dense()) return tuples_.size();
  std::size_t c = 0;
  for (auto w : bits_) c += static_cast<std::size_t>(__builtin_popcountll(w));
  return c;
}

bool Relation::empty() const {
  if (!dense()) return tuples_.empty();
  return std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t w) { return w == 0; });
}

Relation& Relation::operator^=(const Relation& other) {
  if (arity_ != other.arity_ || n_ != other.n_)
    fail(ErrorCode::kShapeMismatch, "relation shapes differ");
  if (dense()) {
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] ^= other.bits_[i];
    return *this;
  }
  std::vector<Tuple> out;
  out.reserve(tuples_.size() + other.tuples_.size());
  std::set_symmetric_difference(tuples_.begin(), tuples_.end(), other.tuples_.begin(),
                                other.tuples_.end(), std::back_inserter(out));
  tuples_ = std::move(out);
  return *this;
}

bool Relation::operator==(const Relation& other) const {
  return arity_ == other.arity_ && n_ == other.n_ && bits_ == other.bits_ &&
         tuples_ == other.tuples_;
}

// --- Structure -------------------------------------------------------------

Structure::Structure(Signature sig, std::size_t n) : sig_(std::move(sig)), n_(n) {
  relations_.reserve(sig_.size());
  for (unsigned a : sig_.arities()) relations_.emplace_back(a, n);
}

bool Structure::empty() const {
  return std::all_of(relations_.begin(), relations_.end(),
                     [](const Relation& r) { return r.empty(); });
}

std::size_t Structure::tuple_count() const {
  std::size_t c = 0;
  for (const auto& r : relations_) c += r.count();
  return c;
}

Structure& Structure::operator^=(const Structure& other) {
  check_same_shape(*this, other);
  for (std::size_t j = 0; j < relations_.size(); ++j) relations_[j] ^= other.relations_[j];
  return *this;
}

bool Structure::operator==(const Structure& other) const {
  return n_ == other.n_ && sig_ == other.sig_ && relations_ == other.relations_;
}

Structure empty_structure(const Signature& sig, std::size_t n) { return Structure(sig, n); }

Structure increment(const Structure& a, const Structure& b) {
  Structure out = a;
  out ^= b;
  return out;
}

Structure restrict(const Structure& m, std::size_t level) {
  if (level > m.size())
    fail(ErrorCode::kInvalidArgument, "restriction level exceeds base size");
  Structure out(m.signature(), level);
  for (std::size_t j = 0; j < m.relation_count(); ++j) {
    m.relation(j).for_each([&](std::span<const Label> t) {
      if (std::all_of(t.begin(), t.end(), [&](Label a) { return a <= level; }))
        out.toggle(j, t);
    });
  }
  return out;
}

Structure relabel(const Structure& m, const Permutation& sigma) {
  if (sigma.size() != m.size())
    fail(ErrorCode::kShapeMismatch, "permutation size differs from base size");
  // a in M^sigma iff sigma(a) in M, so each tuple b of M contributes sigma^{-1}(b).
  const Permutation inv = sigma.inverse();
  Structure out(m.signature(), m.size());
  Tuple buf;
  for (std::size_t j = 0; j < m.relation_count(); ++j) {
    m.relation(j).for_each([&](std::span<const Label> t) {
      buf.assign(t.begin(), t.end());
      for (auto& a : buf) a = inv(a);
      out.toggle(j, buf);
    });
  }
  return out;
}

Structure pullback(const Structure& m, std::span<const Label> injection) {
  const std::size_t level = injection.size();
  std::vector<Label> inv(m.size() + 1, 0);
  for (std::size_t i = 0; i < level; ++i) {
    const Label x = injection[i];
    if (x < 1 || x > m.size() || inv[x] != 0)
      fail(ErrorCode::kInvalidArgument, "map is not an injection into [n]");
    inv[x] = static_cast<Label>(i + 1);
  }
  // a in M^phi iff phi(a) in M; tuples of M outside the image of phi are dropped.
  Structure out(m.signature(), level);
  Tuple buf;
  for (std::size_t j = 0; j < m.relation_count(); ++j) {
    m.relation(j).for_each([&](std::span<const Label> t) {
      buf.clear();
      for (Label a : t) {
        if (inv[a] == 0) return;
        buf.push_back(inv[a]);
      }
      out.toggle(j, buf);
    });
  }
  return out;
}

std::size_t agreement_level(const Structure& a, const Structure& b) {
  check_same_shape(a, b);
  // Restrictions to [m] agree iff every differing tuple has max entry > m.
  std::size_t level = a.size();
  const Structure d = increment(a, b);
  for (std::size_t j = 0; j < d.relation_count(); ++j) {
    d.relation(j).for_each([&](std::span<const Label> t) {
      Label mx = 0;
      for (Label x : t) mx = std::max(mx, x);
      // A differing nullary tuple disagrees already at level 0.
      level = std::min<std::size_t>(level, mx == 0 ? 0 : mx - 1);
    });
  }
  return level;
}

std::size_t total_cells(const Signature& sig, std::size_t n) {
  std::size_t c = 0;
  for (unsigned a : sig.arities()) c += checked_pow(n, a);
  return c;
}

// --- Serialization ---------------------------------------------------------

std::string serialize(const Structure& m) {
  std::string out = "L=" + m.signature().to_string() + "|n=" + std::to_string(m.size());
  for (std::size_t j = 0; j < m.relation_count(); ++j) {
    out += "|R" + std::to_string(j + 1) + "={";
    bool first = true;
    m.relation(j).for_each([&](std::span<const Label> t) {
      if (!first) out += ';';
      first = false;
      out += '(';
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(t[i]);
      }
      out += ')';
    });
    out += '}';
  }
  return out;
}

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  void expect(std::string_view lit) {
    if (s_.substr(pos_, lit.size()) != lit)
      error("expected '" + std::string(lit) + "'");
    pos_ += lit.size();
  }
  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  bool done() const { return pos_ == s_.size(); }
  std::string_view until(char c) {
    const auto e = s_.find(c, pos_);
    if (e == std::string_view::npos) error(std::string("missing '") + c + "'");
    auto r = s_.substr(pos_, e - pos_);
    pos_ = e;
    return r;
  }
  std::uint64_t number() {
    std::uint64_t x = 0;
    auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), x);
    if (ec != std::errc() || p == s_.data() + pos_) error("expected a decimal number");
    pos_ = static_cast<std::size_t>(p - s_.data());
    return x;
  }
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::kParse, "structure text, offset " + std::to_string(pos_) + ": " + what);
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Structure parse_structure(std::string_view text) {
  Cursor c(text);
  c.expect("L=(");
  const std::string_view sig_text = c.until(')');
  c.expect(")");
  Signature sig;
  try {
    sig = Signature::parse("(" + std::string(sig_text) + ")");
  } catch (const Error& e) {
    c.error(e.what());
  }
  c.expect("|n=");
  const std::uint64_t n = c.number();
  if (n > std::numeric_limits<Label>::max()) c.error("base size too large");
  Structure out(sig, static_cast<std::size_t>(n));
  Tuple t;
  for (std::size_t j = 0; j < sig.size(); ++j) {
    c.expect("|R" + std::to_string(j + 1) + "={");
    bool first = true;
    while (!c.peek('}')) {
      if (!first) c.expect(";");
      first = false;
      c.expect("(");
      t.clear();
      while (!c.peek(')')) {
        if (!t.empty()) c.expect(",");
        const std::uint64_t a = c.number();
        if (a < 1 || a > n) c.error("tuple entry outside [n]");
        t.push_back(static_cast<Label>(a));
      }
      c.expect(")");
      if (t.size() != sig.arity(j)) c.error("tuple arity does not match signature");
      if (out.contains(j, t)) c.error("duplicate tuple");
      out.insert(j, t);
    }
    c.expect("}");
  }
  if (!c.done()) c.error("trailing characters");
  return out;
}

int canonical_compare(const Structure& a, const Structure& b) {
  check_same_shape(a, b);
  for (std::size_t j = 0; j < a.relation_count(); ++j) {
    std::vector<Tuple> ta, tb;
    a.relation(j).for_each([&](std::span<const Label> t) { ta.emplace_back(t.begin(), t.end()); });
    b.relation(j).for_each([&](std::span<const Label> t) { tb.emplace_back(t.begin(), t.end()); });
    const std::size_t common = std::min(ta.size(), tb.size());
    for (std::size_t i = 0; i < common; ++i) {
      if (ta[i] != tb[i]) return ta[i] < tb[i] ? -1 : 1;
    }
    // "...)}" sorts after "...);(" so the shorter list is the larger one.
    if (ta.size() != tb.size()) return ta.size() > tb.size() ? -1 : 1;
  }
  return 0;
}

}  // namespace clevy

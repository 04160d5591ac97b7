#include "cantor/clopen.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <sstream>

#include "cantor/errors.hpp"

namespace cantor {

namespace {

constexpr unsigned kHardLimitBits = 32;

std::uint64_t words_for(std::uint64_t bits) { return (bits + 63) / 64; }

}  // namespace

DepthCaps parse_depth_caps(const std::string& text) {
  DepthCaps caps;
  auto parse_one = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 3) {
      throw Error(ErrorKind::ParseError, "bad CANTOR_DEPTH_CAP '" + text + "'");
    }
    return static_cast<unsigned>(std::stoul(s));
  };
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    caps.dim1 = parse_one(text);
    caps.dim2 = std::min(caps.dim1, kHardLimitBits / 2);
  } else {
    caps.dim1 = parse_one(text.substr(0, comma));
    caps.dim2 = parse_one(text.substr(comma + 1));
  }
  if (caps.dim1 > kHardLimitBits || 2 * caps.dim2 > kHardLimitBits) {
    throw Error(ErrorKind::ParseError, "CANTOR_DEPTH_CAP exceeds the hard limit of 2^32 cells");
  }
  return caps;
}

const DepthCaps& depth_caps() {
  static const DepthCaps caps = [] {
    const char* env = std::getenv("CANTOR_DEPTH_CAP");
    return env ? parse_depth_caps(env) : DepthCaps{};
  }();
  return caps;
}

ClopenSet::ClopenSet(int dim, unsigned depth) : dim_(dim), depth_(depth) {
  if (dim != 1 && dim != 2) throw Error(ErrorKind::DimensionMismatch, "dimension must be 1 or 2");
  if (depth > depth_caps().for_dim(dim)) {
    throw Error(ErrorKind::DepthCapExceeded, "depth " + std::to_string(depth) + " exceeds cap " +
                                                 std::to_string(depth_caps().for_dim(dim)) + " for dim " +
                                                 std::to_string(dim));
  }
  bits_.assign(words_for(cell_count()), 0);
}

ClopenSet ClopenSet::full(int dim, unsigned depth) {
  ClopenSet s(dim, depth);
  s.set_range(0, s.cell_count());
  return s;
}

ClopenSet ClopenSet::cylinder(const BitWord& w, unsigned depth) {
  ClopenSet s(1, std::max<unsigned>(depth, static_cast<unsigned>(w.size())));
  s.insert_cylinder(w);
  return s;
}

ClopenSet ClopenSet::rectangle(const BitWord& a, const BitWord& b, unsigned depth) {
  const unsigned d = std::max({depth, static_cast<unsigned>(a.size()), static_cast<unsigned>(b.size())});
  ClopenSet s(2, d);
  s.insert_rectangle(a, b);
  return s;
}

ClopenSet ClopenSet::diagonal(unsigned depth) {
  ClopenSet s(2, depth);
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << depth); ++w) s.insert_cell((w << depth) | w);
  return s;
}

void ClopenSet::check_dim(int dim, const char* op) const {
  if (dim_ != dim) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(op) + " needs dim " + std::to_string(dim) + ", got " + std::to_string(dim_));
  }
}

void ClopenSet::set_range(std::uint64_t lo, std::uint64_t hi) {
  while (lo < hi && (lo & 63) != 0) {
    bits_[lo >> 6] |= std::uint64_t{1} << (lo & 63);
    ++lo;
  }
  while (lo + 64 <= hi) {
    bits_[lo >> 6] = ~std::uint64_t{0};
    lo += 64;
  }
  while (lo < hi) {
    bits_[lo >> 6] |= std::uint64_t{1} << (lo & 63);
    ++lo;
  }
}

bool ClopenSet::all_in_range(std::uint64_t lo, std::uint64_t hi) const {
  while (lo < hi && (lo & 63) != 0) {
    if (!((bits_[lo >> 6] >> (lo & 63)) & 1U)) return false;
    ++lo;
  }
  while (lo + 64 <= hi) {
    if (bits_[lo >> 6] != ~std::uint64_t{0}) return false;
    lo += 64;
  }
  while (lo < hi) {
    if (!((bits_[lo >> 6] >> (lo & 63)) & 1U)) return false;
    ++lo;
  }
  return true;
}

std::uint64_t ClopenSet::count_range(std::uint64_t lo, std::uint64_t hi) const {
  std::uint64_t n = 0;
  while (lo < hi && (lo & 63) != 0) {
    n += (bits_[lo >> 6] >> (lo & 63)) & 1U;
    ++lo;
  }
  while (lo + 64 <= hi) {
    n += static_cast<std::uint64_t>(std::popcount(bits_[lo >> 6]));
    lo += 64;
  }
  while (lo < hi) {
    n += (bits_[lo >> 6] >> (lo & 63)) & 1U;
    ++lo;
  }
  return n;
}

std::pair<std::uint64_t, std::uint64_t> ClopenSet::word_range(const BitWord& w) const {
  if (w.size() >= depth_) {
    const std::uint64_t idx = w.prefix(depth_).to_index();
    return {idx, idx + 1};
  }
  const unsigned shift = depth_ - static_cast<unsigned>(w.size());
  const std::uint64_t idx = w.to_index();
  return {idx << shift, (idx + 1) << shift};
}

void ClopenSet::insert_cell(std::uint64_t index) {
  if (index >= cell_count()) throw Error(ErrorKind::BadLength, "cell index out of range");
  bits_[index >> 6] |= std::uint64_t{1} << (index & 63);
}

void ClopenSet::erase_cell(std::uint64_t index) {
  if (index >= cell_count()) throw Error(ErrorKind::BadLength, "cell index out of range");
  bits_[index >> 6] &= ~(std::uint64_t{1} << (index & 63));
}

void ClopenSet::insert(const BitWord& w) {
  check_dim(1, "insert");
  if (w.size() != depth_) throw Error(ErrorKind::BadLength, "cell word must have length " + std::to_string(depth_));
  insert_cell(w.to_index());
}

void ClopenSet::insert(const BitWord& u, const BitWord& v) {
  check_dim(2, "insert");
  if (u.size() != depth_ || v.size() != depth_) {
    throw Error(ErrorKind::BadLength, "cell words must have length " + std::to_string(depth_));
  }
  insert_cell((u.to_index() << depth_) | v.to_index());
}

void ClopenSet::insert_cylinder(const BitWord& w) {
  check_dim(1, "insert_cylinder");
  if (w.size() > depth_) throw Error(ErrorKind::BadLength, "cylinder word longer than depth");
  auto [lo, hi] = word_range(w);
  set_range(lo, hi);
}

void ClopenSet::insert_rectangle(const BitWord& a, const BitWord& b) {
  check_dim(2, "insert_rectangle");
  if (a.size() > depth_ || b.size() > depth_) throw Error(ErrorKind::BadLength, "rectangle word longer than depth");
  auto [ulo, uhi] = word_range(a);
  auto [vlo, vhi] = word_range(b);
  for (std::uint64_t u = ulo; u < uhi; ++u) set_range((u << depth_) + vlo, (u << depth_) + vhi);
}

bool ClopenSet::contains_cell(std::uint64_t index) const {
  if (index >= cell_count()) throw Error(ErrorKind::BadLength, "cell index out of range");
  return (bits_[index >> 6] >> (index & 63)) & 1U;
}

bool ClopenSet::contains(const BitWord& w) const {
  check_dim(1, "contains");
  if (w.size() != depth_) throw Error(ErrorKind::BadLength, "cell word must have length " + std::to_string(depth_));
  return contains_cell(w.to_index());
}

bool ClopenSet::contains(const BitWord& u, const BitWord& v) const {
  check_dim(2, "contains");
  if (u.size() != depth_ || v.size() != depth_) {
    throw Error(ErrorKind::BadLength, "cell words must have length " + std::to_string(depth_));
  }
  return contains_cell((u.to_index() << depth_) | v.to_index());
}

bool ClopenSet::contains_cylinder(const BitWord& w) const {
  check_dim(1, "contains_cylinder");
  auto [lo, hi] = word_range(w);
  return all_in_range(lo, hi);
}

bool ClopenSet::contains_rectangle(const BitWord& a, const BitWord& b) const {
  check_dim(2, "contains_rectangle");
  auto [ulo, uhi] = word_range(a);
  auto [vlo, vhi] = word_range(b);
  for (std::uint64_t u = ulo; u < uhi; ++u) {
    if (!all_in_range((u << depth_) + vlo, (u << depth_) + vhi)) return false;
  }
  return true;
}

Dyadic ClopenSet::measure_in_cylinder(const BitWord& w) const {
  check_dim(1, "measure_in_cylinder");
  auto [lo, hi] = word_range(w);
  const unsigned scale = std::max(depth_, static_cast<unsigned>(w.size()));
  return Dyadic(BigInt(count_range(lo, hi)), scale);
}

Dyadic ClopenSet::measure_in_rectangle(const BitWord& a, const BitWord& b) const {
  check_dim(2, "measure_in_rectangle");
  auto [ulo, uhi] = word_range(a);
  auto [vlo, vhi] = word_range(b);
  std::uint64_t n = 0;
  for (std::uint64_t u = ulo; u < uhi; ++u) n += count_range((u << depth_) + vlo, (u << depth_) + vhi);
  const unsigned scale = std::max(depth_, static_cast<unsigned>(a.size())) +
                         std::max(depth_, static_cast<unsigned>(b.size()));
  return Dyadic(BigInt(n), scale);
}

std::uint64_t ClopenSet::count() const {
  std::uint64_t n = 0;
  for (auto w : bits_) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

ClopenSet ClopenSet::refined(unsigned new_depth) const {
  if (new_depth < depth_) throw Error(ErrorKind::BadLength, "cannot refine to a shallower depth");
  if (new_depth == depth_) return *this;
  ClopenSet out(dim_, new_depth);
  const unsigned e = new_depth - depth_;
  for (std::uint64_t idx : cell_indices()) {
    if (dim_ == 1) {
      out.set_range(idx << e, (idx + 1) << e);
    } else {
      const std::uint64_t u = idx >> depth_;
      const std::uint64_t v = idx & ((std::uint64_t{1} << depth_) - 1);
      for (std::uint64_t r = 0; r < (std::uint64_t{1} << e); ++r) {
        const std::uint64_t uu = (u << e) | r;
        out.set_range((uu << new_depth) + (v << e), (uu << new_depth) + ((v + 1) << e));
      }
    }
  }
  return out;
}

bool ClopenSet::subset_of(const ClopenSet& other) const {
  check_dim(other.dim_, "subset_of");
  const unsigned d = std::max(depth_, other.depth_);
  const ClopenSet a = refined(d);
  const ClopenSet b = other.refined(d);
  for (std::size_t i = 0; i < a.bits_.size(); ++i) {
    if ((a.bits_[i] & ~b.bits_[i]) != 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> ClopenSet::cell_indices() const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    std::uint64_t w = bits_[i];
    while (w != 0) {
      const int t = std::countr_zero(w);
      out.push_back((static_cast<std::uint64_t>(i) << 6) | static_cast<std::uint64_t>(t));
      w &= w - 1;
    }
  }
  return out;
}

std::vector<BitWord> ClopenSet::cells1() const {
  check_dim(1, "cells1");
  std::vector<BitWord> out;
  for (auto idx : cell_indices()) out.push_back(BitWord::from_index(idx, depth_));
  return out;
}

std::vector<std::pair<BitWord, BitWord>> ClopenSet::cells2() const {
  check_dim(2, "cells2");
  std::vector<std::pair<BitWord, BitWord>> out;
  const std::uint64_t mask = (std::uint64_t{1} << depth_) - 1;
  for (auto idx : cell_indices()) {
    out.emplace_back(BitWord::from_index(idx >> depth_, depth_), BitWord::from_index(idx & mask, depth_));
  }
  return out;
}

std::optional<std::uint64_t> ClopenSet::first_cell() const {
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] != 0) return (static_cast<std::uint64_t>(i) << 6) | std::countr_zero(bits_[i]);
  }
  return std::nullopt;
}

bool operator==(const ClopenSet& a, const ClopenSet& b) {
  if (a.dim_ != b.dim_) return false;
  const unsigned d = std::max(a.depth_, b.depth_);
  return a.refined(d).bits_ == b.refined(d).bits_;
}

ClopenSet boolean_combine(BoolOp op, const ClopenSet& a, const ClopenSet* b) {
  if (op == BoolOp::Complement) {
    ClopenSet out = a;
    for (auto& w : out.bits_) w = ~w;
    // Clear padding past the last cell.
    const std::uint64_t n = out.cell_count();
    if ((n & 63) != 0) out.bits_.back() &= (std::uint64_t{1} << (n & 63)) - 1;
    return out;
  }
  if (b == nullptr) throw Error(ErrorKind::DimensionMismatch, "binary operation needs two operands");
  if (a.dim() != b->dim()) {
    throw Error(ErrorKind::DimensionMismatch, "operands have dims " + std::to_string(a.dim()) + " and " +
                                                  std::to_string(b->dim()));
  }
  const unsigned d = std::max(a.depth(), b->depth());
  ClopenSet x = a.refined(d);
  const ClopenSet y = b->refined(d);
  for (std::size_t i = 0; i < x.bits_.size(); ++i) {
    switch (op) {
      case BoolOp::Union: x.bits_[i] |= y.bits_[i]; break;
      case BoolOp::Intersect: x.bits_[i] &= y.bits_[i]; break;
      case BoolOp::Difference: x.bits_[i] &= ~y.bits_[i]; break;
      case BoolOp::Complement: break;
    }
  }
  return x;
}

ClopenSet translate(const ClopenSet& a, const BitWord& s) {
  if (a.dim() != 1) throw Error(ErrorKind::DimensionMismatch, "translate by one word needs dim 1");
  const ClopenSet src = a.refined(std::max<unsigned>(a.depth(), static_cast<unsigned>(s.size())));
  const std::uint64_t mask = s.resized(src.depth()).to_index();
  ClopenSet out(1, src.depth());
  for (auto idx : src.cell_indices()) out.insert_cell(idx ^ mask);
  return out;
}

ClopenSet translate(const ClopenSet& a, const BitWord& s, const BitWord& t) {
  if (a.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "translate by a pair needs dim 2");
  const unsigned d = std::max({a.depth(), static_cast<unsigned>(s.size()), static_cast<unsigned>(t.size())});
  const ClopenSet src = a.refined(d);
  const std::uint64_t mask = (s.resized(d).to_index() << d) | t.resized(d).to_index();
  ClopenSet out(2, d);
  for (auto idx : src.cell_indices()) out.insert_cell(idx ^ mask);
  return out;
}

ClopenSet section(const ClopenSet& a, const BitWord& w, Axis axis) {
  if (a.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "section needs dim 2");
  const unsigned d = a.depth();
  if (w.size() != d) throw Error(ErrorKind::BadLength, "section word must have length " + std::to_string(d));
  const std::uint64_t x = w.to_index();
  ClopenSet out(1, d);
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << d); ++y) {
    const std::uint64_t idx = axis == Axis::Vertical ? ((x << d) | y) : ((y << d) | x);
    if (a.contains_cell(idx)) out.insert_cell(y);
  }
  return out;
}

ClopenSet swap_coordinates(const ClopenSet& a) {
  if (a.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "swap needs dim 2");
  const unsigned d = a.depth();
  const std::uint64_t mask = (std::uint64_t{1} << d) - 1;
  ClopenSet out(2, d);
  for (auto idx : a.cell_indices()) out.insert_cell(((idx & mask) << d) | (idx >> d));
  return out;
}

ClopenSet symmetrize(const ClopenSet& a) { return set_intersect(a, swap_coordinates(a)); }

ClopenSet flip_first_coordinate(const ClopenSet& a, unsigned from) {
  if (a.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "flip_first_coordinate needs dim 2");
  if (from > a.depth()) throw Error(ErrorKind::BadLength, "flip position beyond depth");
  const unsigned d = a.depth();
  return translate(a, BitWord::zeros(from).concat(BitWord::ones(d - from)), BitWord::zeros(d));
}

}  // namespace cantor

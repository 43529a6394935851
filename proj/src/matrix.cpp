#include "orbitbench/matrix.hpp"

#include <cstdlib>
#include <sstream>

#include "orbitbench/errors.hpp"

namespace orbitbench {

IntMatrix::IntMatrix(int d) : d_(d) {
  if (d < 1 || d > kMaxRank) throw DomainError("IntMatrix: dimension out of range");
  for (int i = 0; i < d; ++i) at(i, i) = 1;
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  std::vector<std::vector<std::int64_t>> v;
  for (const auto& r : rows) v.emplace_back(r);
  *this = from_rows(v);
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  const int d = static_cast<int>(rows.size());
  if (d < 1 || d > kMaxRank) throw DomainError("IntMatrix: dimension out of range");
  IntMatrix m;
  m.d_ = d;
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != d) throw DomainError("IntMatrix: not square");
    for (int j = 0; j < d; ++j) m.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

Element IntMatrix::apply(const Element& v) const {
  Element out;
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) out[i] += at(i, j) * v[j];
  return out;
}

Element IntMatrix::column(int j) const {
  Element out;
  for (int i = 0; i < d_; ++i) out[i] = at(i, j);
  return out;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (d_ != o.d_) throw DomainError("IntMatrix: dimension mismatch");
  IntMatrix m(d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) {
      std::int64_t s = 0;
      for (int k = 0; k < d_; ++k) s += at(i, k) * o.at(k, j);
      m.at(i, j) = s;
    }
  return m;
}

namespace {

std::int64_t det_rec(const IntMatrix& m, std::vector<int> rows, int col) {
  if (rows.size() == 1) return m.at(rows[0], col);
  std::int64_t total = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::vector<int> rest;
    for (std::size_t t = 0; t < rows.size(); ++t)
      if (t != k) rest.push_back(rows[t]);
    const std::int64_t term = m.at(rows[k], col) * det_rec(m, rest, col + 1);
    total += (k % 2 == 0) ? term : -term;
  }
  return total;
}

}  // namespace

std::int64_t IntMatrix::det() const {
  std::vector<int> rows;
  for (int i = 0; i < d_; ++i) rows.push_back(i);
  return det_rec(*this, rows, 0);
}

bool IntMatrix::is_upper_triangular() const {
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < i; ++j)
      if (at(i, j) != 0) return false;
  return true;
}

IntMatrix IntMatrix::unimodular_inverse() const {
  const std::int64_t det = this->det();
  if (std::llabs(det) != 1) throw DomainError("IntMatrix: matrix " + str() + " is not unimodular");
  // Adjugate / det.
  IntMatrix inv(d_);
  if (d_ == 1) {
    inv.at(0, 0) = det;
    return inv;
  }
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) {
      IntMatrix minor(d_ - 1);
      int r = 0;
      for (int a = 0; a < d_; ++a) {
        if (a == j) continue;
        int c = 0;
        for (int b = 0; b < d_; ++b) {
          if (b == i) continue;
          minor.at(r, c++) = at(a, b);
        }
        ++r;
      }
      const std::int64_t cof = ((i + j) % 2 == 0 ? 1 : -1) * minor.det();
      inv.at(i, j) = cof * det;
    }
  return inv;
}

std::int64_t IntMatrix::l1_operator_norm() const {
  std::int64_t best = 0;
  for (int j = 0; j < d_; ++j) best = std::max(best, l1_norm(column(j)));
  return best;
}

std::string IntMatrix::str() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < d_; ++i) {
    os << (i ? ",[" : "[");
    for (int j = 0; j < d_; ++j) os << (j ? "," : "") << at(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace orbitbench

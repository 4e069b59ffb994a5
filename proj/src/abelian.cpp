#include "tjl/abelian.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace tjl {

// ---------------------------------------------------------------- dense matrices

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  int r = static_cast<int>(rows.size()), c = r ? static_cast<int>(rows[0].size()) : 0;
  IntMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
  return m;
}

IntVec IntMatrix::row(int i) const { return IntVec(a_.begin() + static_cast<long>(i) * c_, a_.begin() + static_cast<long>(i + 1) * c_); }

void IntMatrix::set_row(int i, const IntVec& v) {
  for (int j = 0; j < c_; ++j) (*this)(i, j) = v[j];
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (c_ != o.r_) throw std::invalid_argument("matrix size mismatch");
  IntMatrix m(r_, o.c_);
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k) {
      const Int& x = (*this)(i, k);
      if (x == 0) continue;
      for (int j = 0; j < o.c_; ++j) m(i, j) += x * o(k, j);
    }
  return m;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
  IntMatrix m = *this;
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] += o.a_[i];
  return m;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
  IntMatrix m = *this;
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] -= o.a_[i];
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix m(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

bool IntMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Int& x) { return x == 0; });
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < r_; ++i) {
    os << (i ? ",\n [" : "[");
    for (int j = 0; j < c_; ++j) os << (j ? "," : "") << (*this)(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------- sparse rows

void SparseMatrix::add_row(SparseRow r) { rows.push_back(std::move(r)); }

SparseRow SparseMatrix::make_row(std::vector<std::pair<int, long>> e) {
  std::sort(e.begin(), e.end());
  SparseRow r;
  for (size_t i = 0; i < e.size();) {
    long s = 0;
    size_t j = i;
    while (j < e.size() && e[j].first == e[i].first) s += e[j++].second;
    if (s != 0) r.push_back({e[i].first, Int(s)});
    i = j;
  }
  return r;
}

IntMatrix SparseMatrix::to_dense() const {
  IntMatrix m(static_cast<int>(rows.size()), cols);
  for (size_t i = 0; i < rows.size(); ++i)
    for (const auto& e : rows[i]) m(static_cast<int>(i), e.col) = e.val;
  return m;
}

SparseMatrix SparseMatrix::from_dense(const IntMatrix& m) {
  SparseMatrix s;
  s.cols = m.cols();
  for (int i = 0; i < m.rows(); ++i) {
    SparseRow r;
    for (int j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) r.push_back({j, m(i, j)});
    s.rows.push_back(std::move(r));
  }
  return s;
}

size_t SparseMatrix::nnz() const {
  size_t n = 0;
  for (const auto& r : rows) n += r.size();
  return n;
}

namespace {

// r += k*s
void axpy(SparseRow& r, const Int& k, const SparseRow& s, std::vector<int>* fresh) {
  if (k == 0) return;
  SparseRow out;
  out.reserve(r.size() + s.size());
  size_t i = 0, j = 0;
  while (i < r.size() || j < s.size()) {
    if (j == s.size() || (i < r.size() && r[i].col < s[j].col)) {
      out.push_back(std::move(r[i++]));
    } else if (i == r.size() || s[j].col < r[i].col) {
      out.push_back({s[j].col, Int(k * s[j].val)});
      if (fresh) fresh->push_back(s[j].col);
      ++j;
    } else {
      Int v = r[i].val + k * s[j].val;
      if (v != 0) out.push_back({r[i].col, std::move(v)});
      ++i;
      ++j;
    }
  }
  r = std::move(out);
}

const Int* find_entry(const SparseRow& r, int c) {
  auto it = std::lower_bound(r.begin(), r.end(), c, [](const SparseEntry& e, int x) { return e.col < x; });
  return (it != r.end() && it->col == c) ? &it->val : nullptr;
}

void row_op(IntMatrix& m, int dst, int src, const Int& k) {  // R_dst += k R_src
  if (k == 0) return;
  for (int j = 0; j < m.cols(); ++j) m(dst, j) += k * m(src, j);
}
void col_op(IntMatrix& m, int dst, int src, const Int& k) {  // C_dst += k C_src
  if (k == 0) return;
  for (int i = 0; i < m.rows(); ++i) m(i, dst) += k * m(i, src);
}
void swap_rows(IntMatrix& m, int a, int b) {
  if (a == b) return;
  for (int j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
void swap_cols(IntMatrix& m, int a, int b) {
  if (a == b) return;
  for (int i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

}  // namespace

// ---------------------------------------------------------------- HNF

HermiteForm hnf(const IntMatrix& M) {
  HermiteForm hf;
  hf.H = M;
  hf.U = IntMatrix::identity(M.rows());
  IntMatrix& H = hf.H;
  IntMatrix& U = hf.U;
  int m = M.rows(), n = M.cols(), row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    // Euclid on the column with the smallest entry as pivot; keeps entry growth modest
    while (true) {
      int best = -1;
      for (int i = row; i < m; ++i)
        if (H(i, col) != 0 && (best < 0 || mpz_cmpabs(H(i, col).get_mpz_t(), H(best, col).get_mpz_t()) < 0)) best = i;
      if (best < 0) break;
      swap_rows(H, row, best);
      swap_rows(U, row, best);
      bool clear = true;
      for (int i = row + 1; i < m; ++i) {
        if (H(i, col) == 0) continue;
        Int q = fdiv(H(i, col), H(row, col));
        row_op(H, i, row, Int(-q));
        row_op(U, i, row, Int(-q));
        clear &= H(i, col) == 0;
      }
      if (clear) break;
    }
    if (H(row, col) == 0) continue;
    if (H(row, col) < 0) {
      row_op(H, row, row, Int(-2));
      row_op(U, row, row, Int(-2));
    }
    for (int i = 0; i < row; ++i) {
      Int q = fdiv(H(i, col), H(row, col));
      row_op(H, i, row, Int(-q));
      row_op(U, i, row, Int(-q));
    }
    hf.pivot_cols.push_back(col);
    ++row;
  }
  hf.rank = row;
  return hf;
}

bool in_row_lattice(const HermiteForm& hf, const IntVec& v, IntVec* coeffs) {
  IntVec r = v;
  IntVec c(hf.rank);
  for (int i = 0; i < hf.rank; ++i) {
    int col = hf.pivot_cols[i];
    // entries left of the pivot must already vanish
    for (int j = (i ? hf.pivot_cols[i - 1] + 1 : 0); j < col; ++j)
      if (r[j] != 0) return false;
    const Int& p = hf.H(i, col);
    if (r[col] % p != 0) return false;
    c[i] = r[col] / p;
    for (int j = col; j < hf.H.cols(); ++j) r[j] -= c[i] * hf.H(i, j);
  }
  for (const auto& x : r)
    if (x != 0) return false;
  if (coeffs) {
    // express in terms of the original rows: c * U[0..rank)
    IntVec out(hf.U.cols());
    for (int i = 0; i < hf.rank; ++i)
      if (c[i] != 0)
        for (int j = 0; j < hf.U.cols(); ++j) out[j] += c[i] * hf.U(i, j);
    *coeffs = std::move(out);
  }
  return true;
}

// ---------------------------------------------------------------- dense SNF

IntVec SmithForm::invariant_factors() const {
  IntVec out;
  for (const auto& d : diagonal)
    if (d > 1) out.push_back(d);
  return out;
}

SmithForm snf(const IntMatrix& M) {
  SmithForm sf;
  int m = M.rows(), n = M.cols();
  sf.rows = m;
  sf.cols = n;
  IntMatrix D = M;
  sf.U = IntMatrix::identity(m);
  sf.V = IntMatrix::identity(n);
  for (int t = 0; t < std::min(m, n); ++t) {
    auto place_min = [&]() {
      int bi = -1, bj = -1;
      for (int i = t; i < m; ++i)
        for (int j = t; j < n; ++j)
          if (D(i, j) != 0 && (bi < 0 || abs(D(i, j)) < abs(D(bi, bj)))) {
            bi = i;
            bj = j;
          }
      if (bi < 0) return false;
      swap_rows(D, t, bi);
      swap_rows(sf.U, t, bi);
      swap_cols(D, t, bj);
      swap_cols(sf.V, t, bj);
      return true;
    };
    if (!place_min()) break;
    while (true) {
      bool dirty = false;
      for (int i = t + 1; i < m; ++i) {
        Int q = fdiv(D(i, t), D(t, t));
        row_op(D, i, t, Int(-q));
        row_op(sf.U, i, t, Int(-q));
        if (D(i, t) != 0) dirty = true;
      }
      for (int j = t + 1; j < n; ++j) {
        Int q = fdiv(D(t, j), D(t, t));
        col_op(D, j, t, Int(-q));
        col_op(sf.V, j, t, Int(-q));
        if (D(t, j) != 0) dirty = true;
      }
      if (dirty) {
        // move the smallest remainder in row/column t into the corner
        int bi = t, bj = t;
        Int best = abs(D(t, t));
        for (int i = t + 1; i < m; ++i)
          if (D(i, t) != 0 && abs(D(i, t)) < best) { best = abs(D(i, t)); bi = i; bj = t; }
        for (int j = t + 1; j < n; ++j)
          if (D(t, j) != 0 && abs(D(t, j)) < best) { best = abs(D(t, j)); bi = t; bj = j; }
        swap_rows(D, t, bi);
        swap_rows(sf.U, t, bi);
        swap_cols(D, t, bj);
        swap_cols(sf.V, t, bj);
        continue;
      }
      int bad = -1;
      for (int i = t + 1; i < m && bad < 0; ++i)
        for (int j = t + 1; j < n; ++j)
          if (D(i, j) % D(t, t) != 0) { bad = i; break; }
      if (bad < 0) break;
      row_op(D, t, bad, Int(1));
      row_op(sf.U, t, bad, Int(1));
    }
    if (D(t, t) < 0) {
      row_op(D, t, t, Int(-2));
      row_op(sf.U, t, t, Int(-2));
    }
    sf.diagonal.push_back(D(t, t));
  }
  return sf;
}

// ---------------------------------------------------------------- sparse SNF

void ColumnLog::forward(IntVec& a) const {
  for (const auto& st : steps) {
    const Int& x = a[st.src];
    if (x == 0) continue;
    Int xs = x;
    for (const auto& [j, k] : st.ops) a[j] -= k * xs;
  }
}

void ColumnLog::backward(IntVec& b) const {
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    const Int& x = b[it->src];
    if (x == 0) continue;
    Int xs = x;
    for (const auto& [j, k] : it->ops) b[j] += k * xs;
  }
}

size_t ColumnLog::size() const {
  size_t n = 0;
  for (const auto& s : steps) n += s.ops.size();
  return n;
}

namespace {

class SparseEliminator {
 public:
  explicit SparseEliminator(SparseMatrix&& M) : n_(M.cols), rows_(std::move(M.rows)) {
    alive_.assign(rows_.size(), 0);
    col_alive_.assign(n_, 1);
    col_rows_.resize(n_);
    for (size_t r = 0; r < rows_.size(); ++r) {
      if (rows_[r].empty()) continue;
      alive_[r] = 1;
      for (const auto& e : rows_[r]) col_rows_[e.col].push_back(static_cast<int>(r));
    }
  }

  SparseSmithResult run() {
    while (true) {
      unit_phase();
      auto [r, c] = choose_general();
      if (r < 0) break;
      general_pivot(r, c);
    }
    fix_chain();
    SparseSmithResult res;
    for (auto& [c, d] : piv_)
      if (d > 1) res.torsion.emplace_back(c, d);
    std::vector<char> used(n_, 0);
    for (auto& [c, d] : piv_) used[c] = 1;
    for (int c = 0; c < n_; ++c)
      if (col_alive_[c] && !used[c]) res.free_cols.push_back(c);
    res.unit_pivots = units_;
    res.log = std::move(log_);
    return res;
  }

 private:
  std::vector<int> rows_with(int c) {
    auto& v = col_rows_[c];
    std::vector<int> out;
    out.reserve(v.size());
    for (int r : v)
      if (alive_[r] && find_entry(rows_[r], c)) out.push_back(r);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    v = out;
    return out;
  }

  void add_row_multiple(int s, const Int& k, const SparseRow& src) {
    std::vector<int> fresh;
    axpy(rows_[s], k, src, &fresh);
    for (int j : fresh) col_rows_[j].push_back(s);
    if (rows_[s].empty())
      alive_[s] = 0;
    else if (queue_)
      queue_->push({rows_[s].size(), s});
  }

  void kill_row(int r) {
    alive_[r] = 0;
    rows_[r].clear();
    rows_[r].shrink_to_fit();
  }

  void eliminate_unit(int r, int c, int u) {
    SparseRow pr = rows_[r];
    ColumnStep st{c, {}};
    for (const auto& e : pr)
      if (e.col != c) st.ops.emplace_back(e.col, Int(e.val * u));
    if (!st.ops.empty()) log_.steps.push_back(std::move(st));
    for (int s : rows_with(c)) {
      if (s == r) continue;
      Int w = *find_entry(rows_[s], c);
      add_row_multiple(s, Int(-w * u), pr);
    }
    kill_row(r);
    col_alive_[c] = 0;
    col_rows_[c].clear();
    ++units_;
  }

  // unit pivots, always taking the currently shortest row; modified rows are requeued
  void unit_phase() {
    std::priority_queue<std::pair<size_t, int>, std::vector<std::pair<size_t, int>>, std::greater<>> pq;
    for (size_t r = 0; r < rows_.size(); ++r)
      if (alive_[r]) pq.push({rows_[r].size(), static_cast<int>(r)});
    queue_ = &pq;
    while (!pq.empty()) {
      auto [sz, r] = pq.top();
      pq.pop();
      if (!alive_[r] || rows_[r].size() != sz) continue;
      int bc = -1, bu = 0;
      size_t bcount = 0;
      for (const auto& e : rows_[r]) {
        if (e.val != 1 && e.val != -1) continue;
        size_t cnt = col_rows_[e.col].size();
        if (bc < 0 || cnt < bcount) {
          bc = e.col;
          bu = e.val == 1 ? 1 : -1;
          bcount = cnt;
        }
      }
      if (bc >= 0) eliminate_unit(r, bc, bu);
    }
    queue_ = nullptr;
  }

  std::pair<int, int> choose_general() {
    int br = -1, bc = -1;
    Int best;
    size_t bcost = 0;
    for (size_t r = 0; r < rows_.size(); ++r) {
      if (!alive_[r]) continue;
      for (const auto& e : rows_[r]) {
        Int a = abs(e.val);
        size_t cost = rows_[r].size() * col_rows_[e.col].size();
        if (br < 0 || a < best || (a == best && cost < bcost)) {
          br = static_cast<int>(r);
          bc = e.col;
          best = a;
          bcost = cost;
        }
      }
    }
    return {br, bc};
  }

  void general_pivot(int r, int c) {
    while (true) {
      Int p = *find_entry(rows_[r], c);
      // clear row r by column operations
      ColumnStep st{c, {}};
      SparseRow opsrow;
      for (const auto& e : rows_[r]) {
        if (e.col == c) continue;
        Int q = fdiv(e.val, p);
        if (q != 0) {
          st.ops.emplace_back(e.col, q);
          opsrow.push_back({e.col, q});
        }
      }
      if (!st.ops.empty()) {
        for (int s : rows_with(c)) {
          Int w = *find_entry(rows_[s], c);
          add_row_multiple(s, Int(-w), opsrow);
        }
        log_.steps.push_back(std::move(st));
      }
      // clear column c by row operations
      SparseRow pr = rows_[r];
      for (int s : rows_with(c)) {
        if (s == r) continue;
        Int w = *find_entry(rows_[s], c);
        Int q = fdiv(w, p);
        if (q != 0) add_row_multiple(s, Int(-q), pr);
      }
      int nr = -1, nc = -1;
      Int best;
      for (const auto& e : rows_[r])
        if (e.col != c && (nr < 0 || abs(e.val) < best)) {
          nr = r;
          nc = e.col;
          best = abs(e.val);
        }
      for (int s : rows_with(c)) {
        if (s == r) continue;
        Int a = abs(*find_entry(rows_[s], c));
        if (nr < 0 || a < best) {
          nr = s;
          nc = c;
          best = a;
        }
      }
      if (nr < 0) {
        piv_.emplace_back(c, abs(p));
        kill_row(r);
        col_alive_[c] = 0;
        col_rows_[c].clear();
        return;
      }
      r = nr;
      c = nc;
      if (best == 1) {
        Int v = *find_entry(rows_[r], c);
        eliminate_unit(r, c, v == 1 ? 1 : -1);
        return;
      }
    }
  }

  void fix_chain() {
    // keep only nontrivial pivots, ordered by size to limit work
    std::vector<std::pair<int, Int>> t;
    for (auto& x : piv_)
      if (x.second > 1) t.push_back(x);
    std::stable_sort(t.begin(), t.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    for (size_t i = 0; i < t.size(); ++i)
      for (size_t j = i + 1; j < t.size(); ++j) {
        Int a = t[i].second, b = t[j].second;
        if (b % a == 0) continue;
        // rows (a,0),(0,b): add row 2 to row 1, then column Euclid on (a,b)
        int A = t[i].first, B = t[j].first;
        Int x = a, y = b;
        while (y != 0) {
          Int q = fdiv(x, y);
          if (q != 0) log_.steps.push_back({B, {{A, q}}});
          x -= q * y;
          std::swap(x, y);
          std::swap(A, B);
        }
        Int g = abs(x);
        t[i] = {A, g};
        t[j] = {B, Int(a * b / g)};
      }
    piv_ = std::move(t);
  }

  int n_;
  std::vector<SparseRow> rows_;
  std::vector<char> alive_, col_alive_;
  std::vector<std::vector<int>> col_rows_;
  std::vector<std::pair<int, Int>> piv_;
  ColumnLog log_;
  int units_ = 0;
  std::priority_queue<std::pair<size_t, int>, std::vector<std::pair<size_t, int>>, std::greater<>>* queue_ = nullptr;
};

}  // namespace

SparseSmithResult sparse_smith(SparseMatrix M) {
  SparseEliminator e(std::move(M));
  return e.run();
}

// ---------------------------------------------------------------- groups

FgAbGroup FgAbGroup::from_relations(const SparseMatrix& rels) {
  FgAbGroup G;
  G.n_ = rels.cols;
  SparseMatrix copy = rels;
  auto res = sparse_smith(std::move(copy));
  for (auto& [c, d] : res.torsion) {
    G.cols_.push_back(c);
    G.mods_.push_back(d);
  }
  for (int c : res.free_cols) {
    G.cols_.push_back(c);
    G.mods_.push_back(0);
  }
  G.log_ = std::make_shared<const ColumnLog>(std::move(res.log));
  return G;
}

FgAbGroup FgAbGroup::from_relations(const IntMatrix& rels) { return from_relations(SparseMatrix::from_dense(rels)); }

FgAbGroup FgAbGroup::from_invariants(const IntVec& torsion, int free_rank) {
  SparseMatrix m;
  m.cols = static_cast<int>(torsion.size()) + free_rank;
  for (size_t i = 0; i < torsion.size(); ++i) m.add_row({{static_cast<int>(i), torsion[i]}});
  return from_relations(m);
}

FgAbGroup FgAbGroup::parse(const std::string& s) {
  IntVec tors;
  int free = 0;
  size_t i = 0;
  while ((i = s.find('(', i)) != std::string::npos) {
    size_t j = s.find(')', i);
    if (j == std::string::npos) throw std::invalid_argument("bad invariant string");
    std::string body = s.substr(i + 1, j - i - 1);
    size_t c = body.find(',');
    if (c == std::string::npos) throw std::invalid_argument("bad invariant pair");
    auto trim = [](std::string x) {
      x.erase(std::remove_if(x.begin(), x.end(), ::isspace), x.end());
      return x;
    };
    Int d(trim(body.substr(0, c)));
    long m = std::stol(trim(body.substr(c + 1)));
    if (d == 0)
      free += static_cast<int>(m);
    else
      for (long k = 0; k < m; ++k) tors.push_back(d);
    i = j + 1;
  }
  return from_invariants(tors, free);
}

int FgAbGroup::free_rank() const {
  return static_cast<int>(std::count_if(mods_.begin(), mods_.end(), [](const Int& d) { return d == 0; }));
}

IntVec FgAbGroup::torsion_invariants() const {
  IntVec out;
  for (const auto& d : mods_)
    if (d != 0) out.push_back(d);
  return out;
}

Int FgAbGroup::torsion_order() const {
  Int o = 1;
  for (const auto& d : mods_)
    if (d != 0) o *= d;
  return o;
}

Int FgAbGroup::order() const {
  if (!is_finite()) throw std::domain_error("group is infinite: " + to_string());
  return torsion_order();
}

IntVec FgAbGroup::coords(IntVec a) const {
  if (static_cast<int>(a.size()) != n_) throw std::invalid_argument("ambient size mismatch");
  log_->forward(a);
  IntVec out(mods_.size());
  for (size_t j = 0; j < mods_.size(); ++j) out[j] = mods_[j] != 0 ? fmod(a[cols_[j]], mods_[j]) : a[cols_[j]];
  return out;
}

IntVec FgAbGroup::coords_sparse(const std::vector<std::pair<int, Int>>& v) const {
  IntVec a(n_);
  for (const auto& [j, x] : v) a[j] += x;
  return coords(std::move(a));
}

IntVec FgAbGroup::reduce(IntVec x) const {
  for (size_t j = 0; j < mods_.size(); ++j)
    if (mods_[j] != 0) x[j] = fmod(x[j], mods_[j]);
  return x;
}

IntVec FgAbGroup::lift(int j) const {
  IntVec b(n_);
  b[cols_[j]] = 1;
  log_->backward(b);
  return b;
}

IntVec FgAbGroup::lift_vector(const IntVec& x) const {
  IntVec b(n_);
  for (size_t j = 0; j < mods_.size(); ++j) b[cols_[j]] = x[j];
  log_->backward(b);
  return b;
}

std::vector<std::pair<Int, int>> FgAbGroup::prime_power_counts() const {
  std::map<Int, int> cnt;
  for (const auto& d : mods_) {
    if (d == 0) continue;
    for (const auto& [p, e] : factor_integer(d)) cnt[ipow(p, e)]++;
  }
  return {cnt.begin(), cnt.end()};
}

std::string invariant_string(const std::vector<std::pair<Int, int>>& pp, int free_rank) {
  std::string s = "(0, " + std::to_string(free_rank) + ")";
  for (const auto& [d, m] : pp) s += ", (" + d.get_str() + ", " + std::to_string(m) + ")";
  return s;
}

std::string FgAbGroup::to_string() const { return invariant_string(prime_power_counts(), free_rank()); }

bool FgAbGroup::same_invariants(const FgAbGroup& o) const {
  return free_rank() == o.free_rank() && prime_power_counts() == o.prime_power_counts();
}

FgAbGroup primary_part(const FgAbGroup& G, const Int& p) {
  IntVec t;
  for (const auto& d : G.moduli())
    if (d != 0) {
      Int q = ipow(p, valuation(d, p));
      if (q > 1) t.push_back(q);
    }
  return FgAbGroup::from_invariants(t, 0);
}

FgAbGroup localize_away(const FgAbGroup& G, const std::vector<Int>& S) {
  IntVec t;
  for (const auto& d : G.moduli())
    if (d != 0) {
      Int q = strip_primes(d, S);
      if (q > 1) t.push_back(q);
    }
  return FgAbGroup::from_invariants(t, G.free_rank());
}

FgAbGroup direct_sum(const std::vector<FgAbGroup>& parts) {
  SparseMatrix m;
  int off = 0;
  for (const auto& G : parts) {
    for (int j = 0; j < G.num_generators(); ++j)
      if (G.modulus(j) != 0) m.add_row({{off + j, G.modulus(j)}});
    off += G.num_generators();
  }
  m.cols = off;
  return FgAbGroup::from_relations(m);
}

// ---------------------------------------------------------------- homomorphisms

AbHom::AbHom(FgAbGroup src, FgAbGroup tgt, IntMatrix m) : src_(std::move(src)), tgt_(std::move(tgt)), m_(std::move(m)) {
  if (m_.rows() != src_.num_generators() || m_.cols() != tgt_.num_generators())
    throw std::invalid_argument("homomorphism matrix has wrong shape");
  for (int i = 0; i < m_.rows(); ++i) m_.set_row(i, tgt_.reduce(m_.row(i)));
  if (!certificate()) throw std::domain_error("malformed homomorphism: relation not respected");
}

bool AbHom::certificate() const {
  for (int i = 0; i < m_.rows(); ++i) {
    const Int& d = src_.modulus(i);
    if (d == 0) continue;
    for (int j = 0; j < m_.cols(); ++j) {
      Int v = d * m_(i, j);
      const Int& e = tgt_.modulus(j);
      if (e == 0 ? v != 0 : v % e != 0) return false;
    }
  }
  return true;
}

AbHom AbHom::zero(const FgAbGroup& s, const FgAbGroup& t) {
  return AbHom(s, t, IntMatrix(s.num_generators(), t.num_generators()));
}

AbHom AbHom::identity(const FgAbGroup& g) { return AbHom(g, g, IntMatrix::identity(g.num_generators())); }

AbHom AbHom::scalar(const FgAbGroup& g, const Int& k) {
  IntMatrix m(g.num_generators(), g.num_generators());
  for (int i = 0; i < g.num_generators(); ++i) m(i, i) = k;
  return AbHom(g, g, m);
}

AbHom AbHom::from_sum(const FgAbGroup& sum, const std::vector<FgAbGroup>& parts, const std::vector<AbHom>& maps) {
  const FgAbGroup& tgt = maps.at(0).target();
  IntMatrix m(sum.num_generators(), tgt.num_generators());
  for (int i = 0; i < sum.num_generators(); ++i) {
    IntVec amb = sum.lift(i);  // concatenated canonical coordinates of the parts
    IntVec img(tgt.num_generators());
    int off = 0;
    for (size_t k = 0; k < parts.size(); ++k) {
      IntVec x(amb.begin() + off, amb.begin() + off + parts[k].num_generators());
      IntVec y = maps[k].apply(parts[k].reduce(x));
      for (size_t j = 0; j < y.size(); ++j) img[j] += y[j];
      off += parts[k].num_generators();
    }
    m.set_row(i, img);
  }
  return AbHom(sum, tgt, m);
}

AbHom AbHom::into_sum(const FgAbGroup& sum, const std::vector<FgAbGroup>& parts, const std::vector<AbHom>& maps) {
  const FgAbGroup& src = maps.at(0).source();
  IntMatrix m(src.num_generators(), sum.num_generators());
  for (int i = 0; i < src.num_generators(); ++i) {
    IntVec amb;
    for (size_t k = 0; k < parts.size(); ++k) {
      IntVec r = maps[k].matrix().row(i);
      amb.insert(amb.end(), r.begin(), r.end());
    }
    m.set_row(i, sum.coords(amb));
  }
  return AbHom(src, sum, m);
}

IntVec AbHom::apply(const IntVec& x) const {
  IntVec y(m_.cols());
  for (int i = 0; i < m_.rows(); ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < m_.cols(); ++j) y[j] += x[i] * m_(i, j);
  }
  return tgt_.reduce(y);
}

AbHom AbHom::operator*(const AbHom& f) const {
  IntMatrix m(f.m_.rows(), m_.cols());
  for (int i = 0; i < f.m_.rows(); ++i) m.set_row(i, apply(f.m_.row(i)));
  return AbHom(f.src_, tgt_, m);
}

AbHom AbHom::operator+(const AbHom& o) const { return AbHom(src_, tgt_, m_ + o.m_); }
AbHom AbHom::operator-(const AbHom& o) const { return AbHom(src_, tgt_, m_ - o.m_); }

AbHom AbHom::scaled(const Int& k) const {
  IntMatrix m = m_;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) *= k;
  return AbHom(src_, tgt_, m);
}

bool AbHom::operator==(const AbHom& o) const { return m_ == o.m_; }
bool AbHom::is_zero() const { return m_.is_zero(); }

namespace {

// lattice of x in Z^{k_s} with x*M == 0 in the target, returned as HNF basis rows
IntMatrix kernel_lattice(const IntMatrix& M, const FgAbGroup& tgt) {
  int ks = M.rows(), kt = M.cols();
  std::vector<int> tors;
  for (int j = 0; j < kt; ++j)
    if (tgt.modulus(j) != 0) tors.push_back(j);
  IntMatrix A(ks + static_cast<int>(tors.size()), kt);
  for (int i = 0; i < ks; ++i)
    for (int j = 0; j < kt; ++j) A(i, j) = M(i, j);
  for (size_t t = 0; t < tors.size(); ++t) A(ks + static_cast<int>(t), tors[t]) = tgt.modulus(tors[t]);
  HermiteForm hf = hnf(A);
  int z = A.rows() - hf.rank;
  IntMatrix K(z, ks);
  for (int r = 0; r < z; ++r)
    for (int i = 0; i < ks; ++i) K(r, i) = hf.U(hf.rank + r, i);
  HermiteForm hk = hnf(K);
  IntMatrix B(hk.rank, ks);
  for (int r = 0; r < hk.rank; ++r)
    for (int i = 0; i < ks; ++i) B(r, i) = hk.H(r, i);
  return B;
}

}  // namespace

std::pair<FgAbGroup, AbHom> AbHom::kernel() const {
  IntMatrix B = kernel_lattice(m_, tgt_);
  int k = B.rows(), ks = src_.num_generators();
  HermiteForm hb = hnf(B);  // B is already in HNF; U is identity up to row order
  SparseMatrix rels;
  rels.cols = k;
  for (int i = 0; i < ks; ++i) {
    if (src_.modulus(i) == 0) continue;
    IntVec v(ks);
    v[i] = src_.modulus(i);
    IntVec c;
    if (!in_row_lattice(hb, v, &c)) throw std::logic_error("kernel lattice misses source relations");
    SparseRow r;
    for (int j = 0; j < k; ++j)
      if (c[j] != 0) r.push_back({j, c[j]});
    rels.add_row(r);
  }
  FgAbGroup K = FgAbGroup::from_relations(rels);
  IntMatrix inc(K.num_generators(), ks);
  for (int j = 0; j < K.num_generators(); ++j) {
    IntVec l = K.lift(j);
    IntVec x(ks);
    for (int r = 0; r < k; ++r)
      if (l[r] != 0)
        for (int i = 0; i < ks; ++i) x[i] += l[r] * B(r, i);
    inc.set_row(j, x);
  }
  AbHom incl(K, src_, inc);
  return {K, incl};
}

std::pair<FgAbGroup, AbHom> AbHom::cokernel() const {
  int kt = tgt_.num_generators();
  SparseMatrix rels;
  rels.cols = kt;
  for (int j = 0; j < kt; ++j)
    if (tgt_.modulus(j) != 0) rels.add_row({{j, tgt_.modulus(j)}});
  for (int i = 0; i < m_.rows(); ++i) {
    SparseRow r;
    for (int j = 0; j < kt; ++j)
      if (m_(i, j) != 0) r.push_back({j, m_(i, j)});
    if (!r.empty()) rels.add_row(r);
  }
  FgAbGroup C = FgAbGroup::from_relations(rels);
  IntMatrix pr(kt, C.num_generators());
  for (int j = 0; j < kt; ++j) {
    IntVec e(kt);
    e[j] = 1;
    pr.set_row(j, C.coords(e));
  }
  AbHom proj(tgt_, C, pr);
  return {C, proj};
}

Int AbHom::image_order() const {
  if (src_.is_finite()) return src_.order() / kernel().first.order();
  return tgt_.order() / cokernel().first.order();
}

PreimageSolver::PreimageSolver(const AbHom& f) : f_(f) {
  const auto& M = f.matrix();
  const auto& tgt = f.target();
  int ks = M.rows(), kt = M.cols();
  std::vector<int> tors;
  for (int j = 0; j < kt; ++j)
    if (tgt.modulus(j) != 0) tors.push_back(j);
  IntMatrix A(ks + static_cast<int>(tors.size()), kt);
  for (int i = 0; i < ks; ++i)
    for (int j = 0; j < kt; ++j) A(i, j) = M(i, j);
  for (size_t t = 0; t < tors.size(); ++t) A(ks + static_cast<int>(t), tors[t]) = tgt.modulus(tors[t]);
  hf_ = hnf(A);
}

bool PreimageSolver::solve(const IntVec& y, IntVec& x) const {
  IntVec c;
  if (!in_row_lattice(hf_, y, &c)) return false;
  x.assign(c.begin(), c.begin() + f_.source().num_generators());
  x = f_.source().reduce(x);
  return true;
}

AbHom AbHom::induced_on(const AbHom& proj) const {
  const FgAbGroup& Q = proj.target();
  IntMatrix m(Q.num_generators(), Q.num_generators());
  PreimageSolver pre(proj);
  for (int j = 0; j < Q.num_generators(); ++j) {
    IntVec e(Q.num_generators());
    e[j] = 1;
    IntVec x;
    if (!pre.solve(e, x)) throw std::domain_error("projection is not surjective");
    m.set_row(j, proj.apply(apply(x)));
  }
  return AbHom(Q, Q, m);
}

AbHom AbHom::restricted_to(const AbHom& incl) const {
  const FgAbGroup& K = incl.source();
  IntMatrix m(K.num_generators(), K.num_generators());
  PreimageSolver pre(incl);
  for (int j = 0; j < K.num_generators(); ++j) {
    IntVec y = apply(incl.matrix().row(j));
    IntVec x;
    if (!pre.solve(y, x)) throw std::domain_error("subgroup is not stable");
    m.set_row(j, x);
  }
  return AbHom(K, K, m);
}

AbHom AbHom::corestricted(const AbHom& incl) const {
  const FgAbGroup& K = incl.source();
  IntMatrix m(src_.num_generators(), K.num_generators());
  PreimageSolver pre(incl);
  for (int j = 0; j < src_.num_generators(); ++j) {
    IntVec x;
    if (!pre.solve(m_.row(j), x)) throw std::domain_error("image does not lie in the subgroup");
    m.set_row(j, x);
  }
  return AbHom(src_, K, m);
}

}  // namespace tjl

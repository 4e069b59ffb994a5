#include "tjl/bianchi.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "tjl/data.hpp"

namespace tjl {

using json = nlohmann::json;

Mat2 mat_mul(const FieldSpec& F, const Mat2& x, const Mat2& y) {
  return {F.mul(x.a, y.a) + F.mul(x.b, y.c), F.mul(x.a, y.b) + F.mul(x.b, y.d),
          F.mul(x.c, y.a) + F.mul(x.d, y.c), F.mul(x.c, y.b) + F.mul(x.d, y.d)};
}

Mat2 mat_adj(const Mat2& m) { return {m.d, -m.b, -m.c, m.a}; }

QuadInt mat_det(const FieldSpec& F, const Mat2& m) { return F.mul(m.a, m.d) - F.mul(m.b, m.c); }

bool is_scalar(const Mat2& m) { return m.b.is_zero() && m.c.is_zero() && m.a == m.d; }

bool same_projective(const FieldSpec& F, const Mat2& x, const Mat2& y) {
  for (const auto& u : F.units())
    if (x.a == F.mul(u, y.a) && x.b == F.mul(u, y.b) && x.c == F.mul(u, y.c) && x.d == F.mul(u, y.d))
      return true;
  return false;
}

Mat2 mat_pow(const FieldSpec& F, Mat2 m, long e) {
  if (e < 0) {
    m = mat_adj(m);
    e = -e;
  }
  Mat2 r{QuadInt(1), QuadInt(0), QuadInt(0), QuadInt(1)};
  while (e) {
    if (e & 1) r = mat_mul(F, r, m);
    m = mat_mul(F, m, m);
    e >>= 1;
  }
  return r;
}

std::string to_string(const Mat2& m) {
  return "[[" + to_string(m.a) + "," + to_string(m.b) + "],[" + to_string(m.c) + "," + to_string(m.d) + "]]";
}

Word word_inverse(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (auto& l : r) l.exp = -l.exp;
  return r;
}

Word word_simplify(const Word& w) {
  Word r;
  for (const auto& l : w) {
    if (l.exp == 0) continue;
    if (!r.empty() && r.back().gen == l.gen) {
      r.back().exp += l.exp;
      if (r.back().exp == 0) r.pop_back();
    } else {
      r.push_back(l);
    }
  }
  return r;
}

Word word_expand(const Word& w) {
  Word r;
  for (const auto& l : w)
    for (long k = 0; k < std::labs(l.exp); ++k) r.push_back({l.gen, l.exp > 0 ? 1 : -1});
  return r;
}

// ---------------------------------------------------------------- presentations

Mat2 GroupPresentation::eval(const Word& w) const {
  Mat2 r{QuadInt(1), QuadInt(0), QuadInt(0), QuadInt(1)};
  for (const auto& l : w) r = mat_mul(field, r, mat_pow(field, generators.at(l.gen), l.exp));
  return r;
}

void GroupPresentation::validate() const {
  if (field.class_number != 1) throw std::invalid_argument("class number one required");
  for (size_t i = 0; i < generators.size(); ++i)
    if (!field.is_unit(mat_det(field, generators[i])))
      throw std::invalid_argument("generator " + names[i] + " has non-unit determinant");
  for (size_t i = 0; i < relators.size(); ++i) {
    for (const auto& l : relators[i])
      if (l.gen < 0 || l.gen >= static_cast<int>(generators.size()))
        throw std::invalid_argument("relator refers to unknown generator");
    if (!is_scalar(eval(relators[i])))
      throw std::invalid_argument("relator " + std::to_string(i + 1) + " does not evaluate to a scalar");
  }
}

std::string GroupPresentation::to_json() const {
  // fixed key order and layout, so the text is reproducible byte for byte
  std::ostringstream os;
  os << "{\n  \"schema\": 1,\n  \"d\": " << field.d << ",\n  \"generators\": [\n";
  for (size_t i = 0; i < generators.size(); ++i) {
    const auto& m = generators[i];
    os << "    {\"name\": \"" << names[i] << "\", \"matrix\": [\"" << to_string(m.a) << "\", \"" << to_string(m.b)
       << "\", \"" << to_string(m.c) << "\", \"" << to_string(m.d) << "\"]}" << (i + 1 < generators.size() ? "," : "")
       << "\n";
  }
  os << "  ],\n  \"relators\": [\n";
  for (size_t i = 0; i < relators.size(); ++i) {
    os << "    [";
    Word e = word_expand(relators[i]);
    for (size_t j = 0; j < e.size(); ++j) os << (j ? ", " : "") << (e[j].exp > 0 ? e[j].gen + 1 : -(e[j].gen + 1));
    os << "]" << (i + 1 < relators.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

std::string GroupPresentation::hash() const { return hex32(crc32_of(to_json())); }

std::string GroupPresentation::abelianization() const {
  SparseMatrix m;
  m.cols = static_cast<int>(generators.size());
  for (const auto& r : relators) {
    std::vector<std::pair<int, long>> e;
    for (const auto& l : r) e.emplace_back(l.gen, l.exp);
    m.add_row(SparseMatrix::make_row(e));
  }
  return FgAbGroup::from_relations(m).to_string();
}

void GroupPresentation::find_elementary() {
  const FieldSpec& F = field;
  auto locate = [&](const Mat2& target, int& idx, int& sign) {
    idx = -1;
    for (size_t i = 0; i < generators.size(); ++i) {
      if (same_projective(F, generators[i], target)) {
        idx = static_cast<int>(i);
        sign = 1;
        return;
      }
      if (same_projective(F, mat_adj(generators[i]), target)) {
        idx = static_cast<int>(i);
        sign = -1;
        return;
      }
    }
  };
  QuadInt o(1), z(0);
  locate({z, QuadInt(-1), o, z}, elem_a, sign_a);
  locate({o, o, z, o}, elem_t, sign_t);
  locate({o, QuadInt(0, 1), z, o}, elem_u, sign_u);
  diag.clear();
  for (const auto& e : F.units()) {
    if (e == o) continue;
    int idx, sg;
    locate({e, z, z, o}, idx, sg);
    if (idx >= 0) diag.push_back({e, Letter{idx, sg}});
  }
}

GroupPresentation presentation_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed presentation: ") + e.what());
  }
  GroupPresentation P;
  try {
    P.field = FieldSpec::make(j.at("d").get<long>());
    for (const auto& g : j.at("generators")) {
      P.names.push_back(g.at("name").get<std::string>());
      const auto& m = g.at("matrix");
      if (m.size() != 4) throw std::invalid_argument("generator matrix needs four entries");
      P.generators.push_back({parse_quad(m[0].get<std::string>()), parse_quad(m[1].get<std::string>()),
                              parse_quad(m[2].get<std::string>()), parse_quad(m[3].get<std::string>())});
    }
    for (const auto& r : j.at("relators")) {
      Word w;
      for (const auto& x : r) {
        int v = x.get<int>();
        if (v == 0) throw std::invalid_argument("relator index 0");
        w.push_back({std::abs(v) - 1, v > 0 ? 1 : -1});
      }
      P.relators.push_back(w);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed presentation: ") + e.what());
  }
  P.validate();
  P.find_elementary();
  return P;
}

GroupPresentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open presentation: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return presentation_from_json(ss.str());
}

bool has_bundled_presentation(long d) { return data_file_exists("presentation_d" + std::to_string(d) + ".json"); }

GroupPresentation bundled_presentation(long d) {
  std::string name = "presentation_d" + std::to_string(d) + ".json";
  if (!data_file_exists(name)) throw std::runtime_error("no presentation for d = " + std::to_string(d));
  return presentation_from_json(data_file(name));
}

// ---------------------------------------------------------------- words

Word word_for_matrix(const GroupPresentation& P, const Mat2& g) {
  const FieldSpec& F = P.field;
  if (!F.euclidean) throw std::domain_error("field is not norm-Euclidean");
  if (!F.is_unit(mat_det(F, g))) throw std::domain_error("matrix is not invertible");
  for (size_t i = 0; i < P.generators.size(); ++i) {
    if (same_projective(F, g, P.generators[i])) return {{static_cast<int>(i), 1}};
    if (same_projective(F, g, mat_adj(P.generators[i]))) return {{static_cast<int>(i), -1}};
  }
  if (P.elem_a < 0 || P.elem_t < 0 || P.elem_u < 0) throw std::domain_error("presentation lacks elementary generators");
  Word w;  // right multipliers
  Mat2 cur = g;
  auto translate = [&](Word& out, const QuadInt& x) {
    // [[1, x],[0,1]] = t^a u^b for x = a + b theta
    if (x.a != 0) out.push_back({P.elem_t, P.sign_t * x.a.get_si()});
    if (x.b != 0) out.push_back({P.elem_u, P.sign_u * x.b.get_si()});
  };
  while (!cur.c.is_zero()) {
    auto [q, r] = F.divmod(cur.d, cur.c);
    if (!q.is_zero()) {
      cur.b -= F.mul(q, cur.a);
      cur.d = r;
      translate(w, -q);
    }
    Mat2 nx{cur.b, -cur.a, cur.d, -cur.c};
    cur = nx;
    w.push_back({P.elem_a, P.sign_a});
  }
  QuadInt eps = F.exact_div(cur.a, cur.d);
  QuadInt x = F.exact_div(cur.b, cur.d);
  Word out;
  if (eps != QuadInt(1)) {
    auto it = std::find_if(P.diag.begin(), P.diag.end(), [&](const auto& e) { return e.first == eps; });
    if (it == P.diag.end()) throw std::domain_error("presentation lacks diagonal unit generator");
    out.push_back(it->second);
  }
  translate(out, F.mul(x, F.unit_inverse(eps)));
  Word wi = word_inverse(w);
  out.insert(out.end(), wi.begin(), wi.end());
  return word_simplify(out);
}

// ---------------------------------------------------------------- cosets

CosetTable::CosetTable(const GroupPresentation& P, const QuadIdeal& n) {
  P1_ = std::make_shared<ProjLine>(P.field, n);
  npts_ = P1_->size();
  ng_ = static_cast<int>(P.generators.size());
  perm_.assign(ng_, std::vector<long>(npts_));
  inv_.assign(ng_, std::vector<long>(npts_, -1));
  for (int s = 0; s < ng_; ++s) {
    const Mat2& m = P.generators[s];
    auto mc = P1_->reduce_matrix(m.a, m.b, m.c, m.d);
    for (long p = 0; p < npts_; ++p) {
      long q = P1_->act(p, mc);
      perm_[s][p] = q;
      if (inv_[s][q] >= 0) throw std::domain_error("generator does not act by a permutation");
      inv_[s][q] = p;
    }
  }
  // breadth-first spanning tree from the base point
  parent_.assign(npts_, -2);
  parent_letter_.assign(npts_, {0, 0});
  tree_.assign(static_cast<size_t>(npts_) * ng_, 0);
  std::deque<long> queue{0};
  parent_[0] = -1;
  while (!queue.empty()) {
    long p = queue.front();
    queue.pop_front();
    for (int s = 0; s < ng_; ++s)
      for (int e : {1, -1}) {
        long q = e > 0 ? perm_[s][p] : inv_[s][p];
        if (parent_[q] != -2) continue;
        parent_[q] = p;
        parent_letter_[q] = {s, e};
        tree_[(e > 0 ? p : q) * ng_ + s] = 1;
        queue.push_back(q);
      }
  }
  for (long p = 0; p < npts_; ++p)
    if (parent_[p] == -2) throw std::domain_error("coset graph is not connected");
  cyc_.resize(ng_);
  for (int s = 0; s < ng_; ++s) {
    auto& C = cyc_[s];
    C.id.assign(npts_, -1);
    C.pos.assign(npts_, -1);
    for (long p = 0; p < npts_; ++p) {
      if (C.id[p] >= 0) continue;
      std::vector<long> pts;
      long q = p;
      do {
        C.id[q] = static_cast<long>(C.pts.size());
        C.pos[q] = static_cast<long>(pts.size());
        pts.push_back(q);
        q = perm_[s][q];
      } while (q != p);
      C.pts.push_back(std::move(pts));
    }
  }
}

long CosetTable::act(long p, int s, long e) const {
  const auto& C = cyc_[s];
  const auto& pts = C.pts[C.id[p]];
  long L = static_cast<long>(pts.size());
  long k = ((C.pos[p] + e) % L + L) % L;
  return pts[k];
}

long CosetTable::act_word(long p, const Word& w) const {
  for (const auto& l : w) p = act(p, l.gen, l.exp);
  return p;
}

Word CosetTable::transversal(long p) const {
  Word w;
  while (parent_[p] >= 0) {
    w.push_back(parent_letter_[p]);
    p = parent_[p];
  }
  std::reverse(w.begin(), w.end());
  return w;
}

// ---------------------------------------------------------------- homology

HomologyData::HomologyData(std::shared_ptr<const GroupPresentation> P, const QuadIdeal& n) : P_(std::move(P)), n_(n) {
  T_ = std::make_shared<CosetTable>(*P_, n);
  int ng = T_->num_gens();
  long np = T_->size();
  col_.assign(static_cast<size_t>(np) * ng, -1);
  for (long p = 0; p < np; ++p)
    for (int s = 0; s < ng; ++s)
      if (!T_->is_tree_edge(p, s)) {
        col_[p * ng + s] = static_cast<int>(col_pt_.size());
        col_pt_.push_back(p);
        col_gen_.push_back(s);
      }
  cyc_cols_.resize(ng);
  for (int s = 0; s < ng; ++s) {
    const auto& C = T_->cycles(s);
    for (const auto& pts : C.pts) {
      std::vector<int> cols;
      for (long p : pts) cols.push_back(col_[p * ng + s]);
      cyc_cols_[s].push_back(std::move(cols));
    }
  }
  rels_.cols = static_cast<int>(col_pt_.size());
  std::vector<SparseRow> rows;
  for (const auto& r : P_->relators)
    for (long p = 0; p < np; ++p) {
      long end;
      AmbientVec v = rewrite(p, r, &end);
      if (end != p) throw std::domain_error("relator acts nontrivially on cosets");
      SparseRow row;
      for (auto& [c, x] : v) row.push_back({c, Int(x)});
      if (row.empty()) continue;
      if (row[0].val < 0)
        for (auto& e : row) e.val = -e.val;
      rows.push_back(std::move(row));
    }
  auto key_less = [](const SparseRow& x, const SparseRow& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    for (size_t i = 0; i < x.size(); ++i) {
      if (x[i].col != y[i].col) return x[i].col < y[i].col;
      if (x[i].val != y[i].val) return x[i].val < y[i].val;
    }
    return false;
  };
  auto key_eq = [](const SparseRow& x, const SparseRow& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (x[i].col != y[i].col || x[i].val != y[i].val) return false;
    return true;
  };
  std::sort(rows.begin(), rows.end(), key_less);
  rows.erase(std::unique(rows.begin(), rows.end(), key_eq), rows.end());
  rels_.rows = std::move(rows);
  H_ = FgAbGroup::from_relations(rels_);
}

AmbientVec HomologyData::rewrite(long start, const Word& w, long* end) const {
  std::vector<std::pair<int, long>> acc;
  int ng = T_->num_gens();
  long cur = start;
  for (const auto& l : w) {
    const auto& C = T_->cycles(l.gen);
    long cid = C.id[cur];
    const auto& pts = C.pts[cid];
    const auto& cols = cyc_cols_[l.gen][cid];
    long L = static_cast<long>(pts.size());
    long k = C.pos[cur];
    long m = std::labs(l.exp);
    long full = m / L, rem = m % L;
    long sign = l.exp > 0 ? 1 : -1;
    if (full > 0)
      for (int c : cols)
        if (c >= 0) acc.emplace_back(c, sign * full);
    if (l.exp > 0) {
      for (long i = 0; i < rem; ++i) {
        int c = cols[(k + i) % L];
        if (c >= 0) acc.emplace_back(c, 1);
      }
      cur = pts[(k + m) % L];
    } else {
      for (long i = 1; i <= rem; ++i) {
        int c = cols[((k - i) % L + L) % L];
        if (c >= 0) acc.emplace_back(c, -1);
      }
      cur = pts[((k - m) % L + L) % L];
    }
    (void)ng;
  }
  if (end) *end = cur;
  std::sort(acc.begin(), acc.end());
  AmbientVec out;
  for (size_t i = 0; i < acc.size();) {
    long s = 0;
    size_t j = i;
    while (j < acc.size() && acc[j].first == acc[i].first) s += acc[j++].second;
    if (s != 0) out.emplace_back(acc[i].first, s);
    i = j;
  }
  return out;
}

bool HomologyData::in_gamma0(const Mat2& g) const { return field().divides(n_.gen, g.c); }

AmbientVec HomologyData::reduce_ambient(const Mat2& g) const {
  if (!in_gamma0(g)) throw std::domain_error("matrix is not in Gamma_0 of the level");
  Word w = word_for_matrix(*P_, g);
  long end;
  AmbientVec v = rewrite(T_->proj_line().base(), w, &end);
  if (end != T_->proj_line().base()) throw std::logic_error("word does not fix the base coset");
  return v;
}

IntVec HomologyData::coords(const AmbientVec& v) const {
  IntVec a(col_pt_.size());
  for (const auto& [c, x] : v) a[c] += x;
  return H_.coords(std::move(a));
}

IntVec HomologyData::reduce(const Mat2& g) const { return coords(reduce_ambient(g)); }

Mat2 HomologyData::schreier_matrix(int col) const {
  long p = col_pt_[col];
  int s = col_gen_[col];
  Word w = T_->transversal(p);
  w.push_back({s, 1});
  Word back = word_inverse(T_->transversal(T_->act(p, s, 1)));
  w.insert(w.end(), back.begin(), back.end());
  return P_->eval(w);
}

}  // namespace tjl

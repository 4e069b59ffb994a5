#include "tjl/hecke.hpp"

#include <exception>
#include <stdexcept>
#include <unordered_map>

namespace tjl {

std::shared_ptr<const HomologyData> HomologyCache::get(const QuadIdeal& n) {
  std::string key = to_string(n.gen);
  std::shared_ptr<std::once_flag> flag;
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto& f = flags_[key];
    if (!f) f = std::make_shared<std::once_flag>();
    flag = f;
  }
  std::call_once(*flag, [&] {
    auto H = std::make_shared<const HomologyData>(P_, n);
    std::lock_guard<std::mutex> lk(mu_);
    data_[key] = H;
  });
  std::lock_guard<std::mutex> lk(mu_);
  return data_.at(key);
}

std::shared_ptr<const HomologyData> HomologyCache::get(const std::string& level) {
  return get(parse_level(P_->field, level));
}

namespace {

AmbientVec merge(std::vector<std::pair<int, long>>& acc) {
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

Mat2 div_entries(const FieldSpec& F, const Mat2& m, const QuadInt& x) {
  return {F.exact_div(m.a, x), F.exact_div(m.b, x), F.exact_div(m.c, x), F.exact_div(m.d, x)};
}

const QuadInt& prime_gen_check(const FieldSpec& F, const QuadInt& q) {
  if (F.is_unit(q) || q.is_zero()) throw std::invalid_argument("not a prime element: " + to_string(q));
  return q;
}

}  // namespace

std::vector<AmbientVec> column_images(const HomologyData& S, const std::vector<int>& cols, const ElementMap& f,
                                      Exec ex) {
  std::vector<AmbientVec> out(cols.size());
  long n = static_cast<long>(cols.size());
  if (ex == Exec::serial) {
    for (long i = 0; i < n; ++i) out[i] = f(S.schreier_matrix(cols[i]));
    return out;
  }
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = f(S.schreier_matrix(cols[i]));
    } catch (...) {
#pragma omp critical(tjl_column_images)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

AbHom map_from_elements(const HomologyData& S, const HomologyData& T, const ElementMap& f, Exec ex) {
  const FgAbGroup& G = S.H1();
  int k = G.num_generators();
  int ns = S.num_schreier();
  std::vector<IntVec> lifts(k);
  std::vector<int> pos(ns, -1);
  std::vector<int> cols;
  for (int j = 0; j < k; ++j) {
    lifts[j] = G.lift(j);
    for (int c = 0; c < ns; ++c)
      if (lifts[j][c] != 0 && pos[c] < 0) {
        pos[c] = static_cast<int>(cols.size());
        cols.push_back(c);
      }
  }
  std::vector<AmbientVec> img = column_images(S, cols, f, ex);
  IntMatrix m(k, T.H1().num_generators());
  for (int j = 0; j < k; ++j) {
    IntVec amb(T.num_schreier());
    for (int c = 0; c < ns; ++c) {
      if (lifts[j][c] == 0) continue;
      for (const auto& [tc, x] : img[pos[c]]) amb[tc] += lifts[j][c] * x;
    }
    m.set_row(j, T.H1().coords(std::move(amb)));
  }
  return AbHom(G, T.H1(), m);
}

// ---------------------------------------------------------------- Hecke operators

HeckeContext::HeckeContext(const HomologyData& H, const QuadInt& pi, bool upper_only)
    : H_(H), pi_(pi), k_(H.field(), pi) {
  long q = k_.size();
  index_.assign(q + 1, -1);
  for (long code = 0; code < q; ++code) {
    index_[code] = static_cast<int>(reps_.size());
    reps_.push_back({QuadInt(1), k_.lift(code), QuadInt(0), pi});
  }
  if (!upper_only) {
    index_[q] = static_cast<int>(reps_.size());
    reps_.push_back({pi, QuadInt(0), QuadInt(0), QuadInt(1)});
  }
}

int HeckeContext::target(int i, const Mat2& g) const {
  Mat2 m = mat_mul(H_.field(), reps_[i], g);
  long x = k_.reduce(m.a), y = k_.reduce(m.b);
  if (x == 0 && y == 0) {
    x = k_.reduce(m.c);
    y = k_.reduce(m.d);
  }
  int j = x == 0 ? index_[k_.size()] : index_[k_.mul(y, k_.inv(x))];
  if (j < 0) throw std::logic_error("coset outside the double coset");
  return j;
}

Mat2 HeckeContext::conjugate(int i, const Mat2& g, int j) const {
  const FieldSpec& F = H_.field();
  return div_entries(F, mat_mul(F, mat_mul(F, reps_[i], g), mat_adj(reps_[j])), pi_);
}

AmbientVec HeckeContext::image(const Mat2& g) const {
  std::vector<std::pair<int, long>> acc;
  for (int i = 0; i < static_cast<int>(reps_.size()); ++i) {
    AmbientVec v = H_.reduce_ambient(conjugate(i, g, target(i, g)));
    acc.insert(acc.end(), v.begin(), v.end());
  }
  return merge(acc);
}

AbHom hecke_T(const HomologyData& H, const QuadInt& q, Exec ex) {
  const FieldSpec& F = H.field();
  prime_gen_check(F, q);
  if (F.divides(q, H.level().gen)) throw std::invalid_argument("T_q needs q prime to the level; use U_q");
  HeckeContext ctx(H, q, false);
  return map_from_elements(H, H, [&](const Mat2& g) { return ctx.image(g); }, ex);
}

AbHom hecke_U(const HomologyData& H, const QuadInt& q, Exec ex) {
  const FieldSpec& F = H.field();
  prime_gen_check(F, q);
  if (!F.divides(q, H.level().gen)) throw std::invalid_argument("U_q needs q dividing the level");
  HeckeContext ctx(H, q, true);
  return map_from_elements(H, H, [&](const Mat2& g) { return ctx.image(g); }, ex);
}

namespace {
// s, t with s*x + t*y = 1
void unit_bezout(const FieldSpec& F, const QuadInt& x, const QuadInt& y, QuadInt& s, QuadInt& t) {
  QuadInt g = F.xgcd(x, y, s, t);
  if (!F.is_unit(g)) throw std::invalid_argument("elements are not coprime");
  QuadInt gi = F.unit_inverse(g);
  s = F.mul(s, gi);
  t = F.mul(t, gi);
}
}  // namespace

AbHom atkin_lehner(const HomologyData& H, const QuadInt& q, Exec ex) {
  const FieldSpec& F = H.field();
  prime_gen_check(F, q);
  const QuadInt& nu = H.level().gen;
  if (!F.divides(q, nu)) throw std::invalid_argument("w_q needs q dividing the level");
  QuadInt mu = F.exact_div(nu, q);
  if (F.divides(q, mu)) throw std::invalid_argument("w_q needs q to divide the level exactly once");
  QuadInt s, t;
  unit_bezout(F, q, mu, s, t);
  Mat2 W{q, -t, nu, F.mul(q, s)};
  Mat2 Wa = mat_adj(W);
  return map_from_elements(
      H, H, [&](const Mat2& g) { return H.reduce_ambient(div_entries(F, mat_mul(F, mat_mul(F, W, g), Wa), q)); }, ex);
}

// ---------------------------------------------------------------- degeneracy maps

namespace {
void check_levels(const HomologyData& Hn, const HomologyData& Hm, const QuadInt& q) {
  const FieldSpec& F = Hn.field();
  if (!F.divides(q, Hn.level().gen)) throw std::invalid_argument("q does not divide the level");
  if (!(make_ideal(F, F.exact_div(Hn.level().gen, q)) == Hm.level()))
    throw std::invalid_argument("level mismatch for degeneracy map");
}
}  // namespace

AbHom degeneracy_push1(const HomologyData& Hn, const HomologyData& Hm, Exec ex) {
  if (!ideal_divides(Hn.field(), Hm.level(), Hn.level())) throw std::invalid_argument("level mismatch");
  return map_from_elements(Hn, Hm, [&](const Mat2& g) { return Hm.reduce_ambient(g); }, ex);
}

AbHom degeneracy_push2(const HomologyData& Hn, const HomologyData& Hm, const QuadInt& q, Exec ex) {
  check_levels(Hn, Hm, q);
  const FieldSpec& F = Hn.field();
  return map_from_elements(
      Hn, Hm,
      [&](const Mat2& g) {
        return Hm.reduce_ambient({g.a, F.mul(q, g.b), F.exact_div(g.c, q), g.d});
      },
      ex);
}

AbHom degeneracy_transfer1(const HomologyData& Hm, const HomologyData& Hn, const QuadInt& q, Exec ex) {
  check_levels(Hn, Hm, q);
  const FieldSpec& F = Hn.field();
  const QuadInt& mu = Hm.level().gen;
  const ProjLine& P1 = Hn.cosets().proj_line();
  ResidueRing k(F, q);
  std::vector<Mat2> reps;
  for (long code = 0; code < k.size(); ++code) reps.push_back({1, 0, F.mul(mu, k.lift(code)), 1});
  if (!F.divides(q, mu)) {
    QuadInt s, t;
    unit_bezout(F, q, mu, s, t);
    reps.push_back({s, -t, mu, q});
  }
  std::unordered_map<long, int> where;
  for (int i = 0; i < static_cast<int>(reps.size()); ++i) where[P1.index(reps[i].c, reps[i].d)] = i;
  if (static_cast<long>(where.size()) * Hm.cosets().size() != Hn.cosets().size())
    throw std::logic_error("transfer representatives do not cover the cosets");
  return map_from_elements(
      Hm, Hn,
      [&](const Mat2& g) {
        std::vector<std::pair<int, long>> acc;
        for (const auto& r : reps) {
          Mat2 rg = mat_mul(F, r, g);
          const Mat2& rj = reps[where.at(P1.index(rg.c, rg.d))];
          AmbientVec v = Hn.reduce_ambient(mat_mul(F, rg, mat_adj(rj)));
          acc.insert(acc.end(), v.begin(), v.end());
        }
        return merge(acc);
      },
      ex);
}

AbHom degeneracy_transfer2(const HomologyData& Hm, const HomologyData& Hn, const QuadInt& q, Exec ex) {
  check_levels(Hn, Hm, q);
  const FieldSpec& F = Hn.field();
  const QuadInt& mu = Hm.level().gen;
  ProjLine Pq(F, make_ideal(F, q));
  ResidueRing k(F, q);
  std::vector<Mat2> reps;
  for (long code = 0; code < k.size(); ++code) reps.push_back({1, k.lift(code), 0, 1});
  if (!F.divides(q, mu)) {
    QuadInt s, t;
    unit_bezout(F, q, mu, s, t);
    reps.push_back({q, -t, mu, s});
  }
  std::unordered_map<long, int> where;
  for (int i = 0; i < static_cast<int>(reps.size()); ++i) where[Pq.index(reps[i].a, reps[i].b)] = i;
  if (static_cast<long>(where.size()) * Hm.cosets().size() != Hn.cosets().size())
    throw std::logic_error("transfer representatives do not cover the cosets");
  return map_from_elements(
      Hm, Hn,
      [&](const Mat2& g) {
        std::vector<std::pair<int, long>> acc;
        for (const auto& s : reps) {
          Mat2 sg = mat_mul(F, s, g);
          const Mat2& sj = reps[where.at(Pq.index(sg.a, sg.b))];
          Mat2 h = mat_mul(F, sg, mat_adj(sj));
          AmbientVec v = Hn.reduce_ambient({h.a, F.exact_div(h.b, q), F.mul(q, h.c), h.d});
          acc.insert(acc.end(), v.begin(), v.end());
        }
        return merge(acc);
      },
      ex);
}

Degeneracy degeneracy(const HomologyData& Hn, const HomologyData& Hm, const QuadInt& q, Exec ex) {
  Degeneracy D;
  D.pair = direct_sum({Hm.H1(), Hm.H1()});
  D.push1 = degeneracy_push1(Hn, Hm, ex);
  D.push2 = degeneracy_push2(Hn, Hm, q, ex);
  D.transfer1 = degeneracy_transfer1(Hm, Hn, q, ex);
  D.transfer2 = degeneracy_transfer2(Hm, Hn, q, ex);
  return D;
}

AbHom Degeneracy::push() const {
  const FgAbGroup& M = push1.target();
  return AbHom::into_sum(pair, {M, M}, {push1, push2});
}

AbHom Degeneracy::transfer() const {
  const FgAbGroup& M = transfer1.source();
  return AbHom::from_sum(pair, {M, M}, {transfer1, transfer2});
}

AbHom composite_expected(const Degeneracy& D, const AbHom& Tq, const Int& Nq) {
  const FgAbGroup& M = Tq.source();
  AbHom s = AbHom::scalar(M, Nq + 1);
  AbHom first = AbHom::into_sum(D.pair, {M, M}, {s, Tq});
  AbHom second = AbHom::into_sum(D.pair, {M, M}, {Tq, s});
  return AbHom::from_sum(D.pair, {M, M}, {first, second});
}

bool commute(const AbHom& f, const AbHom& g) { return f * g == g * f; }

}  // namespace tjl

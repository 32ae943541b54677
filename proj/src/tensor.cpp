#include "relcont/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace relcont {

namespace {

[[noreturn]] void fail(const char* msg) { throw std::invalid_argument(msg); }

void check_same_shape(const TensorValue& a, const TensorValue& b) {
  if (a.dim() != b.dim() || a.slots() != b.slots()) fail("tensor shape mismatch");
}

std::size_t factorial(std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 2; i <= k; ++i) r *= i;
  return r;
}

void check_uniform(const TensorValue& t, Slot s, const char* msg) {
  for (Slot x : t.slots())
    if (x != s) fail(msg);
}

}  // namespace

TensorValue& TensorValue::operator+=(const TensorValue& o) {
  check_same_shape(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

TensorValue& TensorValue::operator-=(const TensorValue& o) {
  check_same_shape(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

TensorValue scalar_value(std::size_t dim, double v) {
  TensorValue t(dim);
  t[0] = v;
  return t;
}

TensorValue delta_tensor(std::size_t dim) {
  TensorValue t(dim, {Slot::Up, Slot::Down});
  for (std::size_t i = 0; i < dim; ++i) t(i, i) = 1.0;
  return t;
}

TensorValue basis_vector(std::size_t dim, std::size_t i) {
  TensorValue t(dim, {Slot::Up});
  t(i) = 1.0;
  return t;
}

std::vector<Slot> slots_of(std::initializer_list<Slot> s) { return std::vector<Slot>(s); }

bool lu_invert(const double* a, std::size_t n, double* inv, double* det) {
  std::vector<double> lu(a, a + n * n);
  std::vector<std::size_t> piv(n);
  std::iota(piv.begin(), piv.end(), 0);
  double d = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    double bv = std::fabs(lu[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      double v = std::fabs(lu[r * n + col]);
      if (v > bv) {
        bv = v;
        best = r;
      }
    }
    if (bv == 0.0) {
      if (det) *det = 0.0;
      return false;
    }
    if (best != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(lu[col * n + c], lu[best * n + c]);
      std::swap(piv[col], piv[best]);
      d = -d;
    }
    d *= lu[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = lu[r * n + col] / lu[col * n + col];
      lu[r * n + col] = f;
      for (std::size_t c = col + 1; c < n; ++c) lu[r * n + c] -= f * lu[col * n + c];
    }
  }
  if (det) *det = d;
  if (!inv) return true;
  // solve LU x = P e_k column by column
  std::vector<double> col(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t r = 0; r < n; ++r) col[r] = piv[r] == k ? 1.0 : 0.0;
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0; c < r; ++c) col[r] -= lu[r * n + c] * col[c];
    for (std::size_t ri = n; ri-- > 0;) {
      for (std::size_t c = ri + 1; c < n; ++c) col[ri] -= lu[ri * n + c] * col[c];
      col[ri] /= lu[ri * n + ri];
    }
    for (std::size_t r = 0; r < n; ++r) inv[r * n + k] = col[r];
  }
  return true;
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
  // cyclic Jacobi; n is tiny so convergence is quick
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a[p * n + q];
        if (std::fabs(apq) < 1e-300) continue;
        double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i * n + i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

MetricValue make_metric(const TensorValue& g_dd) {
  if (g_dd.rank() != 2) fail("metric must be rank 2");
  std::size_t n = g_dd.dim();
  MetricValue m;
  m.dim = n;
  m.g = g_dd;
  m.ginv = TensorValue(n, {Slot::Up, Slot::Up});
  if (!lu_invert(g_dd.data(), n, m.ginv.data(), &m.det) || m.det == 0.0)
    fail("degenerate metric");
  m.sqrt_abs_det = std::sqrt(std::fabs(m.det));
  return m;
}

MetricValue minkowski_metric(std::size_t dim) {
  TensorValue g(dim, {Slot::Down, Slot::Down});
  g(0, 0) = -1.0;
  for (std::size_t i = 1; i < dim; ++i) g(i, i) = 1.0;
  return make_metric(g);
}

bool is_lorentzian(const MetricValue& g, double tol) {
  std::vector<double> a(g.g.data(), g.g.data() + g.dim * g.dim);
  std::vector<double> ev = symmetric_eigenvalues(std::move(a), g.dim);
  std::size_t neg = 0;
  for (double v : ev) {
    if (v < -tol) ++neg;
    if (std::fabs(v) <= tol) return false;
  }
  return neg == 1;
}

int permutation_sign(const std::size_t* p, std::size_t n) {
  int sign = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (p[i] == p[j]) return 0;
      if (p[i] > p[j]) sign = -sign;
    }
  }
  return sign;
}

int levi_civita(const std::size_t* idx, std::size_t n) { return permutation_sign(idx, n); }

TensorValue raise_index(const TensorValue& t, std::size_t slot, const MetricValue& g) {
  if (slot >= t.rank()) fail("slot out of range");
  if (t.slots()[slot] != Slot::Down) fail("raise_index: slot is already up");
  std::size_t n = t.dim();
  std::vector<Slot> slots = t.slots();
  slots[slot] = Slot::Up;
  TensorValue out(n, slots);
  std::size_t inner = ipow(n, t.rank() - slot - 1);
  std::size_t outer = t.size() / (inner * n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t in = 0; in < inner; ++in) {
        double acc = 0.0;
        for (std::size_t b = 0; b < n; ++b)
          acc += g.ginv(a, b) * t[(o * n + b) * inner + in];
        out[(o * n + a) * inner + in] = acc;
      }
    }
  }
  return out;
}

TensorValue lower_index(const TensorValue& t, std::size_t slot, const MetricValue& g) {
  if (slot >= t.rank()) fail("slot out of range");
  if (t.slots()[slot] != Slot::Up) fail("lower_index: slot is already down");
  std::size_t n = t.dim();
  std::vector<Slot> slots = t.slots();
  slots[slot] = Slot::Down;
  TensorValue out(n, slots);
  std::size_t inner = ipow(n, t.rank() - slot - 1);
  std::size_t outer = t.size() / (inner * n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t in = 0; in < inner; ++in) {
        double acc = 0.0;
        for (std::size_t b = 0; b < n; ++b)
          acc += g.g(a, b) * t[(o * n + b) * inner + in];
        out[(o * n + a) * inner + in] = acc;
      }
    }
  }
  return out;
}

TensorValue raise_all(const TensorValue& t, const MetricValue& g) {
  TensorValue out = t;
  for (std::size_t r = 0; r < t.rank(); ++r)
    if (out.slots()[r] == Slot::Down) out = raise_index(out, r, g);
  return out;
}

TensorValue lower_all(const TensorValue& t, const MetricValue& g) {
  TensorValue out = t;
  for (std::size_t r = 0; r < t.rank(); ++r)
    if (out.slots()[r] == Slot::Up) out = lower_index(out, r, g);
  return out;
}

TensorValue tensor_product(const TensorValue& a, const TensorValue& b) {
  if (a.dim() != b.dim()) fail("dimension mismatch");
  std::vector<Slot> slots = a.slots();
  slots.insert(slots.end(), b.slots().begin(), b.slots().end());
  TensorValue out(a.dim(), slots);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

TensorValue contract_slots(const TensorValue& t, std::size_t sa, std::size_t sb) {
  if (sa >= t.rank() || sb >= t.rank() || sa == sb) fail("bad contraction slots");
  if (t.slots()[sa] == t.slots()[sb]) fail("contraction needs one up and one down slot");
  std::size_t n = t.dim();
  std::size_t r = t.rank();
  std::vector<Slot> slots;
  for (std::size_t k = 0; k < r; ++k)
    if (k != sa && k != sb) slots.push_back(t.slots()[k]);
  TensorValue out(n, slots);
  std::vector<std::size_t> idx(r, 0), oidx(r > 2 ? r - 2 : 0, 0);
  std::size_t on = out.size();
  for (std::size_t of = 0; of < on; ++of) {
    // decode output flat index into the kept slots
    std::size_t rem = of;
    for (std::size_t k = slots.size(); k-- > 0;) {
      oidx[k] = rem % n;
      rem /= n;
    }
    std::size_t pos = 0;
    for (std::size_t k = 0; k < r; ++k)
      if (k != sa && k != sb) idx[k] = oidx[pos++];
    double acc = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      idx[sa] = c;
      idx[sb] = c;
      acc += t.at(idx.data());
    }
    out[of] = acc;
  }
  return out;
}

TensorValue antisymmetrize(const TensorValue& t) {
  std::size_t r = t.rank();
  if (r < 2) return t;
  for (Slot s : t.slots())
    if (s != t.slots()[0]) fail("antisymmetrize needs uniform variance");
  std::size_t n = t.dim();
  TensorValue out(n, t.slots());
  std::vector<std::size_t> perm(r), idx(r), src(r);
  double norm = 1.0 / static_cast<double>(factorial(r));
  for (std::size_t f = 0; f < t.size(); ++f) {
    std::size_t rem = f;
    for (std::size_t k = r; k-- > 0;) {
      idx[k] = rem % n;
      rem /= n;
    }
    std::iota(perm.begin(), perm.end(), 0);
    double acc = 0.0;
    do {
      int sg = permutation_sign(perm.data(), r);
      for (std::size_t k = 0; k < r; ++k) src[k] = idx[perm[k]];
      acc += sg * t.at(src.data());
    } while (std::next_permutation(perm.begin(), perm.end()));
    out[f] = acc * norm;
  }
  return out;
}

TensorValue symmetrize2(const TensorValue& t) {
  if (t.rank() != 2) fail("symmetrize2 needs rank 2");
  TensorValue out(t.dim(), t.slots());
  for (std::size_t a = 0; a < t.dim(); ++a)
    for (std::size_t b = 0; b < t.dim(); ++b) out(a, b) = 0.5 * (t(a, b) + t(b, a));
  return out;
}

FormValue FormValue::from_tensor(const TensorValue& t) {
  check_uniform(t, Slot::Down, "form components must be covariant");
  FormValue f;
  f.t_ = antisymmetrize(t);
  return f;
}

FormValue basis_form(std::size_t dim, std::initializer_list<std::size_t> idx) {
  std::vector<std::size_t> base(idx);
  std::size_t k = base.size();
  FormValue f(dim, k);
  if (k == 0) {
    f.raw()[0] = 1.0;
    return f;
  }
  std::vector<std::size_t> perm(k), tgt(k);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    int sg = permutation_sign(perm.data(), k);
    for (std::size_t i = 0; i < k; ++i) tgt[i] = base[perm[i]];
    if (permutation_sign(tgt.data(), k) != 0) f.raw().at(tgt.data()) = sg;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return f;
}

namespace {

// generic graded wedge on dense antisymmetric component arrays
TensorValue wedge_impl(const TensorValue& a, const TensorValue& b) {
  if (a.dim() != b.dim()) fail("dimension mismatch");
  std::size_t n = a.dim();
  std::size_t k = a.rank(), l = b.rank(), m = k + l;
  if (m > n) fail("wedge degree exceeds dimension");
  if (k == 0) {
    TensorValue out = b;
    out *= a[0];
    return out;
  }
  if (l == 0) {
    TensorValue out = a;
    out *= b[0];
    return out;
  }
  std::vector<Slot> slots = a.slots();
  slots.insert(slots.end(), b.slots().begin(), b.slots().end());
  TensorValue out(n, slots);
  double norm = 1.0 / (static_cast<double>(factorial(k)) * static_cast<double>(factorial(l)));
  std::vector<std::size_t> idx(m), perm(m), sa(k), sb(l);
  for (std::size_t f = 0; f < out.size(); ++f) {
    std::size_t rem = f;
    for (std::size_t q = m; q-- > 0;) {
      idx[q] = rem % n;
      rem /= n;
    }
    if (m > 1 && permutation_sign(idx.data(), m) == 0) continue;  // repeated index
    std::iota(perm.begin(), perm.end(), 0);
    double acc = 0.0;
    do {
      int sg = permutation_sign(perm.data(), m);
      for (std::size_t q = 0; q < k; ++q) sa[q] = idx[perm[q]];
      for (std::size_t q = 0; q < l; ++q) sb[q] = idx[perm[k + q]];
      acc += sg * a.at(sa.data()) * b.at(sb.data());
    } while (std::next_permutation(perm.begin(), perm.end()));
    out[f] = acc * norm;
  }
  return out;
}

}  // namespace

FormValue wedge(const FormValue& a, const FormValue& b) {
  FormValue out;
  out.raw() = wedge_impl(a.tensor(), b.tensor());
  return out;
}

TensorValue wedge_multivector(const TensorValue& a, const TensorValue& b) {
  check_uniform(a, Slot::Up, "wedge_multivector needs contravariant inputs");
  check_uniform(b, Slot::Up, "wedge_multivector needs contravariant inputs");
  return wedge_impl(a, b);
}

FormValue interior_product(const TensorValue& v, const FormValue& a) {
  if (a.degree() == 0) fail("interior product of a 0-form");
  if (v.rank() != 1 || v.slots()[0] != Slot::Up) fail("interior product needs a vector");
  std::size_t n = a.dim();
  FormValue out(n, a.degree() - 1);
  std::size_t inner = out.size();
  for (std::size_t j = 0; j < inner; ++j) {
    double acc = 0.0;
    for (std::size_t b = 0; b < n; ++b) acc += v(b) * a.tensor()[b * inner + j];
    out.raw()[j] = acc;
  }
  return out;
}

FormValue volume_form(const MetricValue& g, Orientation o) {
  std::size_t n = g.dim;
  FormValue mu(n, n);
  std::vector<std::size_t> idx(n);
  for (std::size_t f = 0; f < mu.size(); ++f) {
    std::size_t rem = f;
    for (std::size_t q = n; q-- > 0;) {
      idx[q] = rem % n;
      rem /= n;
    }
    int sg = levi_civita(idx.data(), n);
    if (sg != 0) mu.raw()[f] = o.sign * g.sqrt_abs_det * sg;
  }
  return mu;
}

FormValue hodge_star(const FormValue& a, const MetricValue& g, Orientation o) {
  std::size_t n = g.dim;
  std::size_t k = a.degree();
  if (k > n) fail("form degree exceeds dimension");
  FormValue mu = volume_form(g, o);
  TensorValue up = raise_all(a.tensor(), g);
  std::size_t m = n - k;
  FormValue out(n, m);
  double norm = 1.0 / static_cast<double>(factorial(k));
  std::size_t msize = out.size();
  for (std::size_t j = 0; j < msize; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < up.size(); ++i) {
      double c = up[i];
      if (c != 0.0) acc += c * mu.tensor()[i * msize + j];
    }
    out.raw()[j] = acc * norm;
  }
  return out;
}

double form_inner(const FormValue& a, const FormValue& b, const MetricValue& g) {
  if (a.degree() != b.degree()) fail("degree mismatch");
  TensorValue up = raise_all(b.tensor(), g);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a.tensor()[i] * up[i];
  return acc / static_cast<double>(factorial(a.degree()));
}

TensorValue sharp(const FormValue& a, const MetricValue& g) { return raise_all(a.tensor(), g); }

FormValue flat(const TensorValue& x, const MetricValue& g) {
  check_uniform(x, Slot::Up, "flat expects a contravariant antisymmetric tensor");
  FormValue out;
  out.raw() = lower_all(x, g);
  return out;
}

TensorValue multivector_star(const TensorValue& x, const MetricValue& g, Orientation o) {
  return sharp(hodge_star(flat(x, g), g, o), g);
}

FormValue density_dual_form(const TensorValue& x, const MetricValue& g, Orientation o) {
  return hodge_star(flat(x, g), g, o);
}

TensorValue density_from_dual_form(const FormValue& w, const MetricValue& g, Orientation o) {
  std::size_t n = g.dim;
  std::size_t k = n - w.degree();
  TensorValue x = sharp(hodge_star(w, g, o), g);
  double sgn = -((k * (n - k)) % 2 == 0 ? 1.0 : -1.0);
  x *= sgn;
  return x;
}

TensorValue trace_tensor_product(const TensorValue& x, const FormValue& w) {
  std::size_t k = x.rank();
  if (k == 0 || k != w.degree() || x.dim() != w.dim()) fail("trace_tensor_product shape mismatch");
  check_uniform(x, Slot::Up, "trace_tensor_product expects a multivector");
  std::size_t n = x.dim();
  TensorValue out(n, {Slot::Up, Slot::Down});
  std::size_t block = ipow(n, k - 1);
  double norm = 1.0 / static_cast<double>(factorial(k - 1));
  for (std::size_t mu = 0; mu < n; ++mu) {
    for (std::size_t nu = 0; nu < n; ++nu) {
      double acc = 0.0;
      for (std::size_t gam = 0; gam < block; ++gam)
        acc += x[mu * block + gam] * w.tensor()[nu * block + gam];
      out(mu, nu) = acc * norm;
    }
  }
  return out;
}

double contract_full(const TensorValue& x, const FormValue& w) {
  if (x.rank() != w.degree() || x.dim() != w.dim()) fail("contract_full shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * w.tensor()[i];
  return acc / static_cast<double>(factorial(x.rank()));
}

double contract_plain(const TensorValue& pi, const TensorValue& kappa) {
  if (pi.dim() != kappa.dim() || pi.rank() != kappa.rank()) fail("contract_plain shape mismatch");
  for (std::size_t r = 0; r < pi.rank(); ++r)
    if (pi.slots()[r] == kappa.slots()[r]) fail("contract_plain needs dual variance");
  double acc = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) acc += pi[i] * kappa[i];
  return acc;
}

TensorValue hat_lift(const TensorValue& kappa) {
  std::size_t n = kappa.dim();
  std::size_t r = kappa.rank();
  std::vector<Slot> slots = kappa.slots();
  slots.push_back(Slot::Up);
  slots.push_back(Slot::Down);
  TensorValue out(n, slots);
  if (r == 0) return out;  // scalars have nothing to shuffle
  std::vector<std::size_t> idx(r), mod(r);
  for (std::size_t f = 0; f < kappa.size(); ++f) {
    std::size_t rem = f;
    for (std::size_t q = r; q-- > 0;) {
      idx[q] = rem % n;
      rem /= n;
    }
    for (std::size_t rp = 0; rp < r; ++rp) {
      mod = idx;
      if (kappa.slots()[rp] == Slot::Down) {
        // contributes at nu = idx[rp], every mu
        for (std::size_t mu = 0; mu < n; ++mu) {
          mod[rp] = mu;
          out[(f * n + idx[rp]) * n + mu] += kappa.at(mod.data());
        }
      } else {
        // contributes at mu = idx[rp], every nu
        for (std::size_t nu = 0; nu < n; ++nu) {
          mod[rp] = nu;
          out[(f * n + nu) * n + idx[rp]] -= kappa.at(mod.data());
        }
      }
    }
  }
  return out;
}

TensorValue hat_apply(const TensorValue& kappa_hat, const TensorValue& dzeta) {
  std::size_t n = kappa_hat.dim();
  std::size_t r = kappa_hat.rank();
  if (r < 2) fail("hat_apply needs a lifted tensor");
  std::vector<Slot> slots(kappa_hat.slots().begin(), kappa_hat.slots().end() - 2);
  TensorValue out(n, slots);
  for (std::size_t f = 0; f < out.size(); ++f) {
    double acc = 0.0;
    for (std::size_t nu = 0; nu < n; ++nu)
      for (std::size_t mu = 0; mu < n; ++mu)
        acc += kappa_hat[(f * n + nu) * n + mu] * dzeta(mu, nu);
    out[f] = acc;
  }
  return out;
}

TensorValue therefore_contract(const TensorValue& pi, const TensorValue& kappa_hat) {
  std::size_t n = kappa_hat.dim();
  std::size_t r = kappa_hat.rank() - 2;
  if (pi.rank() != r || pi.dim() != n) fail("therefore_contract shape mismatch");
  for (std::size_t q = 0; q < r; ++q)
    if (pi.slots()[q] == kappa_hat.slots()[q]) fail("therefore_contract needs dual variance");
  TensorValue out(n, {Slot::Up, Slot::Down});
  for (std::size_t f = 0; f < pi.size(); ++f) {
    double c = pi[f];
    if (c == 0.0) continue;
    for (std::size_t nu = 0; nu < n; ++nu)
      for (std::size_t mu = 0; mu < n; ++mu)
        out(nu, mu) += c * kappa_hat[(f * n + nu) * n + mu];
  }
  return out;
}

}  // namespace relcont

#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "relcont/util.hpp"

namespace relcont {

enum class Slot : unsigned char { Up, Down };

// Dense component array with an explicit variance signature. Index order is
// row-major, first slot slowest. Rank 0 is a scalar (one component).
class TensorValue {
 public:
  TensorValue() = default;
  explicit TensorValue(std::size_t dim) : dim_(dim), data_(1, 0.0) {}
  TensorValue(std::size_t dim, std::vector<Slot> slots)
      : dim_(dim), slots_(std::move(slots)), data_(ipow(dim, slots_.size()), 0.0) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return slots_.size(); }
  const std::vector<Slot>& slots() const { return slots_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  template <class... I>
  double& operator()(I... is) {
    return data_[flat(is...)];
  }
  template <class... I>
  double operator()(I... is) const {
    return data_[flat(is...)];
  }

  double& at(const std::size_t* idx) {
    std::size_t f = 0;
    for (std::size_t r = 0; r < rank(); ++r) f = f * dim_ + idx[r];
    return data_[f];
  }
  double at(const std::size_t* idx) const {
    return const_cast<TensorValue*>(this)->at(idx);
  }

  TensorValue& operator+=(const TensorValue& o);
  TensorValue& operator-=(const TensorValue& o);
  TensorValue& operator*=(double a) {
    for (double& v : data_) v *= a;
    return *this;
  }
  friend TensorValue operator+(TensorValue a, const TensorValue& b) { return a += b; }
  friend TensorValue operator-(TensorValue a, const TensorValue& b) { return a -= b; }
  friend TensorValue operator*(TensorValue a, double s) { return a *= s; }
  friend TensorValue operator*(double s, TensorValue a) { return a *= s; }
  friend TensorValue operator-(TensorValue a) { return a *= -1.0; }

 private:
  template <class... I>
  std::size_t flat(I... is) const {
    std::size_t f = 0;
    ((f = f * dim_ + static_cast<std::size_t>(is)), ...);
    return f;
  }
  std::size_t dim_ = 0;
  std::vector<Slot> slots_;
  std::vector<double> data_;
};

struct Orientation {
  int sign = 1;
};

// Lorentzian metric at a point: components, inverse, |det| data. Signature is
// (-,+,...,+) throughout; is_lorentzian checks the eigenvalue count.
struct MetricValue {
  std::size_t dim = 0;
  TensorValue g;     // Down Down
  TensorValue ginv;  // Up Up
  double det = 0.0;
  double sqrt_abs_det = 0.0;
};

TensorValue scalar_value(std::size_t dim, double v);
TensorValue delta_tensor(std::size_t dim);                       // identity, Up Down
TensorValue basis_vector(std::size_t dim, std::size_t i);        // Up
std::vector<Slot> slots_of(std::initializer_list<Slot> s);

// --- small dense linear algebra (row-major, n <= ~6) ---
bool lu_invert(const double* a, std::size_t n, double* inv, double* det);
std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n);

MetricValue make_metric(const TensorValue& g_dd);
MetricValue minkowski_metric(std::size_t dim);
bool is_lorentzian(const MetricValue& g, double tol = 1e-10);

int permutation_sign(const std::size_t* p, std::size_t n);  // 0 if repeats
int levi_civita(const std::size_t* idx, std::size_t n);

// --- index gymnastics ---
TensorValue raise_index(const TensorValue& t, std::size_t slot, const MetricValue& g);
TensorValue lower_index(const TensorValue& t, std::size_t slot, const MetricValue& g);
TensorValue raise_all(const TensorValue& t, const MetricValue& g);
TensorValue lower_all(const TensorValue& t, const MetricValue& g);
TensorValue tensor_product(const TensorValue& a, const TensorValue& b);
TensorValue contract_slots(const TensorValue& t, std::size_t a, std::size_t b);
TensorValue antisymmetrize(const TensorValue& t);  // over all slots, uniform variance
TensorValue symmetrize2(const TensorValue& t);     // rank 2

// Fully antisymmetric covariant array; antisymmetry is enforced on
// construction (dense storage, all index orders populated).
class FormValue {
 public:
  FormValue() = default;
  FormValue(std::size_t dim, std::size_t degree)
      : t_(dim, std::vector<Slot>(degree, Slot::Down)) {}
  static FormValue from_tensor(const TensorValue& t);  // antisymmetrizes

  std::size_t dim() const { return t_.dim(); }
  std::size_t degree() const { return t_.rank(); }
  const TensorValue& tensor() const { return t_; }
  TensorValue& raw() { return t_; }  // internal builders only; keep antisymmetric

  template <class... I>
  double operator()(I... is) const {
    return t_(is...);
  }
  double operator[](std::size_t i) const { return t_[i]; }
  std::size_t size() const { return t_.size(); }
  bool empty() const { return t_.empty(); }

  FormValue& operator+=(const FormValue& o) {
    t_ += o.t_;
    return *this;
  }
  FormValue& operator-=(const FormValue& o) {
    t_ -= o.t_;
    return *this;
  }
  FormValue& operator*=(double a) {
    t_ *= a;
    return *this;
  }
  friend FormValue operator+(FormValue a, const FormValue& b) { return a += b; }
  friend FormValue operator-(FormValue a, const FormValue& b) { return a -= b; }
  friend FormValue operator*(FormValue a, double s) { return a *= s; }
  friend FormValue operator*(double s, FormValue a) { return a *= s; }
  friend FormValue operator-(FormValue a) { return a *= -1.0; }

 private:
  TensorValue t_;
};

// dx^{i0} ^ dx^{i1} ^ ... with unit strictly-increasing component
FormValue basis_form(std::size_t dim, std::initializer_list<std::size_t> idx);

// --- exterior algebra ---
FormValue wedge(const FormValue& a, const FormValue& b);
FormValue interior_product(const TensorValue& v, const FormValue& a);
FormValue volume_form(const MetricValue& g, Orientation o);
FormValue hodge_star(const FormValue& a, const MetricValue& g, Orientation o);
double form_inner(const FormValue& a, const FormValue& b, const MetricValue& g);
TensorValue sharp(const FormValue& a, const MetricValue& g);  // all-Up antisymmetric
FormValue flat(const TensorValue& x, const MetricValue& g);   // from all-Up antisymmetric

// multivector (all-Up antisymmetric TensorValue) helpers
TensorValue wedge_multivector(const TensorValue& a, const TensorValue& b);
TensorValue multivector_star(const TensorValue& x, const MetricValue& g, Orientation o);

// k-multivector density factor x <-> (n+1-k)-form under x mu(g) = sharp of
// something iff omega = star(flat(x)); inverse carries the double-star sign.
FormValue density_dual_form(const TensorValue& x, const MetricValue& g, Orientation o);
TensorValue density_from_dual_form(const FormValue& w, const MetricValue& g, Orientation o);

// (x (x)tr w)^mu_nu = 1/(k-1)! x^{mu G} w_{nu G}; for k = 2 this is x^{mg} w_{ng}
TensorValue trace_tensor_product(const TensorValue& x, const FormValue& w);
// 1/k! x^I w_I
double contract_full(const TensorValue& x, const FormValue& w);
// plain sum over all slots, pi variance dual to kappa, no factorials
double contract_plain(const TensorValue& pi, const TensorValue& kappa);

// kappa-hat: two slots appended at the end, [Up(nu), Down(mu)];
// hat[I, nu, mu] = sum_{r down} kappa[I with i_r -> mu] delta^nu_{i_r}
//               - sum_{r up}   kappa[I with i_r -> nu] delta^{i_r}_mu
TensorValue hat_lift(const TensorValue& kappa);
// hat : dzeta -> shape of kappa; dzeta slots [Up, Down] = d_b zeta^a at (a,b)
TensorValue hat_apply(const TensorValue& kappa_hat, const TensorValue& dzeta);
// (pi . hat)^nu_mu: plain contraction of pi over the original slots
TensorValue therefore_contract(const TensorValue& pi, const TensorValue& kappa_hat);

}  // namespace relcont

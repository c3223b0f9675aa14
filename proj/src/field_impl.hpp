#pragma once

#include "kramers/ad.hpp"
#include "kramers/potential.hpp"

namespace kramers::detail {

// Evaluates Impl::compute<T>(x, y) with doubles, gradients or jets.
template <class Impl, int D>
class DualField : public PotentialField {
 public:
  using PotentialField::PotentialField;

  double value(const Point& p) const override {
    return self().template compute<double>(p[0], p[1]) + spec().offset;
  }

  double gradient(const Point& p, Point& g) const override {
    using G = ad::Grad<D>;
    G x = G::variable(p[0], 0);
    G y = D == 2 ? G::variable(p[1], D - 1) : G(p[1]);
    G r = self().template compute<G>(x, y);
    g[0] = r.g[0];
    g[1] = D == 2 ? r.g[D - 1] : 0.0;
    return r.v + spec().offset;
  }

  Evaluation eval(const Point& p) const override {
    using J = ad::Jet<D>;
    J x = J::variable(p[0], 0);
    J y = D == 2 ? J::variable(p[1], D - 1) : J(p[1]);
    J r = self().template compute<J>(x, y);
    Evaluation e;
    e.value = r.v + spec().offset;
    e.gradient[0] = r.g[0];
    e.hessian[0] = r.H[0];
    if constexpr (D == 2) {
      e.gradient[1] = r.g[1];
      e.hessian[1] = r.H[1];
      e.hessian[2] = r.H[2];
      e.hessian[3] = r.H[3];
    }
    return e;
  }

 private:
  const Impl& self() const { return static_cast<const Impl&>(*this); }
};

template <int D>
class ExpressionField : public DualField<ExpressionField<D>, D> {
 public:
  explicit ExpressionField(PotentialSpec spec) : DualField<ExpressionField<D>, D>(std::move(spec)) {}
  template <class T>
  T compute(const T& x, const T& y) const {
    return this->spec().expression->template evaluate<T>(x, y);
  }
};

template <class F, int D>
class NativeField : public DualField<NativeField<F, D>, D> {
 public:
  NativeField(PotentialSpec spec, F f) : DualField<NativeField<F, D>, D>(std::move(spec)), f_(std::move(f)) {}
  template <class T>
  T compute(const T& x, const T& y) const {
    return f_(x, y);
  }

 private:
  F f_;
};

// native implementation of a catalog entry, or null
FieldPtr make_native(const PotentialSpec& spec);

}  // namespace kramers::detail

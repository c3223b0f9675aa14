#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kramers/geometry.hpp"

namespace kramers {

enum class Op : std::uint8_t { Number, VarX, VarY, Param, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Log, Tanh };

struct ExprNode {
  Op op = Op::Number;
  int lhs = -1;
  int rhs = -1;
  double number = 0.0;  // literal, or bound parameter value
  std::string name;     // parameter name
  // Pow only: 0 integer constant exponent, 1 real constant exponent, 2 variable exponent
  int pow_mode = 2;
  int int_exponent = 0;
  double const_exponent = 0.0;
};

// Parsed expression tree. Children always precede their parent in nodes().
class Expression {
 public:
  Expression() = default;
  Expression(std::vector<ExprNode> nodes, int root);

  const std::vector<ExprNode>& nodes() const { return nodes_; }
  int root() const { return root_; }
  bool uses_y() const;
  std::string to_string() const;
  bool same_tree(const Expression& other) const;

  // T is double, ad::Grad<D> or ad::Jet<D> for D = 1, 2
  template <class T>
  T evaluate(const T& x, const T& y) const;

 private:
  std::vector<ExprNode> nodes_;
  int root_ = -1;
};

Expression parse_expression(const std::string& text, const std::map<std::string, double>& params, int max_dim = 2);

struct PotentialSpec {
  std::string catalog;  // catalog name, empty for expression sources
  std::string text;     // expression text
  std::map<std::string, double> params;
  int dimension = 1;
  double offset = 0.0;  // constant added to f
  std::shared_ptr<const Expression> expression;
};

PotentialSpec parse_potential(const std::string& text, const std::map<std::string, double>& params = {});
// reparse of the printed tree; used for round trips
PotentialSpec reparse(const PotentialSpec& spec);

struct Evaluation {
  double value = 0.0;
  Point gradient{0.0, 0.0};
  std::array<double, 4> hessian{0.0, 0.0, 0.0, 0.0};  // row-major 2x2, only [0] used in 1D
};

class PotentialField {
 public:
  explicit PotentialField(PotentialSpec spec) : spec_(std::move(spec)) {}
  virtual ~PotentialField() = default;

  const PotentialSpec& spec() const { return spec_; }
  int dim() const { return spec_.dimension; }

  virtual double value(const Point& p) const = 0;
  // fills g and returns the value
  virtual double gradient(const Point& p, Point& g) const = 0;
  virtual Evaluation eval(const Point& p) const = 0;

 private:
  PotentialSpec spec_;
};

using FieldPtr = std::shared_ptr<const PotentialField>;

FieldPtr make_field(const PotentialSpec& spec);
// the same potential plus a constant
FieldPtr make_shifted(const PotentialSpec& spec, double c);

Evaluation evaluate(const PotentialField& field, const DomainGeometry& geom, const Point& x);
double boundary_normal_derivative(const PotentialField& field, const DomainGeometry& geom, const Point& z);

}  // namespace kramers

#pragma once

// Seeded generator of small test algebras. Every family is an O-order inside
// a split algebra K^r, so T_K is semisimple and characters are coordinate
// projections.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "congrua/finalg.hpp"

namespace congrua {

// An order given by a basis of vectors in K^r, closed under coordinatewise
// products and containing (1,...,1).
struct Order {
  std::vector<Vector> basis;
  std::size_t ambient = 0;

  FiniteFlatAlgebra algebra(unsigned long p) const { return FiniteFlatAlgebra::suborder(basis, p); }
  // Character given by projection onto an ambient coordinate.
  Character projection(std::size_t coordinate) const;
};

Order split_order(std::size_t n);
// O[x]/∏(x − a_i), embedded by evaluation at the roots.
Order monogenic_order(const std::vector<Rational>& roots);
// {(a, b) : a ≡ b mod p^m}.
Order glued_order(int m, unsigned long p);
// {(a, b, c) : a ≡ b ≡ c mod p^m}.
Order triple_glue_order(int m, unsigned long p);
// {(x, y) ∈ A × B : x_i ≡ y_j mod p^m} for ambient coordinates i, j.
Order fiber_product(const Order& a, std::size_t i, const Order& b, std::size_t j, int m,
                    unsigned long p);
Order tensor_square(const Order& a);

// Base change datum between orders; pi is the ambient linear map, which must
// carry the source order into the target order.
BaseChangeDatum order_datum(const Order& source, const Order& target, const Matrix& pi,
                            std::size_t coordinate, unsigned long p);

enum class AlgebraFamily { SplitProduct, MonogenicGlue, FiberProduct, TripleGlue, TensorSquare };

inline constexpr AlgebraFamily kAllFamilies[] = {
    AlgebraFamily::SplitProduct, AlgebraFamily::MonogenicGlue, AlgebraFamily::FiberProduct,
    AlgebraFamily::TripleGlue, AlgebraFamily::TensorSquare};

std::string_view to_string(AlgebraFamily f);

struct RandAlgSpec {
  AlgebraFamily family = AlgebraFamily::SplitProduct;
  unsigned long p = 3;
  int max_rank = 4;
  int max_exponent = 3;
};

struct RandomInstance {
  Order order;
  FiniteFlatAlgebra algebra;
  Character lambda;
  // A surjective base change onto a quotient order, with λ on the target.
  BaseChangeDatum datum;
  std::uint64_t seed = 0;
};

RandomInstance random_algebra(const RandAlgSpec& spec, std::uint64_t seed);

}  // namespace congrua

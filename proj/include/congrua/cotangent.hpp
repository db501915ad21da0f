#pragma once

// C1 = ℘/℘², the complete-intersection criterion, Wiles defects (directly and
// through a presentation), and the base change C1 module.

#include <optional>
#include <vector>

#include "congrua/finalg.hpp"
#include "congrua/poly.hpp"

namespace congrua {

struct C1Result {
  FiniteModulePresentation presentation;
  PIdeal fitting;  // zero ideal when C1 is not finite
};

C1Result c1(const FiniteFlatAlgebra& t, const Character& lambda);

enum class LciVerdict { CompleteIntersection, NotCI };

struct LciReport {
  LciVerdict verdict;
  PIdeal eta;
  PIdeal fitting_c1;
};

LciReport lci_criterion(const FiniteFlatAlgebra& t, const Character& lambda);

// Fitt(C1)·η⁻¹; throws Degenerate when η is zero.
PIdeal wiles_defect(const FiniteFlatAlgebra& t, const Character& lambda);

// O[x_1..x_g]/(f_0..f_g) ≅ T, with x_i ↦ images[i].
struct AlgebraPresentation {
  std::size_t num_vars = 0;
  std::vector<Polynomial> relations;
  FiniteFlatAlgebra target;
  std::vector<Vector> images;
};

// Throws InvalidArgument unless the relations vanish on the images, the images
// generate the target, and there are exactly g + 1 relations.
void validate_presentation(const AlgebraPresentation& p);

// Value of a polynomial at algebra elements.
Vector evaluate_in(const FiniteFlatAlgebra& t, const Polynomial& f, const std::vector<Vector>& xs);

struct CICover {
  std::vector<Polynomial> regular;  // the g relations cutting out T₀
  Polynomial excluded;              // T = T₀/(f)
  FiniteFlatAlgebra algebra;        // T₀
  Character lambda;                 // λ₀
  Vector f;                         // image of the excluded relation in T₀
};

// Searches g-subsets of the relations first, then recombinations
// f_j + c·f_excluded with c ∈ {−1, 0, 1}, in a fixed order. T₀ must be finite
// flat over O and local with every x_i in its maximal ideal.
std::optional<CICover> find_ci_cover(const AlgebraPresentation& p, const Character& lambda);

// Fitt(C1 T)·λ₀(Ann_{T₀} f) = Fitt(C1 T₀)·Fitt(H1) solved for Fitt(H1).
// Throws NoCICover when the search fails.
PIdeal defect_via_cotangent_complex(const AlgebraPresentation& p, const Character& lambda);

// ker θ ⊗_{T′,λ′} O = ker θ / (ker λ′ · ker θ).
FiniteModulePresentation c1_sharp(const BaseChangeDatum& d);

struct C1SequenceReport {
  PIdeal c1_source;  // Fitt C1^{λ′}(T′)
  PIdeal c1_target;  // Fitt C1^λ(T)
  PIdeal c1_sharp;
  bool target_is_ci = false;
  bool identity() const { return c1_source == c1_target * c1_sharp; }
  // The identity is only claimed for complete intersection targets.
  bool holds() const { return !target_is_ci || identity(); }
};

C1SequenceReport check_c1_exact_sequence(const BaseChangeDatum& d);

nlohmann::json to_json(const AlgebraPresentation& p);

}  // namespace congrua

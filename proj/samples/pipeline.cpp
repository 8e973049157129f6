// Walk a small strict contraction through the library: structure, dilation,
// kernel-ideal model, representatives and a similarity test.

#include "rowdil/dilation.hpp"
#include "rowdil/equivalence.hpp"
#include "rowdil/ideal.hpp"

#include <iostream>

using namespace rowdil;

namespace {

void show(const char* name, const Mat& m) {
  Eigen::IOFormat fmt(6, 0, ", ", "\n", "  [", "]");
  std::cout << name << ":\n" << m.real().format(fmt) << "\n";
}

}  // namespace

int main() {
  ToleranceConfig cfg;
  Mat a1(2, 2), a2(2, 2);
  a1 << 0, 0.5, 0.5, 0;
  a2 << 0.5, 0, 0, 0;
  RowContraction a({a1, a2});

  auto rep = structure_report(a, cfg);
  std::cout << "pure rank " << rep.pure_rank << ", Cuntz blocks " << rep.blocks.size() << ", "
            << irreducibility_name(rep.irreducibility) << "\n";

  auto dil = build_dilation(a, 4, cfg);
  auto chk = verify_dilation(dil, cfg);
  std::cout << "dilation: ambient " << dil.ambient_dim << ", isometry residual " << chk.isometry_residual
            << ", minimal rank " << chk.minimality_rank << "/" << chk.interior_dim << "\n";

  auto model = coinvariant_model(a, cfg);
  show("Gram metric", model.gram.metric());

  auto reps = extract_pure_rank_one(model, cfg);
  for (std::size_t j = 0; j < reps.size(); ++j) {
    std::cout << "representative " << j << " (pure rank " << pure_rank(reps[j], cfg) << ")\n";
    show("  B1^*", reps[j][0].adjoint());
    show("  B2^*", reps[j][1].adjoint());
  }
  auto rec = cstar_convex_reconstruct(a, reps, cfg);
  std::cout << "reconstruction residual " << rec.residual << "\n";

  std::cout << "wandering dimension " << wandering_basis(a, cfg).dim() << "\n";
  for (double t : {0.2, 0.5, 1.0}) {
    Mat b1(2, 2);
    b1 << 0, 1 / (4 * t), t, 0;
    RowContraction b({b1, a2});
    auto r = similarity_test_ideal(a, b, cfg);
    std::cout << "t = " << t << ": contractive " << inspect(b, cfg).is_contractive << ", similar " << r.similar
              << (r.outside_hypotheses ? " (norm 1 or more)" : "") << "\n";
  }
  return 0;
}

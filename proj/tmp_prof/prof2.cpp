#include "qpr/rng.hpp"
#include "qpr/rh.hpp"
#include <cstdio>
using namespace qpr;
int main(){
  PrecisionProfile prof; prof.p=5; prof.k=1; prof.N=12; prof.alpha=3; prof.s=1; prof.n_max=1;
  auto ctx = BdrContext::make(prof);
  Rng rng(977);
  TConnection n = random_connection(rng, ctx, 2, 3);
  const int r = 3, d = 2, level = 1;
  i64 pl = 5;
  BdrElement plc = BdrElement::from_int(ctx, pl);
  GammaVector beta(std::vector<i64>{5, 0});
  const ToricMat& phi = n.mats[0];
  int j = 0; // column
  std::vector<ToricElement> u(r, ToricElement::zero(ctx, d));
  u[j] = ToricElement::constant(d, BdrElement::one(ctx));
  for (int step = 1; step <= 40; ++step) {
    std::vector<ToricElement> next(r, ToricElement::zero(ctx, d));
    for (int a = 0; a < r; ++a) {
      ToricElement s = partial_gamma(beta, u[a]);
      for (int k2 = 0; k2 < r; ++k2) s = s + plc * (phi.at(a, k2) * u[k2]);
      next[a] = s.div_int(step);
    }
    u = std::move(next);
    size_t total = 0; i64 maxabs = -100, maxval = -100; i64 minval = 1000;
    for (auto& x : u) { total += x.terms().size();
      for (auto& [key, cf] : x.terms()) { maxabs = std::max(maxabs, cf.eff_prec()); minval = std::min(minval, content_valuation(cf)); } }
    printf("step %d: terms=%zu maxabs=%lld minval=%lld\n", step, total, (long long)maxabs, (long long)minval);
    if (total == 0) { printf("terminated\n"); break; }
  }
  return 0;
}

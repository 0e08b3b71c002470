#include "qpr/rng.hpp"
#include "qpr/rh.hpp"
#include <cstdio>
#include <chrono>
using namespace qpr;
using Clock = std::chrono::steady_clock;
static double ms(Clock::time_point a, Clock::time_point b){ return std::chrono::duration<double,std::milli>(b-a).count(); }
int main(){
  PrecisionProfile prof; prof.p=5; prof.k=1; prof.N=12; prof.alpha=3; prof.s=1; prof.n_max=1;
  auto t0 = Clock::now();
  auto ctx = BdrContext::make(prof);
  auto t1 = Clock::now();
  printf("ctx: %.1f ms\n", ms(t0,t1)); fflush(stdout);
  Rng rng(977);
  TConnection n = random_connection(rng, ctx, 2, 3);
  auto t2 = Clock::now();
  printf("connection: %.1f ms\n", ms(t1,t2)); fflush(stdout);
  { size_t mx=0; for (auto& m : n.mats) for (auto& e : m.data()) mx = std::max(mx, e.terms().size());
    printf("conn max terms/entry: %zu\n", mx); fflush(stdout); }
  printf("integrable: %d\n", (int)integrability_check(n).ok);
  auto t3 = Clock::now();
  printf("integrability: %.1f ms\n", ms(t2,t3)); fflush(stdout);
  Cocycle c = exp_correspondence(n, 1);
  auto t4 = Clock::now();
  printf("exp: %.1f ms\n", ms(t3,t4)); fflush(stdout);
  for (int i=0;i<2;++i){ size_t mx=0; for (auto& e : c.mats[i].data()) mx = std::max(mx, e.terms().size());
    printf("mat %d max terms/entry: %zu\n", i, mx); }
  fflush(stdout);
  printf("check: %d\n", (int)cocycle_check(c).ok);
  auto t5 = Clock::now();
  printf("cocycle_check: %.1f ms\n", ms(t4,t5)); fflush(stdout);
  TConnection back = log_correspondence(c);
  auto t6 = Clock::now();
  printf("log: %.1f ms\n", ms(t5,t6));
  return 0;
}

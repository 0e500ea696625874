#include <cstdlib>
#include <cstring>

#include "surfnema/kernels.hpp"

namespace surfnema::kernels {

namespace {

Isa g_isa = Isa::Scalar;
const Ops* g_ops = nullptr;

void resolve() {
  Isa isa = avx2_supported() ? Isa::Avx2 : Isa::Scalar;
  if (const char* env = std::getenv("SURFNEMA_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) isa = Isa::Scalar;
    else if (std::strcmp(env, "avx2") == 0 && avx2_supported()) isa = Isa::Avx2;
    // unknown values fall back to auto-detection
  }
  g_isa = isa;
  g_ops = (isa == Isa::Avx2) ? &avx2_ops() : &scalar_ops();
}

}  // namespace

const Ops& ops() {
  if (!g_ops) resolve();
  return *g_ops;
}

Isa active_isa() {
  if (!g_ops) resolve();
  return g_isa;
}

std::string isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void force_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_supported()) isa = Isa::Scalar;
  g_isa = isa;
  g_ops = (isa == Isa::Avx2) ? &avx2_ops() : &scalar_ops();
}

}  // namespace surfnema::kernels

#include <atomic>

#include "mfsda/error.hpp"
#include "mfsda/kernels.hpp"

namespace mfsda::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table* table_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return &scalar::table();
    case Isa::Avx2: return cpu_has_avx2() ? avx2::table() : nullptr;
  }
  return nullptr;
}

std::atomic<const Table*>& slot() {
  static std::atomic<const Table*> current{table_for(best_available())};
  return current;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool available(Isa isa) { return table_for(isa) != nullptr; }

Isa best_available() { return available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar; }

void set_active(Isa isa) {
  const Table* t = table_for(isa);
  if (t == nullptr) {
    throw Error(ErrorCode::InvalidConfig,
                std::string("kernel ISA '") + std::string(to_string(isa)) +
                    "' is not available on this host");
  }
  slot().store(t, std::memory_order_release);
}

Isa active() { return active_table().isa; }

const Table& active_table() { return *slot().load(std::memory_order_acquire); }

}  // namespace mfsda::kernels

#include "vscbeat/kernels.hpp"

#include "vscbeat/errors.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace vscbeat::kernels {

#ifdef VSCBEAT_HAVE_AVX2
const Table& avx2_kernels() noexcept;
#endif

namespace {

#ifdef VSCBEAT_HAVE_AVX2
bool cpu_has_avx2() noexcept
{
#if defined(__GNUC__) || defined(__clang__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}
#endif

const Table* initial_table() noexcept
{
    const char* env = std::getenv("VSCBEAT_SIMD");
    const std::string_view request = env ? env : "";
    if (request == "scalar") return &scalar_table();
    if (const Table* avx2 = avx2_table(); avx2 && (request.empty() || request == "avx2")) return avx2;
    return &scalar_table();
}

std::atomic<const Table*>& current()
{
    static std::atomic<const Table*> table{initial_table()};
    return table;
}

} // namespace

const Table* avx2_table() noexcept
{
#ifdef VSCBEAT_HAVE_AVX2
    static const bool usable = cpu_has_avx2();
    return usable ? &avx2_kernels() : nullptr;
#else
    return nullptr;
#endif
}

bool backend_available(Backend backend) noexcept
{
    return backend == Backend::Scalar || avx2_table() != nullptr;
}

const char* backend_name(Backend backend) noexcept
{
    return backend == Backend::Avx2 ? "avx2" : "scalar";
}

const Table& active() noexcept
{
    return *current().load(std::memory_order_acquire);
}

Backend active_backend() noexcept
{
    return active().backend;
}

void force_backend(Backend backend)
{
    require(backend_available(backend), ErrorKind::InvalidParameter,
            std::string("kernel backend not available: ") + backend_name(backend));
    current().store(backend == Backend::Avx2 ? avx2_table() : &scalar_table(), std::memory_order_release);
}

} // namespace vscbeat::kernels

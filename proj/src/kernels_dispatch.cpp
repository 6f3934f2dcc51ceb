#include "rollsim/kernels.hpp"

#include <cstdlib>

#include "rollsim/errors.hpp"

namespace rollsim::kernels {
namespace {

const Backend* lookup(const std::string& name) {
    if (name == "scalar") return &scalar_backend();
    if (name == "avx2") return avx2_backend();
    return nullptr;
}

const Backend* select_default() {
    if (const char* env = std::getenv("ROLLSIM_KERNELS")) {
        if (const Backend* b = lookup(env)) return b;
        // Unknown or unsupported request: fall through to autodetect rather
        // than abort a whole run over an env var typo.
    }
    if (const Backend* b = avx2_backend()) return b;
    return &scalar_backend();
}

const Backend*& current() {
    static const Backend* backend = select_default();
    return backend;
}

}  // namespace

const Backend& active() { return *current(); }

void force_backend(const std::string& name) {
    const Backend* b = lookup(name);
    if (b == nullptr)
        throw ValidationError("unknown or unsupported kernel backend: " + name);
    current() = b;
}

}  // namespace rollsim::kernels
